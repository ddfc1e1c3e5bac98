//! The toroidal world: merit-proportional scheduling, updates, births.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{self, TaskSuccessRecord};
use crate::environment::{EnvConfig, EnvKind, Environment};
use crate::error::{Error, Result};
use crate::isa::{Inst, InstructionSet};
use crate::organism::{self, apply_divide_mutations, DivideRules, MutationRates, Organism};
use crate::rng::stream;

#[derive(Debug, Clone, PartialEq)]
pub struct WorldConfig {
    pub width: usize,
    pub height: usize,
    /// Average cycles per living organism per update.
    pub cycles_per_organism: u32,
    pub rates: MutationRates,
    pub divide: DivideRules,
    pub environment: EnvKind,
    pub env: EnvConfig,
    /// Organisms older than this many cycles die; off by default.
    pub max_age: Option<u64>,
    /// Cycle limit when measuring the ancestor's gestation.
    pub gestation_limit: u64,
}

impl Default for WorldConfig {
    fn default() -> Self {
        WorldConfig {
            width: 60,
            height: 60,
            cycles_per_organism: 30,
            rates: MutationRates::default(),
            divide: DivideRules::default(),
            environment: EnvKind::Logic9,
            env: EnvConfig::default(),
            max_age: None,
            gestation_limit: 1_000_000,
        }
    }
}

/// Population summary after an update.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateStats {
    pub update: u64,
    pub organisms: usize,
    pub mean_merit: f64,
    pub log2_mean_fitness: f64,
    /// Task success normalised by the task count.
    pub task_success: f64,
    /// Organisms whose last lifetime performed each task.
    pub task_counts: Vec<u32>,
    pub resources: Vec<f64>,
    /// Cycles executed during this update.
    pub cycles: u64,
}

/// Splits `budget` cycles in proportion to `merits`, carrying fractional
/// shares between updates. Allocations always sum to `budget`.
pub fn allocate_cycles(merits: &[f64], carry: &mut [f64], budget: u64) -> Vec<u64> {
    let n = merits.len();
    if n == 0 {
        return Vec::new();
    }
    let total: f64 = merits.iter().sum();
    let want: Vec<f64> = merits
        .iter()
        .zip(carry.iter())
        .map(|(&m, &c)| {
            let share = if total > 0.0 { budget as f64 * m / total } else { budget as f64 / n as f64 };
            (share + c).max(0.0)
        })
        .collect();
    let mut alloc: Vec<u64> = want.iter().map(|w| w.floor() as u64).collect();
    let given: u64 = alloc.iter().sum();
    let frac = |i: usize| want[i] - want[i].floor();
    let mut order: Vec<usize> = (0..n).collect();
    if given < budget {
        // Largest remainders first, lowest index on ties.
        order.sort_by(|&a, &b| frac(b).total_cmp(&frac(a)).then(a.cmp(&b)));
        let mut left = budget - given;
        for &i in order.iter().cycle() {
            if left == 0 {
                break;
            }
            alloc[i] += 1;
            left -= 1;
        }
    } else if given > budget {
        order.sort_by(|&a, &b| frac(a).total_cmp(&frac(b)).then(b.cmp(&a)));
        let mut over = given - budget;
        while over > 0 {
            for &i in &order {
                if over > 0 && alloc[i] > 0 {
                    alloc[i] -= 1;
                    over -= 1;
                }
            }
        }
    }
    for i in 0..n {
        carry[i] = (want[i] - alloc[i] as f64).clamp(-1.0, 1.0);
    }
    alloc
}

/// The 8 toroidal neighbours of `cell`, clockwise from north.
pub fn neighbors(cell: usize, width: usize, height: usize) -> [usize; 8] {
    let (x, y) = ((cell % width) as i64, (cell / width) as i64);
    let (w, h) = (width as i64, height as i64);
    let at = |dx: i64, dy: i64| ((y + dy).rem_euclid(h) * w + (x + dx).rem_euclid(w)) as usize;
    [
        at(0, -1),
        at(1, -1),
        at(1, 0),
        at(1, 1),
        at(0, 1),
        at(-1, 1),
        at(-1, 0),
        at(-1, -1),
    ]
}

pub struct World {
    pub config: WorldConfig,
    pub isa: InstructionSet,
    pub env: Environment,
    cells: Vec<Option<Box<Organism>>>,
    /// Cycles still owed to each cell this update.
    pending: Vec<u64>,
    carry: Vec<f64>,
    update: u64,
    total_cycles: u64,
    births: u64,
    seeded: bool,
    mutation_rng: ChaCha8Rng,
    placement_rng: ChaCha8Rng,
    schedule_rng: ChaCha8Rng,
}

impl World {
    pub fn new(config: WorldConfig, isa: InstructionSet, seed: u64) -> Result<World> {
        if config.width < 3 || config.height < 3 {
            return Err(Error::config("world.width", "grid must be at least 3x3"));
        }
        let isa = if config.environment == EnvKind::Navigation {
            isa.with_navigation()
        } else {
            isa
        };
        let size = config.width * config.height;
        Ok(World {
            env: Environment::new(config.environment, config.env.clone(), seed),
            config,
            isa,
            cells: (0..size).map(|_| None).collect(),
            pending: vec![0; size],
            carry: vec![0.0; size],
            update: 0,
            total_cycles: 0,
            births: 0,
            seeded: false,
            mutation_rng: stream(seed, "mutation"),
            placement_rng: stream(seed, "placement"),
            schedule_rng: stream(seed, "schedule"),
        })
    }

    /// Places a single ancestor at the grid centre. Its fitness is measured
    /// by running it alone until it divides.
    pub fn seed(&mut self, ancestor: Vec<Inst>) -> Result<usize> {
        if self.seeded {
            return Err(Error::AlreadySeeded);
        }
        self.isa.validate(&ancestor)?;
        let len = ancestor.len() as f64;
        let fitness = organism::test_gestation(&ancestor, &self.isa, &self.config.divide, self.config.gestation_limit)
            .map_or(0.0, |(g, _)| len / g as f64);
        let cell = (self.config.height / 2) * self.config.width + self.config.width / 2;
        let life = self.env.new_lifetime();
        let tasks = self.env.task_count();
        self.cells[cell] = Some(Box::new(Organism::new(ancestor, life, len, fitness, vec![0.0; tasks])));
        self.seeded = true;
        Ok(cell)
    }

    pub fn update(&self) -> u64 {
        self.update
    }

    pub fn total_cycles(&self) -> u64 {
        self.total_cycles
    }

    pub fn births(&self) -> u64 {
        self.births
    }

    pub fn population_size(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn organism(&self, cell: usize) -> Option<&Organism> {
        self.cells[cell].as_deref()
    }

    pub fn organisms(&self) -> impl Iterator<Item = &Organism> {
        self.cells.iter().filter_map(|c| c.as_deref())
    }

    /// Occupied cells in index order.
    pub fn occupied(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].is_some()).collect()
    }

    /// Puts `child` in a random neighbour of `parent_cell`, replacing any
    /// occupant. A replaced occupant's remaining cycles pass to the child.
    pub fn place_offspring(&mut self, parent_cell: usize, child: Organism) -> usize {
        let options = neighbors(parent_cell, self.config.width, self.config.height);
        let target = options[self.placement_rng.gen_range(0..options.len())];
        if self.cells[target].is_none() {
            self.pending[target] = 0;
            self.carry[target] = 0.0;
        }
        self.cells[target] = Some(Box::new(child));
        self.births += 1;
        target
    }

    /// Runs one update: `cycles_per_organism` cycles per living organism,
    /// shared out by merit, then one step of resource dynamics.
    pub fn run_update(&mut self) -> UpdateStats {
        let alive = self.occupied();
        let budget = self.config.cycles_per_organism as u64 * alive.len() as u64;
        let merits: Vec<f64> = alive.iter().map(|&c| self.cells[c].as_ref().unwrap().merit()).collect();
        let mut carry: Vec<f64> = alive.iter().map(|&c| self.carry[c]).collect();
        let alloc = allocate_cycles(&merits, &mut carry, budget);
        for (k, &c) in alive.iter().enumerate() {
            self.pending[c] = alloc[k];
            self.carry[c] = carry[k];
        }
        let mut order = alive;
        order.shuffle(&mut self.schedule_rng);
        let mut executed = 0u64;
        for cell in order {
            while self.pending[cell] > 0 {
                let Some(mut org) = self.cells[cell].take() else {
                    self.pending[cell] = 0;
                    break;
                };
                let budget = self.pending[cell].min(u32::MAX as u64) as u32;
                let out = org.run(budget, &self.isa, &self.config.divide, &mut self.env);
                self.pending[cell] -= out.cycles as u64;
                executed += out.cycles as u64;
                let expired = self.config.max_age.is_some_and(|max| org.age > max);
                let offspring = out.offspring.map(|mut genome| {
                    apply_divide_mutations(&mut genome, &self.config.rates, &self.isa.roster, &mut self.mutation_rng);
                    org.complete_division(genome, &mut self.env)
                });
                if expired {
                    self.pending[cell] = 0;
                } else {
                    self.cells[cell] = Some(org);
                }
                if let Some(child) = offspring {
                    self.place_offspring(cell, child);
                }
            }
        }
        self.env.end_update();
        self.total_cycles += executed;
        self.update += 1;
        let mut stats = self.stats();
        stats.cycles = executed;
        stats
    }

    /// Current metrics without advancing time.
    pub fn stats(&self) -> UpdateStats {
        let orgs: Vec<&Organism> = self.organisms().collect();
        let tasks = self.env.task_count();
        let record = TaskSuccessRecord {
            tasks,
            qualities: orgs.iter().map(|o| o.last_quality.clone()).collect(),
        };
        let mut task_counts = vec![0u32; tasks];
        for o in &orgs {
            for (k, &q) in o.last_quality.iter().enumerate() {
                if q > 0.0 {
                    task_counts[k] += 1;
                }
            }
        }
        let n = orgs.len();
        let fitness: Vec<f64> = orgs.iter().map(|o| o.fitness).collect();
        UpdateStats {
            update: self.update,
            organisms: n,
            mean_merit: if n == 0 { 0.0 } else { orgs.iter().map(|o| o.merit()).sum::<f64>() / n as f64 },
            log2_mean_fitness: analysis::mean_fitness(&fitness),
            task_success: analysis::task_success(&record).1,
            task_counts,
            resources: self.env.resource_levels(),
            cycles: 0,
        }
    }

    /// Number of distinct genomes alive.
    pub fn genotype_count(&self) -> usize {
        let mut genomes: Vec<&[Inst]> = self.organisms().map(|o| o.genome.as_slice()).collect();
        genomes.sort();
        genomes.dedup();
        genomes.len()
    }

    /// The organism with the highest fitness (lowest cell on ties).
    pub fn best(&self) -> Option<&Organism> {
        self.organisms()
            .fold(None, |best: Option<&Organism>, o| match best {
                Some(b) if b.fitness >= o.fitness => Some(b),
                _ => Some(o),
            })
    }

    /// Digest of the complete world state, for replay checks.
    pub fn digest(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        let mut mix = |v: u64| {
            h = (h ^ v).wrapping_mul(0x100_0000_01b3);
        };
        mix(self.update);
        mix(self.total_cycles);
        for (i, cell) in self.cells.iter().enumerate() {
            let Some(o) = cell else { continue };
            mix(i as u64);
            for inst in &o.cpu.memory {
                mix(*inst as u64);
            }
            for r in o.cpu.regs {
                mix(r as u64);
            }
            for hd in o.cpu.heads {
                mix(hd as u64);
            }
            mix(o.merit().to_bits());
            mix(o.fitness.to_bits());
            mix(o.gestation);
            mix(o.life.id);
        }
        for r in self.env.resource_levels() {
            mix(r.to_bits());
        }
        h
    }
}
