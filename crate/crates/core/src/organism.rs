//! Organisms: memory allocation, copying, division, divide-time mutation,
//! merit and gestation accounting, and the ancestral genomes.

use rand::Rng;

use crate::environment::{Environment, LifeIo, Lifetime};
use crate::error::{Error, Result};
use crate::isa::{Inst, InstructionSet, MAX_GENOME_SIZE};
use crate::vcpu::{CpuState, NullIo, READ, WRITE};

/// Guards applied when an organism attempts to divide.
#[derive(Debug, Clone, PartialEq)]
pub struct DivideRules {
    /// Smallest offspring (and remaining parent) relative to the parent's
    /// birth length.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Fraction of offspring sites that must have been written by `h-copy`.
    pub min_copied_fraction: f64,
    /// Instruction filling freshly allocated memory.
    pub fill: Inst,
    pub max_genome_size: usize,
}

impl Default for DivideRules {
    fn default() -> Self {
        DivideRules {
            min_ratio: 0.5,
            max_ratio: 2.0,
            min_copied_fraction: 0.5,
            fill: Inst::NopA,
            max_genome_size: MAX_GENOME_SIZE,
        }
    }
}

/// Extends memory to twice its length (capped). Returns false on a fault.
pub fn h_alloc(cpu: &mut CpuState, rules: &DivideRules) -> bool {
    let len = cpu.memory.len();
    let new_len = (2 * len).min(rules.max_genome_size);
    if cpu.alloc_base.is_some() || new_len <= len {
        return false;
    }
    cpu.memory.resize(new_len, rules.fill);
    cpu.copied.clear();
    cpu.copied.resize(new_len, false);
    cpu.alloc_base = Some(len);
    true
}

/// Copies the instruction under READ to WRITE and advances both heads.
/// Returns false when no allocation is active.
pub fn h_copy(cpu: &mut CpuState) -> bool {
    if cpu.alloc_base.is_none() {
        return false;
    }
    let len = cpu.memory.len();
    let r = cpu.heads[READ] % len;
    let w = cpu.heads[WRITE] % len;
    let inst = cpu.memory[r];
    cpu.memory[w] = inst;
    cpu.copied[w] = true;
    cpu.copy_history.push(inst);
    cpu.heads[READ] = if r + 1 == len { 0 } else { r + 1 };
    cpu.heads[WRITE] = if w + 1 == len { 0 } else { w + 1 };
    true
}

/// Checks the divide gates and, when they pass, splits memory: the
/// offspring is the circular region `[READ, WRITE)`, the parent keeps
/// `[WRITE, READ)` and its CPU is reset. On failure nothing changes.
pub fn divide_extract(cpu: &mut CpuState, rules: &DivideRules) -> Option<Vec<Inst>> {
    let birth_len = cpu.alloc_base?;
    let len = cpu.memory.len();
    let read = cpu.heads[READ] % len;
    let write = cpu.heads[WRITE] % len;
    let child_len = (write + len - read) % len;
    let parent_len = len - child_len;
    let lo = (rules.min_ratio * birth_len as f64).ceil() as usize;
    let hi = (rules.max_ratio * birth_len as f64).floor() as usize;
    let in_range = |n: usize| n >= lo.max(1) && n <= hi && n <= rules.max_genome_size;
    if child_len == 0 || !in_range(child_len) || !in_range(parent_len) {
        return None;
    }
    let copied = (0..child_len).filter(|i| cpu.copied[(read + i) % len]).count();
    if (copied as f64) < rules.min_copied_fraction * child_len as f64 {
        return None;
    }
    let child: Vec<Inst> = (0..child_len).map(|i| cpu.memory[(read + i) % len]).collect();
    let parent: Vec<Inst> = (0..parent_len).map(|i| cpu.memory[(write + i) % len]).collect();
    cpu.memory = parent;
    cpu.reset();
    Some(child)
}

/// Per-site mutation probabilities applied at division.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationRates {
    pub substitution: f64,
    pub insertion: f64,
    pub deletion: f64,
}

impl Default for MutationRates {
    fn default() -> Self {
        MutationRates {
            substitution: 0.0025,
            insertion: 0.0005,
            deletion: 0.0005,
        }
    }
}

impl MutationRates {
    pub const ZERO: MutationRates = MutationRates {
        substitution: 0.0,
        insertion: 0.0,
        deletion: 0.0,
    };
}

/// Substitutions, then insertions, then deletions, each per site, with
/// replacements drawn uniformly from `roster`. The result is clamped to
/// `1..=MAX_GENOME_SIZE` sites.
pub fn apply_divide_mutations(
    genome: &mut Vec<Inst>,
    rates: &MutationRates,
    roster: &[Inst],
    rng: &mut impl Rng,
) {
    if rates.substitution > 0.0 {
        for site in genome.iter_mut() {
            if rng.gen_bool(rates.substitution) {
                *site = roster[rng.gen_range(0..roster.len())];
            }
        }
    }
    if rates.insertion > 0.0 {
        let mut out = Vec::with_capacity(genome.len() + 4);
        for &inst in genome.iter() {
            out.push(inst);
            if rng.gen_bool(rates.insertion) {
                out.push(roster[rng.gen_range(0..roster.len())]);
            }
        }
        *genome = out;
    }
    if rates.deletion > 0.0 {
        genome.retain(|_| !rng.gen_bool(rates.deletion));
    }
    if genome.is_empty() {
        genome.push(roster[rng.gen_range(0..roster.len())]);
    }
    genome.truncate(MAX_GENOME_SIZE);
}

/// One living organism.
#[derive(Debug, Clone)]
pub struct Organism {
    /// Genome at birth (or after the last division).
    pub genome: Vec<Inst>,
    pub cpu: CpuState,
    pub life: Lifetime,
    /// Merit earned in the previous lifetime, or inherited from the parent.
    pub carried_merit: f64,
    /// Cycles since birth or the last division.
    pub gestation: u64,
    /// Cycles executed since birth.
    pub age: u64,
    /// Earned merit over gestation at the last division (inherited until
    /// the first one).
    pub fitness: f64,
    /// Task qualities of the last completed lifetime (inherited likewise).
    pub last_quality: Vec<f64>,
    pub divisions: u32,
}

/// Cycles spent in [`Organism::run`] and the offspring produced, if any.
#[derive(Debug, Default)]
pub struct RunOutcome {
    pub cycles: u32,
    pub offspring: Option<Vec<Inst>>,
}

impl Organism {
    pub fn new(genome: Vec<Inst>, life: Lifetime, carried_merit: f64, fitness: f64, last_quality: Vec<f64>) -> Organism {
        Organism {
            cpu: CpuState::new(genome.clone()),
            genome,
            life,
            carried_merit,
            gestation: 0,
            age: 0,
            fitness,
            last_quality,
            divisions: 0,
        }
    }

    /// Merit earned so far this lifetime: birth length times the reward
    /// factor of completed tasks.
    pub fn recompute_merit(&self) -> f64 {
        self.genome.len() as f64 * self.life.reward_factor()
    }

    /// Scheduling weight: the carried merit until this lifetime earns more.
    pub fn merit(&self) -> f64 {
        self.carried_merit.max(self.recompute_merit())
    }

    /// Executes up to `budget` cycles, stopping early after a division.
    pub fn run(
        &mut self,
        budget: u32,
        isa: &InstructionSet,
        rules: &DivideRules,
        env: &mut Environment,
    ) -> RunOutcome {
        let mut out = RunOutcome::default();
        let mut io = LifeIo {
            env,
            life: &mut self.life,
        };
        while out.cycles < budget {
            let fx = self.cpu.execute(isa, rules, &mut io);
            out.cycles += fx.cycles;
            self.gestation += fx.cycles as u64;
            self.age += fx.cycles as u64;
            if fx.offspring.is_some() {
                out.offspring = fx.offspring;
                break;
            }
        }
        out
    }

    /// Bookkeeping after a successful division: records fitness, passes the
    /// earned merit to both parent and offspring, and starts new lifetimes.
    /// `child` must already be mutated.
    pub fn complete_division(&mut self, child: Vec<Inst>, env: &mut Environment) -> Organism {
        let earned = self.recompute_merit();
        self.fitness = earned / self.gestation.max(1) as f64;
        self.last_quality = self.life.quality.clone();
        self.carried_merit = earned;
        self.gestation = 0;
        self.divisions += 1;
        self.genome = self.cpu.memory.clone();
        self.life = env.new_lifetime();
        let life = env.new_lifetime();
        Organism::new(child, life, earned, self.fitness, self.last_quality.clone())
    }

    /// Organism dump: a one-line header followed by the genome.
    pub fn dump(&self) -> String {
        let bitmap: String = self
            .last_quality
            .iter()
            .map(|&q| if q > 0.0 { '1' } else { '0' })
            .collect();
        format!(
            "# merit={} gestation={} fitness={} tasks={}\n{}",
            self.merit(),
            self.gestation,
            self.fitness,
            bitmap,
            crate::isa::format_genome(&self.genome)
        )
    }
}

/// Runs `genome` alone with no environment until it divides. Returns the
/// cycles taken and the (unmutated) offspring, or `None` after `limit`
/// cycles.
pub fn test_gestation(
    genome: &[Inst],
    isa: &InstructionSet,
    rules: &DivideRules,
    limit: u64,
) -> Option<(u64, Vec<Inst>)> {
    let mut cpu = CpuState::new(genome.to_vec());
    let mut cycles = 0u64;
    while cycles < limit {
        let fx = cpu.execute(isa, rules, &mut NullIo);
        cycles += fx.cycles as u64;
        if let Some(child) = fx.offspring {
            return Some((cycles, child));
        }
    }
    None
}

/// Length of every shipped ancestor.
pub const ANCESTOR_LENGTH: usize = 100;

/// Builds the self-replicating ancestor for an instruction set.
///
/// Layout: `h-alloc`, a search for the end label, `mov-head nop-C` to put
/// WRITE at the offspring, filler, then the copy loop (`search` with no
/// label marks FLOW, `h-copy`, `if-copied` on the end label, `h-divide`,
/// `mov-head` back to the loop) and the end label `nop-A nop-B`.
pub fn ancestor(isa: &InstructionSet) -> Result<Vec<Inst>> {
    use Inst::*;
    let missing = || Error::MissingAncestor(isa.name.clone());
    for required in [HAlloc, HCopy, HDivide, MovHead, NopA, NopB, NopC] {
        if !isa.contains(required) {
            return Err(missing());
        }
    }
    let search = [SearchLblCompS, SearchLblDirectS, SearchSeqCompS, SearchSeqDirectS]
        .into_iter()
        .find(|&i| isa.contains(i))
        .ok_or_else(missing)?;
    let copied = [IfCopiedLblComp, IfCopiedLblDirect, IfCopiedSeqComp, IfCopiedSeqDirect]
        .into_iter()
        .find(|&i| isa.contains(i))
        .ok_or_else(missing)?;
    let needs_label = matches!(search, SearchLblCompS | SearchLblDirectS)
        || matches!(copied, IfCopiedLblComp | IfCopiedLblDirect);
    if needs_label && !isa.contains(Label) {
        return Err(missing());
    }
    let end = [0u8, 1];
    // Label that finds `end` under the instruction's matching rule.
    let key = |comp: bool| -> [Inst; 2] {
        let n = isa.nop_count as u8;
        if comp {
            [Inst::nop((end[0] + n - 1) % n), Inst::nop((end[1] + n - 1) % n)]
        } else {
            [Inst::nop(end[0]), Inst::nop(end[1])]
        }
    };
    let search_key = key(matches!(search, SearchLblCompS | SearchSeqCompS));
    let copied_key = key(matches!(copied, IfCopiedLblComp | IfCopiedSeqComp));

    let mut head = vec![HAlloc, search];
    head.extend(search_key);
    head.extend([MovHead, NopC]);
    let mut tail = vec![search, HCopy, copied];
    tail.extend(copied_key);
    tail.extend([HDivide, MovHead]);
    if needs_label {
        tail.push(Label);
    }
    tail.extend([NopA, NopB]);
    let filler = ANCESTOR_LENGTH - head.len() - tail.len();
    let mut genome = head;
    genome.extend(std::iter::repeat(NopC).take(filler));
    genome.extend(tail);
    Ok(genome)
}
