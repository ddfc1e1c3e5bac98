//! Task environments: what organisms are rewarded for and how much.
//!
//! An [`Environment`] is owned by one world. Each organism lifetime gets a
//! [`Lifetime`] record holding its inputs, the tasks it completed and the
//! reward factor that feeds into merit.

pub mod logic;
pub mod nav;
pub mod resource;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rng::{stream, sub_seed};
use crate::vcpu::{CpuIo, NavAction};

pub use logic::{enumerate_logic_tasks, LogicTask};
pub use nav::{nav_quality, NavGrid, Walker};
pub use resource::ResourcePool;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvKind {
    Logic9,
    Logic77,
    Match12,
    Fibonacci32,
    Sort10,
    Limited9,
    Navigation,
}

impl EnvKind {
    pub const ALL: [EnvKind; 7] = [
        EnvKind::Logic9,
        EnvKind::Logic77,
        EnvKind::Match12,
        EnvKind::Fibonacci32,
        EnvKind::Sort10,
        EnvKind::Limited9,
        EnvKind::Navigation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnvKind::Logic9 => "Logic-9",
            EnvKind::Logic77 => "Logic-77",
            EnvKind::Match12 => "Match-12",
            EnvKind::Fibonacci32 => "Fibonacci-32",
            EnvKind::Sort10 => "Sort-10",
            EnvKind::Limited9 => "Limited-9",
            EnvKind::Navigation => "Navigation",
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnvKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownEnvironment(s.to_string()))
    }
}

/// Default Match-12 targets, spaced roughly exponentially.
pub const MATCH12_TARGETS: [u32; 12] = [
    7, 23, 97, 389, 1531, 6229, 24851, 99991, 401407, 1605631, 6422111, 25690133,
];

/// Tunable environment parameters; every field can be overridden from the
/// run config.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvConfig {
    /// Inputs handed to each organism (Sort-10 always uses `sort_length`).
    pub inputs_per_organism: usize,
    pub match_targets: Vec<u32>,
    /// Fewest correct bits that still earn a Match-12 reward.
    pub match_min_bits: u32,
    pub fib_length: usize,
    /// Log2 penalty per output after the last rewarded Fibonacci number.
    pub fib_penalty: f64,
    pub sort_length: usize,
    /// A perfect sort (or maze walk) multiplies merit by `2^exponent`.
    pub sort_exponent: f64,
    pub nav_exponent: f64,
    pub nav_width: i32,
    pub nav_height: i32,
    pub nav_path_len: usize,
    pub nav_repeat_prob: f64,
    pub resource_inflow: f64,
    pub resource_outflow: f64,
    pub resource_max_consume: f64,
    /// Units that count as one full reward in Limited-9.
    pub limited_reference_units: f64,
    /// Scale of the Limited-9 log-bonus relative to Logic-9.
    pub limited_scale: f64,
    pub limited_once_per_lifetime: bool,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            inputs_per_organism: 3,
            match_targets: MATCH12_TARGETS.to_vec(),
            match_min_bits: 22,
            fib_length: 32,
            fib_penalty: 0.5,
            sort_length: 10,
            sort_exponent: 5.0,
            nav_exponent: 5.0,
            nav_width: 51,
            nav_height: 51,
            nav_path_len: 100,
            nav_repeat_prob: 0.5,
            resource_inflow: 100.0,
            resource_outflow: 0.01,
            resource_max_consume: 0.0025,
            limited_reference_units: 25.0,
            limited_scale: 0.1,
            limited_once_per_lifetime: false,
        }
    }
}

/// Quality of the best Match-12 target for `output`: the nearest target
/// by Hamming distance (lowest index on ties) and `2^-(wrong bits)` when at
/// least `min_bits` bits are right.
pub fn match12_quality(output: u32, targets: &[u32], min_bits: u32) -> (usize, f64) {
    let (idx, dist) = targets
        .iter()
        .enumerate()
        .map(|(i, t)| (i, (output ^ t).count_ones()))
        .min_by_key(|&(i, d)| (d, i))
        .expect("at least one target");
    let correct = 32 - dist;
    let q = if correct >= min_bits {
        0.5f64.powi(dist as i32)
    } else {
        0.0
    };
    (idx, q)
}

/// Bonus factor after `hits` rewarded Fibonacci numbers and `extra`
/// penalised outputs.
pub fn fib_reward(hits: u32, extra: u32, penalty: f64) -> f64 {
    2f64.powf(hits as f64 - penalty * extra as f64)
}

/// The first `n` Fibonacci numbers starting 1, 1, 2, ...
pub fn fibonacci(n: usize) -> Vec<u32> {
    let mut seq = Vec::with_capacity(n);
    let (mut a, mut b) = (1u32, 1u32);
    for _ in 0..n {
        seq.push(a);
        let c = a.wrapping_add(b);
        a = b;
        b = c;
    }
    seq
}

/// `2^-m` where `m` is the number of adjacent transpositions between the
/// outputs and the descending sort of the inputs; zero unless the outputs
/// are a permutation of the inputs.
pub fn sort10_quality(inputs: &[u32], outputs: &[u32]) -> f64 {
    if outputs.len() != inputs.len() || inputs.is_empty() {
        return 0.0;
    }
    let mut a = inputs.to_vec();
    let mut b = outputs.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return 0.0;
    }
    // Inversions relative to descending order.
    let mut m = 0i32;
    for i in 0..outputs.len() {
        for j in i + 1..outputs.len() {
            if outputs[i] < outputs[j] {
                m += 1;
            }
        }
    }
    0.5f64.powi(m)
}

/// Navigation state created on first use within a lifetime.
#[derive(Debug, Clone)]
pub struct NavLife {
    pub walker: Walker,
}

/// Everything an organism accumulates between two divisions.
#[derive(Debug, Clone)]
pub struct Lifetime {
    /// World-unique lifetime index; seeds the navigation maze.
    pub id: u64,
    pub inputs: Vec<u32>,
    cursor: usize,
    /// Bitmask of input slots read so far.
    pub seen: u32,
    /// Multiplicative reward factor.
    pub bonus: f64,
    /// Additive reward (Match-12).
    pub additive: f64,
    /// Quality per task this lifetime.
    pub quality: Vec<f64>,
    done: u128,
    fib_hits: u32,
    fib_extra: u32,
    recent_outputs: Vec<u32>,
    pub nav: Option<Box<NavLife>>,
    /// Task performances this lifetime (every reward event).
    pub performed: Vec<u32>,
}

impl Lifetime {
    /// Factor applied to genome length to obtain merit.
    pub fn reward_factor(&self) -> f64 {
        self.bonus * (1.0 + self.additive)
    }

    pub fn task_done(&self, task: usize) -> bool {
        self.done & (1u128 << task) != 0
    }
}

/// A reward event produced by an output or a move.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskEvent {
    pub task: usize,
    pub quality: f64,
}

/// Task tables, resource pools and per-world randomness for one world.
#[derive(Debug, Clone)]
pub struct Environment {
    pub kind: EnvKind,
    pub config: EnvConfig,
    logic: Vec<LogicTask>,
    /// Multiplier per logic task.
    multipliers: Vec<f64>,
    pub pools: Vec<ResourcePool>,
    fib: Vec<u32>,
    input_rng: ChaCha8Rng,
    maze_seed: u64,
    next_lifetime: u64,
    task_names: Vec<String>,
}

impl Environment {
    pub fn new(kind: EnvKind, config: EnvConfig, world_seed: u64) -> Environment {
        let logic = match kind {
            EnvKind::Logic9 | EnvKind::Limited9 => enumerate_logic_tasks(2),
            EnvKind::Logic77 => enumerate_logic_tasks(3),
            _ => Vec::new(),
        };
        let multipliers = logic
            .iter()
            .map(|t| match kind {
                EnvKind::Logic77 => 2.0,
                _ => (1u32 << logic::logic9_level(&t.name).unwrap_or(1)) as f64,
            })
            .collect();
        let pools = if kind == EnvKind::Limited9 {
            (0..logic.len())
                .map(|_| {
                    let mut p = ResourcePool {
                        concentration: 0.0,
                        inflow: config.resource_inflow,
                        outflow_fraction: config.resource_outflow,
                        max_consume_fraction: config.resource_max_consume,
                    };
                    p.concentration = p.equilibrium();
                    p
                })
                .collect()
        } else {
            Vec::new()
        };
        let task_names = match kind {
            EnvKind::Logic9 | EnvKind::Logic77 | EnvKind::Limited9 => {
                logic.iter().map(|t| t.name.clone()).collect()
            }
            EnvKind::Match12 => (0..config.match_targets.len())
                .map(|i| format!("MATCH{i}"))
                .collect(),
            EnvKind::Fibonacci32 => vec!["FIB".to_string()],
            EnvKind::Sort10 => vec!["SORT".to_string()],
            EnvKind::Navigation => vec!["NAV".to_string()],
        };
        Environment {
            kind,
            fib: fibonacci(config.fib_length),
            config,
            logic,
            multipliers,
            pools,
            input_rng: stream(world_seed, "inputs"),
            maze_seed: sub_seed(world_seed, "maze"),
            next_lifetime: 0,
            task_names,
        }
    }

    pub fn task_count(&self) -> usize {
        self.task_names.len()
    }

    pub fn task_names(&self) -> &[String] {
        &self.task_names
    }

    pub fn logic_tasks(&self) -> &[LogicTask] {
        &self.logic
    }

    /// Multiplier of a logic task when fully rewarded.
    pub fn multiplier(&self, task: usize) -> f64 {
        self.multipliers[task]
    }

    fn draw_inputs(&mut self) -> Vec<u32> {
        let rng = &mut self.input_rng;
        match self.kind {
            EnvKind::Sort10 => {
                let mut v: Vec<u32> = Vec::with_capacity(self.config.sort_length);
                while v.len() < self.config.sort_length {
                    let x: u32 = rng.gen();
                    if !v.contains(&x) {
                        v.push(x);
                    }
                }
                v
            }
            _ => loop {
                let v = [rng.gen::<u32>(), rng.gen::<u32>(), rng.gen::<u32>()];
                let distinct = v[0] != v[1] && v[1] != v[2] && v[0] != v[2];
                // Every truth-table row must show up so that outputs identify
                // their function unambiguously.
                if distinct && logic::covers_all_rows(&v) {
                    let mut out = v.to_vec();
                    out.truncate(self.config.inputs_per_organism.max(1));
                    break out;
                }
            },
        }
    }

    /// Starts a fresh lifetime with newly drawn inputs.
    pub fn new_lifetime(&mut self) -> Lifetime {
        let id = self.next_lifetime;
        self.next_lifetime += 1;
        Lifetime {
            id,
            inputs: self.draw_inputs(),
            cursor: 0,
            seen: 0,
            bonus: 1.0,
            additive: 0.0,
            quality: vec![0.0; self.task_count()],
            done: 0,
            fib_hits: 0,
            fib_extra: 0,
            recent_outputs: Vec::new(),
            nav: None,
            performed: vec![0; self.task_count()],
        }
    }

    /// Next input value for an organism, cycling through its list.
    pub fn next_input(&self, life: &mut Lifetime) -> u32 {
        if life.inputs.is_empty() {
            return 0;
        }
        let slot = life.cursor % life.inputs.len();
        life.cursor += 1;
        life.seen |= 1 << slot.min(31);
        life.inputs[slot]
    }

    /// Evaluates an output, applies rewards to `life` and reports the tasks
    /// it triggered.
    pub fn check_output(&mut self, life: &mut Lifetime, output: u32) -> Vec<TaskEvent> {
        let mut events = Vec::new();
        match self.kind {
            EnvKind::Logic9 | EnvKind::Logic77 | EnvKind::Limited9 => {
                let mut slots = [0u32; 3];
                for (s, v) in slots.iter_mut().zip(&life.inputs) {
                    *s = *v;
                }
                let seen = (life.seen & 0b111) as u8;
                for task in logic::matching_tasks(&self.logic, &slots, seen, output) {
                    let repeatable =
                        self.kind == EnvKind::Limited9 && !self.config.limited_once_per_lifetime;
                    if life.task_done(task) && !repeatable {
                        continue;
                    }
                    life.done |= 1u128 << task;
                    life.quality[task] = 1.0;
                    life.performed[task] += 1;
                    if self.kind == EnvKind::Limited9 {
                        let granted = self.pools[task].consume(f64::INFINITY);
                        let log_bonus = granted / self.config.limited_reference_units
                            * self.multipliers[task].log2()
                            * self.config.limited_scale;
                        life.bonus *= 2f64.powf(log_bonus);
                    } else {
                        life.bonus *= self.multipliers[task];
                    }
                    events.push(TaskEvent {
                        task,
                        quality: 1.0,
                    });
                }
            }
            EnvKind::Match12 => {
                let (target, q) =
                    match12_quality(output, &self.config.match_targets, self.config.match_min_bits);
                if q > 0.0 && !life.task_done(target) {
                    life.done |= 1u128 << target;
                    life.quality[target] = q;
                    life.performed[target] += 1;
                    life.additive += q;
                    events.push(TaskEvent { task: target, quality: q });
                }
            }
            EnvKind::Fibonacci32 => {
                let n = self.fib.len() as u32;
                if life.fib_hits < n {
                    if output == self.fib[life.fib_hits as usize] {
                        life.fib_hits += 1;
                        life.bonus *= 2.0;
                    } else {
                        return events;
                    }
                } else {
                    life.fib_extra += 1;
                    life.bonus *= 2f64.powf(-self.config.fib_penalty);
                }
                let q = ((life.fib_hits as f64 - self.config.fib_penalty * life.fib_extra as f64)
                    / n as f64)
                    .clamp(0.0, 1.0);
                life.quality[0] = q;
                life.performed[0] += 1;
                events.push(TaskEvent { task: 0, quality: q });
            }
            EnvKind::Sort10 => {
                let k = self.config.sort_length;
                life.recent_outputs.push(output);
                if life.recent_outputs.len() > k {
                    life.recent_outputs.remove(0);
                }
                if life.recent_outputs.len() == k {
                    let q = sort10_quality(&life.inputs, &life.recent_outputs);
                    let old = life.quality[0];
                    if q > old {
                        life.bonus *= 2f64.powf(self.config.sort_exponent * (q - old));
                        life.quality[0] = q;
                        life.performed[0] += 1;
                        events.push(TaskEvent { task: 0, quality: q });
                    }
                }
            }
            EnvKind::Navigation => {}
        }
        events
    }

    fn nav_for<'a>(&self, life: &'a mut Lifetime) -> &'a mut Walker {
        let cfg = &self.config;
        let seed = self.maze_seed ^ life.id.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        &mut life
            .nav
            .get_or_insert_with(|| {
                let mut rng = crate::rng::seeded(seed);
                let grid = NavGrid::generate(
                    &mut rng,
                    cfg.nav_width,
                    cfg.nav_height,
                    cfg.nav_path_len,
                    cfg.nav_repeat_prob,
                );
                Box::new(NavLife {
                    walker: Walker::new(grid),
                })
            })
            .walker
    }

    /// Applies a navigation action. Outside the navigation environment the
    /// sensors read zero and movement does nothing.
    pub fn navigate(&self, life: &mut Lifetime, action: NavAction) -> u32 {
        if self.kind != EnvKind::Navigation {
            return 0;
        }
        let exponent = self.config.nav_exponent;
        let walker = self.nav_for(life);
        match action {
            NavAction::Sense => return walker.sense(),
            NavAction::RotateLeft => walker.pose.rotate_left(),
            NavAction::RotateRight => walker.pose.rotate_right(),
            NavAction::Move => {
                if walker.step_forward() {
                    let len = walker.grid.path_len();
                    let q = nav_quality(walker.progress, len);
                    life.bonus *= 2f64.powf(exponent / len as f64);
                    life.quality[0] = q;
                    life.performed[0] += 1;
                }
            }
        }
        0
    }

    /// End-of-update resource dynamics.
    pub fn end_update(&mut self) {
        for p in &mut self.pools {
            p.step();
        }
    }

    pub fn resource_levels(&self) -> Vec<f64> {
        self.pools.iter().map(|p| p.concentration).collect()
    }
}

/// Bridges a CPU to its environment for one lifetime.
pub struct LifeIo<'a> {
    pub env: &'a mut Environment,
    pub life: &'a mut Lifetime,
}

impl CpuIo for LifeIo<'_> {
    fn input(&mut self) -> u32 {
        self.env.next_input(self.life)
    }

    fn output(&mut self, value: u32) {
        self.env.check_output(self.life, value);
    }

    fn navigate(&mut self, action: NavAction) -> u32 {
        self.env.navigate(self.life, action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(kind: EnvKind) -> Environment {
        Environment::new(kind, EnvConfig::default(), 11)
    }

    #[test]
    fn match12_examples() {
        let t = &MATCH12_TARGETS;
        assert_eq!(match12_quality(389, t, 22), (3, 1.0));
        // 30 correct bits: two flipped.
        let (_, q) = match12_quality(25690133 ^ 0b11 << 28, t, 22);
        assert_eq!(q, 0.25);
        // Exactly 21 correct bits fails the threshold.
        let targets = [0u32];
        assert_eq!(match12_quality(0x7FF, &targets, 22).1, 0.0);
        assert_eq!(match12_quality(0x3FF, &targets, 22).1, 0.5f64.powi(10));
    }

    #[test]
    fn fibonacci_bonus() {
        assert_eq!(fib_reward(32, 0, 0.5), 2f64.powi(32));
        assert_eq!(fib_reward(32, 64, 0.5), 1.0);
        assert_eq!(fib_reward(0, 0, 0.5), 1.0);
        let seq = fibonacci(32);
        assert_eq!(&seq[..6], &[1, 1, 2, 3, 5, 8]);
        assert_eq!(seq[31], 2_178_309);
    }

    #[test]
    fn sort_quality_examples() {
        let inputs = [5, 9, 1, 7, 3, 2, 8, 6, 4, 10];
        let sorted = [10, 9, 8, 7, 6, 5, 4, 3, 2, 1];
        assert_eq!(sort10_quality(&inputs, &sorted), 1.0);
        let mut one = sorted;
        one.swap(3, 4);
        assert_eq!(sort10_quality(&inputs, &one), 0.5);
        let mut bad = sorted;
        bad[0] = 11;
        assert_eq!(sort10_quality(&inputs, &bad), 0.0);
        assert_eq!(sort10_quality(&inputs, &sorted[..9]), 0.0);
    }

    #[test]
    fn logic9_rewards_once_per_lifetime() {
        let mut e = env(EnvKind::Logic9);
        let mut life = e.new_lifetime();
        let a = e.next_input(&mut life);
        let events = e.check_output(&mut life, !a);
        assert_eq!(events.len(), 1);
        assert_eq!(e.task_names()[events[0].task], "NOT");
        assert_eq!(life.reward_factor(), 2.0);
        assert!(e.check_output(&mut life, !a).is_empty());
        assert_eq!(life.reward_factor(), 2.0);
    }

    #[test]
    fn logic9_equ_is_worth_32() {
        let mut e = env(EnvKind::Logic9);
        let mut life = e.new_lifetime();
        let a = e.next_input(&mut life);
        let b = e.next_input(&mut life);
        e.check_output(&mut life, !(a ^ b));
        assert_eq!(life.reward_factor(), 32.0);
    }

    #[test]
    fn limited9_repeats_and_consumes() {
        let mut e = env(EnvKind::Limited9);
        let mut life = e.new_lifetime();
        let a = e.next_input(&mut life);
        e.check_output(&mut life, !a);
        let not = 0;
        assert_eq!(e.pools[not].concentration, 10000.0 - 25.0);
        // Full equilibrium consumption earns a tenth of the Logic-9 log-bonus.
        assert!((life.bonus - 2f64.powf(0.1)).abs() < 1e-12);
        e.check_output(&mut life, !a);
        assert!(life.bonus > 2f64.powf(0.1));
        assert_eq!(life.performed[not], 2);
    }

    #[test]
    fn fibonacci_environment_rewards_in_order() {
        let mut e = env(EnvKind::Fibonacci32);
        let mut life = e.new_lifetime();
        for v in [1, 1, 2, 4, 3] {
            e.check_output(&mut life, v);
        }
        assert_eq!(life.bonus, 16.0);
        assert!((life.quality[0] - 4.0 / 32.0).abs() < 1e-12);
    }

    #[test]
    fn inputs_are_distinct_and_cover_rows() {
        let mut e = env(EnvKind::Logic77);
        for _ in 0..50 {
            let life = e.new_lifetime();
            let v = [life.inputs[0], life.inputs[1], life.inputs[2]];
            assert!(logic::covers_all_rows(&v));
        }
        let mut s = env(EnvKind::Sort10);
        assert_eq!(s.new_lifetime().inputs.len(), 10);
    }

    #[test]
    fn navigation_maze_depends_on_lifetime() {
        let e = env(EnvKind::Navigation);
        let mut e2 = e.clone();
        let mut l1 = e2.new_lifetime();
        let mut l2 = e2.new_lifetime();
        e.navigate(&mut l1, NavAction::Sense);
        e.navigate(&mut l2, NavAction::Sense);
        let p1 = l1.nav.as_ref().unwrap().walker.grid.path.clone();
        let p2 = l2.nav.as_ref().unwrap().walker.grid.path.clone();
        assert_ne!(p1, p2);
        // Same lifetime index, same maze.
        let mut again = Environment::new(EnvKind::Navigation, EnvConfig::default(), 11).new_lifetime();
        e.navigate(&mut again, NavAction::Sense);
        assert_eq!(again.nav.as_ref().unwrap().walker.grid.path, p1);
    }

    #[test]
    fn env_names_parse() {
        for k in EnvKind::ALL {
            assert_eq!(k.as_str().parse::<EnvKind>().unwrap(), k);
        }
        assert!("Logic-10".parse::<EnvKind>().is_err());
    }
}
