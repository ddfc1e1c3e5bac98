//! Experiment orchestration: config files, replicate fan-out, CSV logs and
//! set-versus-set comparison.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis::{self, BOOTSTRAP_ITERATIONS};
use crate::environment::{EnvConfig, EnvKind, Environment, LifeIo};
use crate::error::{Error, Result};
use crate::isa::{self, Inst, InstructionSet, SetName};
use crate::organism::{self, DivideRules};
use crate::population::{UpdateStats, World, WorldConfig};
use crate::rng::stream;
use crate::vcpu::CpuState;

pub const SUMMARY_HEADER: &str = "# isa-evo summary v1";
pub const LOG_HEADER: &str = "# isa-evo update-log v1";
pub const COMPARISON_HEADER: &str = "# isa-evo comparison v1";
pub const TRACE_HEADER: &str = "# isa-evo trace v1";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub set: String,
    /// Genome file overriding the built-in ancestor.
    pub ancestor: Option<PathBuf>,
    /// Instruction-set definition file overriding the built-in roster.
    pub set_file: Option<PathBuf>,
    pub updates: u64,
    pub replicates: u32,
    pub seed: u64,
    pub log_interval: u64,
    pub workers: usize,
    pub out: PathBuf,
    pub world: WorldConfig,
    pub jmp_head_default_flow: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            set: "Heads".into(),
            ancestor: None,
            set_file: None,
            updates: 100_000,
            replicates: 200,
            seed: 1,
            log_interval: 100,
            workers: 1,
            out: PathBuf::from("results"),
            world: WorldConfig::default(),
            jmp_head_default_flow: false,
        }
    }
}

fn parse<T: std::str::FromStr>(path: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(path, format!("cannot parse `{value}`")))
}

fn parse_rate(path: &str, value: &str) -> Result<f64> {
    let r: f64 = parse(path, value)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::config(path, format!("{r} is not in [0, 1]")));
    }
    Ok(r)
}

fn parse_positive<T: std::str::FromStr + PartialOrd + Default>(path: &str, value: &str) -> Result<T> {
    let v: T = parse(path, value)?;
    if v <= T::default() {
        return Err(Error::config(path, "must be positive"));
    }
    Ok(v)
}

fn parse_bool(path: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::config(path, format!("`{value}` is not a boolean"))),
    }
}

impl RunConfig {
    /// Parses the sectioned `key = value` format. Relative paths are taken
    /// relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| Error::config(format!("line {}", n + 1), "unterminated section"))?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}", n + 1), "expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            cfg.set_field(&section, key, value, base)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)?;
        RunConfig::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn set_field(&mut self, section: &str, key: &str, value: &str, base: &Path) -> Result<()> {
        let path = format!("{section}.{key}");
        let p = path.as_str();
        let w = &mut self.world;
        let e = &mut w.env;
        match (section, key) {
            ("run", "set") => {
                value.parse::<SetName>().map_err(|err| Error::config(p, err.to_string()))?;
                self.set = value.to_string();
            }
            ("run", "set_file") => self.set_file = Some(base.join(value)),
            ("run", "environment") => {
                w.environment = value.parse().map_err(|err: Error| Error::config(p, err.to_string()))?
            }
            ("run", "ancestor") => self.ancestor = Some(base.join(value)),
            ("run", "updates") => self.updates = parse(p, value)?,
            ("run", "replicates") => self.replicates = parse_positive(p, value)?,
            ("run", "seed") => self.seed = parse(p, value)?,
            ("run", "log_interval") => self.log_interval = parse_positive(p, value)?,
            ("run", "workers") => self.workers = parse_positive(p, value)?,
            ("run", "out") => self.out = base.join(value),
            ("world", "width") => w.width = parse_positive(p, value)?,
            ("world", "height") => w.height = parse_positive(p, value)?,
            ("world", "cycles_per_organism") => w.cycles_per_organism = parse_positive(p, value)?,
            ("world", "max_age") => {
                let age: u64 = parse(p, value)?;
                w.max_age = (age > 0).then_some(age);
            }
            ("world", "gestation_limit") => w.gestation_limit = parse_positive(p, value)?,
            ("mutation", "substitution") => w.rates.substitution = parse_rate(p, value)?,
            ("mutation", "insertion") => w.rates.insertion = parse_rate(p, value)?,
            ("mutation", "deletion") => w.rates.deletion = parse_rate(p, value)?,
            ("divide", "min_ratio") => w.divide.min_ratio = parse_positive(p, value)?,
            ("divide", "max_ratio") => w.divide.max_ratio = parse_positive(p, value)?,
            ("divide", "min_copied_fraction") => w.divide.min_copied_fraction = parse_rate(p, value)?,
            ("divide", "fill") => {
                w.divide.fill = value.parse::<Inst>().map_err(|err| Error::config(p, err.to_string()))?
            }
            ("cpu", "jmp_head_default_flow") => self.jmp_head_default_flow = parse_bool(p, value)?,
            ("environment", "inputs_per_organism") => {
                e.inputs_per_organism = parse_positive(p, value)?;
                if e.inputs_per_organism > 3 {
                    return Err(Error::config(p, "at most 3 inputs are supported"));
                }
            }
            ("environment", "match_targets") => {
                e.match_targets = value
                    .split(',')
                    .map(|v| parse(p, v.trim()))
                    .collect::<Result<Vec<u32>>>()?;
                if e.match_targets.is_empty() || e.match_targets.len() > 128 {
                    return Err(Error::config(p, "need between 1 and 128 targets"));
                }
            }
            ("environment", "match_min_bits") => e.match_min_bits = parse(p, value)?,
            ("environment", "fib_length") => e.fib_length = parse_positive(p, value)?,
            ("environment", "fib_penalty") => e.fib_penalty = parse(p, value)?,
            ("environment", "sort_length") => e.sort_length = parse_positive(p, value)?,
            ("environment", "sort_exponent") => e.sort_exponent = parse(p, value)?,
            ("environment", "nav_exponent") => e.nav_exponent = parse(p, value)?,
            ("environment", "nav_width") => e.nav_width = parse_positive(p, value)?,
            ("environment", "nav_height") => e.nav_height = parse_positive(p, value)?,
            ("environment", "nav_path_len") => e.nav_path_len = parse_positive(p, value)?,
            ("environment", "nav_repeat_prob") => e.nav_repeat_prob = parse_rate(p, value)?,
            ("environment", "resource_inflow") => e.resource_inflow = parse(p, value)?,
            ("environment", "resource_outflow") => e.resource_outflow = parse_rate(p, value)?,
            ("environment", "resource_max_consume") => e.resource_max_consume = parse_rate(p, value)?,
            ("environment", "limited_reference_units") => e.limited_reference_units = parse_positive(p, value)?,
            ("environment", "limited_scale") => e.limited_scale = parse(p, value)?,
            ("environment", "limited_once_per_lifetime") => e.limited_once_per_lifetime = parse_bool(p, value)?,
            _ => return Err(Error::config(p, "unknown field")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let w = &self.world;
        if w.width < 3 || w.height < 3 {
            return Err(Error::config("world.width", "grid must be at least 3x3"));
        }
        if w.divide.min_ratio > w.divide.max_ratio {
            return Err(Error::config("divide.min_ratio", "exceeds divide.max_ratio"));
        }
        if w.env.nav_width < 3 || w.env.nav_height < 3 {
            return Err(Error::config("environment.nav_width", "maze must be at least 3x3"));
        }
        if (w.env.nav_width * w.env.nav_height) as usize <= w.env.nav_path_len {
            return Err(Error::config("environment.nav_path_len", "path does not fit the maze"));
        }
        Ok(())
    }

    /// The config in file form.
    pub fn to_ini(&self) -> String {
        self.ini(true)
    }

    /// The config as recorded in an output tree: execution settings
    /// (`workers`, `out`) are left out so trees compare byte for byte.
    pub fn to_recorded_ini(&self) -> String {
        self.ini(false)
    }

    fn ini(&self, execution: bool) -> String {
        let w = &self.world;
        let e = &w.env;
        let mut s = String::new();
        let _ = writeln!(s, "[run]");
        let _ = writeln!(s, "set = {}", self.set);
        let _ = writeln!(s, "environment = {}", w.environment);
        if let Some(a) = &self.ancestor {
            let _ = writeln!(s, "ancestor = {}", a.display());
        }
        if let Some(f) = &self.set_file {
            let _ = writeln!(s, "set_file = {}", f.display());
        }
        let _ = writeln!(s, "updates = {}", self.updates);
        let _ = writeln!(s, "replicates = {}", self.replicates);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "log_interval = {}", self.log_interval);
        if execution {
            let _ = writeln!(s, "workers = {}", self.workers);
            let _ = writeln!(s, "out = {}", self.out.display());
        }
        let _ = writeln!(s, "\n[world]");
        let _ = writeln!(s, "width = {}", w.width);
        let _ = writeln!(s, "height = {}", w.height);
        let _ = writeln!(s, "cycles_per_organism = {}", w.cycles_per_organism);
        let _ = writeln!(s, "max_age = {}", w.max_age.unwrap_or(0));
        let _ = writeln!(s, "gestation_limit = {}", w.gestation_limit);
        let _ = writeln!(s, "\n[mutation]");
        let _ = writeln!(s, "substitution = {}", w.rates.substitution);
        let _ = writeln!(s, "insertion = {}", w.rates.insertion);
        let _ = writeln!(s, "deletion = {}", w.rates.deletion);
        let _ = writeln!(s, "\n[divide]");
        let _ = writeln!(s, "min_ratio = {}", w.divide.min_ratio);
        let _ = writeln!(s, "max_ratio = {}", w.divide.max_ratio);
        let _ = writeln!(s, "min_copied_fraction = {}", w.divide.min_copied_fraction);
        let _ = writeln!(s, "fill = {}", w.divide.fill);
        let _ = writeln!(s, "\n[cpu]");
        let _ = writeln!(s, "jmp_head_default_flow = {}", self.jmp_head_default_flow);
        let _ = writeln!(s, "\n[environment]");
        let _ = writeln!(s, "inputs_per_organism = {}", e.inputs_per_organism);
        let targets: Vec<String> = e.match_targets.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "match_targets = {}", targets.join(", "));
        let _ = writeln!(s, "match_min_bits = {}", e.match_min_bits);
        let _ = writeln!(s, "fib_length = {}", e.fib_length);
        let _ = writeln!(s, "fib_penalty = {}", e.fib_penalty);
        let _ = writeln!(s, "sort_length = {}", e.sort_length);
        let _ = writeln!(s, "sort_exponent = {}", e.sort_exponent);
        let _ = writeln!(s, "nav_exponent = {}", e.nav_exponent);
        let _ = writeln!(s, "nav_width = {}", e.nav_width);
        let _ = writeln!(s, "nav_height = {}", e.nav_height);
        let _ = writeln!(s, "nav_path_len = {}", e.nav_path_len);
        let _ = writeln!(s, "nav_repeat_prob = {}", e.nav_repeat_prob);
        let _ = writeln!(s, "resource_inflow = {}", e.resource_inflow);
        let _ = writeln!(s, "resource_outflow = {}", e.resource_outflow);
        let _ = writeln!(s, "resource_max_consume = {}", e.resource_max_consume);
        let _ = writeln!(s, "limited_reference_units = {}", e.limited_reference_units);
        let _ = writeln!(s, "limited_scale = {}", e.limited_scale);
        let _ = writeln!(s, "limited_once_per_lifetime = {}", e.limited_once_per_lifetime);
        s
    }

    /// Preset for one instruction set in one environment, at full scale.
    pub fn preset(set: SetName, env: EnvKind) -> RunConfig {
        let mut cfg = RunConfig {
            set: set.as_str(),
            out: PathBuf::from(format!("results/{}/{}", set.as_str(), env.as_str())),
            ..RunConfig::default()
        };
        cfg.world.environment = env;
        cfg
    }

    /// The instruction set this config runs.
    pub fn instruction_set(&self) -> Result<InstructionSet> {
        let mut isa = match &self.set_file {
            Some(path) => InstructionSet::from_file(path)?,
            None => InstructionSet::by_name(&self.set)?,
        };
        isa.jmp_head_default_flow = self.jmp_head_default_flow;
        Ok(isa)
    }

    pub fn ancestor_genome(&self, isa: &InstructionSet) -> Result<Vec<Inst>> {
        match &self.ancestor {
            Some(path) => isa::read_genome(path),
            None => organism::ancestor(isa),
        }
    }
}

/// Writes preset configs for every set and environment into `dir`.
pub fn write_presets(dir: &Path) -> Result<usize> {
    fs::create_dir_all(dir)?;
    let mut n = 0;
    for &set in SetName::ALL {
        for env in EnvKind::ALL {
            let cfg = RunConfig::preset(set, env);
            let file = dir.join(format!("{}_{}.cfg", set.as_str(), env.as_str()));
            fs::write(file, cfg.to_ini())?;
            n += 1;
        }
    }
    Ok(n)
}

/// Final metrics of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub replicate: u32,
    pub seed: u64,
    pub set: String,
    pub environment: String,
    pub updates: u64,
    pub organisms: usize,
    pub log2_mean_fitness: f64,
    pub task_success: f64,
}

/// Everything one replicate produced.
#[derive(Debug, Clone)]
pub struct ReplicateOutput {
    pub summary: SummaryRow,
    pub log: String,
    pub best: Option<String>,
}

fn log_header(world: &World) -> String {
    let mut s = format!("{LOG_HEADER}\nupdate,organisms,mean_merit,log2_mean_fitness,task_success");
    for name in world.env.task_names() {
        let _ = write!(s, ",task_{name}");
    }
    for i in 0..world.env.pools.len() {
        let _ = write!(s, ",resource_{i}");
    }
    s.push('\n');
    s
}

fn log_row(out: &mut String, s: &UpdateStats) {
    let _ = write!(
        out,
        "{},{},{},{},{}",
        s.update, s.organisms, s.mean_merit, s.log2_mean_fitness, s.task_success
    );
    for c in &s.task_counts {
        let _ = write!(out, ",{c}");
    }
    for r in &s.resources {
        let _ = write!(out, ",{r}");
    }
    out.push('\n');
}

/// Runs replicate `r` of `cfg` entirely in memory.
pub fn run_replicate(cfg: &RunConfig, r: u32) -> Result<ReplicateOutput> {
    let isa = cfg.instruction_set()?;
    let genome = cfg.ancestor_genome(&isa)?;
    let seed = cfg.seed.wrapping_add(r as u64);
    let mut world = World::new(cfg.world.clone(), isa, seed)?;
    world.seed(genome)?;
    let mut log = log_header(&world);
    let mut last = world.stats();
    log_row(&mut log, &last);
    for u in 1..=cfg.updates {
        last = world.run_update();
        if u % cfg.log_interval == 0 || u == cfg.updates {
            log_row(&mut log, &last);
        }
    }
    Ok(ReplicateOutput {
        summary: SummaryRow {
            replicate: r,
            seed,
            set: world.isa.name.clone(),
            environment: world.env.kind.to_string(),
            updates: cfg.updates,
            organisms: last.organisms,
            log2_mean_fitness: last.log2_mean_fitness,
            task_success: last.task_success,
        },
        log,
        best: world.best().map(|o| o.dump()),
    })
}

/// Runs all replicates on a pool of `cfg.workers` threads. Results are in
/// replicate order regardless of scheduling.
pub fn run_all(cfg: &RunConfig) -> Result<Vec<ReplicateOutput>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::config("run.workers", e.to_string()))?;
    pool.install(|| {
        (0..cfg.replicates)
            .into_par_iter()
            .map(|r| run_replicate(cfg, r))
            .collect()
    })
}

pub fn format_summary(rows: &[SummaryRow]) -> String {
    let mut s = format!(
        "{SUMMARY_HEADER}\nreplicate,seed,set,environment,updates,organisms,log2_mean_fitness,task_success\n"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.replicate, r.seed, r.set, r.environment, r.updates, r.organisms, r.log2_mean_fitness, r.task_success
        );
    }
    s
}

/// Runs the experiment and writes `summary.csv`, one update log per
/// replicate and the fittest organism of each replicate into `cfg.out`.
pub fn run_experiment(cfg: &RunConfig) -> Result<Vec<SummaryRow>> {
    cfg.validate()?;
    let outputs = run_all(cfg)?;
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("config.cfg"), cfg.to_recorded_ini())?;
    for o in &outputs {
        let r = o.summary.replicate;
        fs::write(cfg.out.join(format!("replicate_{r:03}.csv")), &o.log)?;
        if let Some(best) = &o.best {
            fs::write(cfg.out.join(format!("replicate_{r:03}_best.org")), best)?;
        }
    }
    let rows: Vec<SummaryRow> = outputs.into_iter().map(|o| o.summary).collect();
    fs::write(cfg.out.join("summary.csv"), format_summary(&rows))?;
    Ok(rows)
}

/// Reads a `summary.csv` written by [`run_experiment`].
pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    let file = path.display().to_string();
    let bad = |msg: String| Error::Csv { file: file.clone(), msg };
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == SUMMARY_HEADER => {}
        other => return Err(bad(format!("expected `{SUMMARY_HEADER}`, found {other:?}"))),
    }
    lines.next().ok_or_else(|| bad("missing column header".into()))?;
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad(format!("row {}: expected 8 fields, found {}", i + 1, f.len())));
        }
        let num = |k: usize| -> Result<f64> {
            f[k].trim().parse().map_err(|_| bad(format!("row {}: bad number `{}`", i + 1, f[k])))
        };
        rows.push(SummaryRow {
            replicate: num(0)? as u32,
            seed: f[1].trim().parse().map_err(|_| bad(format!("row {}: bad seed", i + 1)))?,
            set: f[2].to_string(),
            environment: f[3].to_string(),
            updates: num(4)? as u64,
            organisms: num(5)? as usize,
            log2_mean_fitness: num(6)?,
            task_success: num(7)?,
        });
    }
    Ok(rows)
}

/// One metric compared between two sets of replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub metric: String,
    pub environment: String,
    pub set_a: String,
    pub set_b: String,
    pub median_a: f64,
    pub ci_a: (f64, f64),
    pub median_b: f64,
    pub ci_b: (f64, f64),
    pub p_value: f64,
    pub holm_reject: bool,
}

fn single<'a>(rows: &'a [SummaryRow], what: &str, f: impl Fn(&SummaryRow) -> &str) -> Result<&'a str> {
    let first = rows
        .first()
        .map(|r| f(r))
        .ok_or_else(|| Error::Csv { file: what.into(), msg: "no replicates".into() })?;
    if rows.iter().any(|r| f(r) != first) {
        return Err(Error::Csv { file: what.into(), msg: "summary mixes several runs".into() });
    }
    Ok(first)
}

/// Medians, bootstrap intervals, rank-sum p-values and Holm flags for
/// final fitness and task success.
pub fn compare_sets(a: &[SummaryRow], b: &[SummaryRow]) -> Result<Vec<ComparisonRow>> {
    let env_a = single(a, "A", |r| &r.environment)?;
    let env_b = single(b, "B", |r| &r.environment)?;
    if env_a != env_b {
        return Err(Error::MismatchedEnvironments(env_a.into(), env_b.into()));
    }
    let set_a = single(a, "A", |r| &r.set)?;
    let set_b = single(b, "B", |r| &r.set)?;
    type Metric = (&'static str, fn(&SummaryRow) -> f64);
    let metrics: [Metric; 2] = [
        ("log2_mean_fitness", |r| r.log2_mean_fitness),
        ("task_success", |r| r.task_success),
    ];
    let mut rows: Vec<ComparisonRow> = metrics
        .iter()
        .map(|(name, get)| {
            let xa: Vec<f64> = a.iter().map(get).collect();
            let xb: Vec<f64> = b.iter().map(get).collect();
            let mut rng_a = stream(0, &format!("bootstrap-{name}-a"));
            let mut rng_b = stream(0, &format!("bootstrap-{name}-b"));
            ComparisonRow {
                metric: name.to_string(),
                environment: env_a.to_string(),
                set_a: set_a.to_string(),
                set_b: set_b.to_string(),
                median_a: analysis::median(&xa),
                ci_a: analysis::bootstrap_ci(&xa, BOOTSTRAP_ITERATIONS, (0.025, 0.975), &mut rng_a),
                median_b: analysis::median(&xb),
                ci_b: analysis::bootstrap_ci(&xb, BOOTSTRAP_ITERATIONS, (0.025, 0.975), &mut rng_b),
                p_value: analysis::wilcoxon_rank_sum(&xa, &xb),
                holm_reject: false,
            }
        })
        .collect();
    let p: Vec<f64> = rows.iter().map(|r| r.p_value).collect();
    for (row, flag) in rows.iter_mut().zip(analysis::sequential_bonferroni(&p, 0.05)) {
        row.holm_reject = flag;
    }
    Ok(rows)
}

pub fn format_comparison(rows: &[ComparisonRow]) -> String {
    let mut s = format!(
        "{COMPARISON_HEADER}\nmetric,environment,set_a,set_b,median_a,ci_low_a,ci_high_a,median_b,ci_low_b,ci_high_b,p_value,holm_reject\n"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.metric,
            r.environment,
            r.set_a,
            r.set_b,
            r.median_a,
            r.ci_a.0,
            r.ci_a.1,
            r.median_b,
            r.ci_b.0,
            r.ci_b.1,
            r.p_value,
            r.holm_reject
        );
    }
    s
}

/// Steps a lone organism and returns one trace line per instruction.
pub fn trace(genome: Vec<Inst>, isa: &InstructionSet, env_kind: EnvKind, seed: u64, steps: u64) -> Result<String> {
    isa.validate(&genome)?;
    let isa = if env_kind == EnvKind::Navigation { isa.clone().with_navigation() } else { isa.clone() };
    let mut env = Environment::new(env_kind, EnvConfig::default(), seed);
    let mut life = env.new_lifetime();
    let rules = DivideRules::default();
    let mut cpu = CpuState::new(genome);
    let mut out = format!("{TRACE_HEADER}\ncycle,ip,instruction,args,registers,stack_top\n");
    for cycle in 0..steps {
        out.push_str(&cpu.trace_line(&isa, cycle));
        out.push('\n');
        let fx = cpu.execute(&isa, &rules, &mut LifeIo { env: &mut env, life: &mut life });
        if fx.offspring.is_some() {
            life = env.new_lifetime();
        }
    }
    Ok(out)
}
