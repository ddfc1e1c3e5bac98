use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use isa_evo::environment::EnvKind;
use isa_evo::isa::{self, InstructionSet};
use isa_evo::runner::{self, RunConfig};

#[derive(Parser)]
#[command(name = "isa-evo", version, about = "Evolve self-replicating programs and compare instruction sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        replicates: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compare the summaries of two experiments.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Step a single organism and print its execution trace.
    Trace {
        #[arg(long)]
        genome: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 100)]
        steps: u64,
        #[arg(long, default_value = "Logic-9")]
        environment: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a preset config for every instruction set and environment.
    Presets {
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the built-in ancestor of an instruction set.
    Ancestor {
        #[arg(long)]
        set: String,
    },
}

fn execute(cli: Cli) -> isa_evo::Result<()> {
    match cli.command {
        Command::Run { config, replicates, seed, out, workers } => {
            let mut cfg = RunConfig::from_file(&config)?;
            if let Some(r) = replicates {
                cfg.replicates = r;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.out = o;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let rows = runner::run_experiment(&cfg)?;
            print!("{}", runner::format_summary(&rows));
        }
        Command::Compare { a, b, out } => {
            let ra = runner::read_summary(&a.join("summary.csv"))?;
            let rb = runner::read_summary(&b.join("summary.csv"))?;
            let table = runner::format_comparison(&runner::compare_sets(&ra, &rb)?);
            std::fs::write(&out, &table)?;
            print!("{table}");
        }
        Command::Trace { genome, set, steps, environment, seed } => {
            let isa = InstructionSet::by_name(&set)?;
            let env: EnvKind = environment.parse()?;
            print!("{}", runner::trace(isa::read_genome(&genome)?, &isa, env, seed, steps)?);
        }
        Command::Presets { out } => {
            let n = runner::write_presets(&out)?;
            println!("wrote {n} presets to {}", out.display());
        }
        Command::Ancestor { set } => {
            let isa = InstructionSet::by_name(&set)?;
            print!("{}", isa::format_genome(&isa_evo::organism::ancestor(&isa)?));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
