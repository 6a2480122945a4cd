use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cli_harness::{resolve_out_dir, run, validate, Diagnostic, Experiment, ExperimentConfig, HarnessError};

#[derive(Parser)]
#[command(name = "dispersive", version, about = "Dispersive-readout experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and write its artifacts.
    Run {
        config: PathBuf,
        /// Output directory; overrides the config and DISPERSIVE_OUT.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for stochastic experiments; overrides the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check a config and list its diagnostics.
    Validate { config: PathBuf },
    /// List the available experiments.
    ListExperiments,
}

fn report(diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("{d}");
    }
}

fn fail(e: HarnessError) -> ExitCode {
    match &e {
        HarnessError::Validation(d) => report(d),
        other => eprintln!("error: {other}"),
    }
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::ListExperiments => {
            for e in Experiment::ALL {
                println!("{:<16} {}", e.name(), e.summary());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => {
            let cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let diagnostics = validate(&cfg);
            report(&diagnostics);
            if diagnostics.iter().any(Diagnostic::is_error) {
                ExitCode::from(2)
            } else {
                println!("{}: ok ({} warning(s))", config.display(), diagnostics.len());
                ExitCode::SUCCESS
            }
        }
        Command::Run { config, out, seed, workers } => {
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            if let Some(s) = seed {
                cfg.set_seed(s);
            }
            report(&validate(&cfg).into_iter().filter(|d| !d.is_error()).collect::<Vec<_>>());
            let dir = resolve_out_dir(out.as_deref(), &cfg);
            match run(&cfg, &dir, workers) {
                Ok(m) => {
                    for o in &m.outputs {
                        println!("{}", dir.join(&o.path).display());
                    }
                    println!("{}", dir.join(cli_harness::output::MANIFEST_NAME).display());
                    eprintln!("{} finished in {:.2} s on {} worker(s)", m.experiment, m.wall_time_s, m.workers);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
