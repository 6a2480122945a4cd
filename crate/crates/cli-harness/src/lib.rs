//! Batch runner for the dispersive-readout experiments: parses TOML configs,
//! validates them field by field, runs the pipelines on a worker pool and
//! writes CSV tables with JSON sidecars plus a checksummed manifest.

pub mod config;
mod error;
pub mod experiments;
pub mod output;
mod validate;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

pub use config::{Experiment, ExperimentConfig, GridSpec};
pub use error::{Diagnostic, HarnessError, Level, Result};
pub use output::{Artifact, RunManifest, Table};
pub use validate::validate;

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "DISPERSIVE_OUT";

/// Output directory: the explicit one, else the config's, else
/// `$DISPERSIVE_OUT/<experiment>`, else `out/<experiment>`.
pub fn resolve_out_dir(explicit: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Some(p) = &cfg.output.dir {
        return p.clone();
    }
    let root = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out"));
    root.join(cfg.experiment.name())
}

/// Validates, computes every artifact in memory, then writes them to `out`.
/// A failure at any stage leaves no new files behind.
pub fn run(cfg: &ExperimentConfig, out: &Path, workers: Option<usize>) -> Result<RunManifest> {
    let diagnostics = validate(cfg);
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(HarnessError::Validation(diagnostics));
    }
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let clock = Instant::now();
    let pool = pool(workers)?;
    let artifacts = pool.install(|| experiments::execute(cfg))?;
    let info = output::RunInfo {
        started_unix,
        wall_time_s: clock.elapsed().as_secs_f64(),
        workers: pool.current_num_threads(),
    };
    output::write_run(out, cfg, &artifacts, info)
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(workers.unwrap_or(0)).build().map_err(HarnessError::runtime)
}

/// Runs the pipeline on a pool of `workers` threads (rayon's default when
/// `None`) without writing anything. The worker count never changes a number.
pub fn compute(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Vec<Artifact>> {
    pool(workers)?.install(|| experiments::execute(cfg))
}
