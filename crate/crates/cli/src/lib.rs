//! Configurable numerical experiments over the `kzb-core` library.

pub mod checks;
pub mod config;
pub mod report;

use std::collections::BTreeMap;

use rayon::prelude::*;

use checks::{BetheRun, Family, FamilyOut};
use config::{ConfigError, Experiment};
use report::{Report, SCHEMA_VERSION};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Families to run for a command; `None` means every applicable family.
pub fn select(ex: &Experiment, only: Option<Family>) -> Result<Vec<Family>, ConfigError> {
    match only {
        Some(f) if f.applicable(ex) => Ok(vec![f]),
        Some(f) => Err(ConfigError(format!("`{}` needs {}", f.name(), f.missing_inputs()))),
        None => Ok(Family::ALL.into_iter().filter(|f| f.applicable(ex)).collect()),
    }
}

/// Runs the families in parallel and assembles the report.
pub fn run(ex: &Experiment, command: &str, families: &[Family], tolerance: f64) -> Result<Report, ConfigError> {
    let needs_bethe = ex.kind.is_some() && families.iter().any(|f| matches!(f, Family::Bethe | Family::Eigen));
    let bethe_run = if needs_bethe { Some(BetheRun::new(ex)?) } else { None };
    let outs: Vec<Result<FamilyOut, ConfigError>> = families
        .par_iter()
        .map(|&f| match f {
            Family::Roots => checks::roots(ex),
            Family::Shapovalov => checks::shapovalov(ex),
            Family::Bethe => checks::bethe(ex, bethe_run.as_ref().expect("prepared"), tolerance),
            Family::Eigen => checks::eigen(ex, bethe_run.as_ref(), tolerance),
            Family::Weyl => checks::weyl(ex),
            Family::Jack => checks::jack(ex, tolerance),
            Family::Limits => checks::limits(ex),
        })
        .collect();
    let mut report = Report {
        schema: SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        seed: ex.solver.seed,
        threads: rayon::current_num_threads(),
        config: serde_json::to_value(&ex.file).expect("config serializes"),
        data: BTreeMap::new(),
        checks: Vec::new(),
        solver_logs: Vec::new(),
        summary: Default::default(),
    };
    for out in outs {
        let out = out?;
        report.checks.extend(out.checks.into_iter().filter(|c| ex.wants(&c.name)));
        report.solver_logs.extend(out.logs);
        report.data.extend(out.data);
    }
    report.summarize();
    Ok(report)
}
