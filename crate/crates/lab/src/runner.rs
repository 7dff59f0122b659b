//! Drives single runs and refinement studies from a resolved config.
//!
//! Refinement rows are independent (no shared mutable state), so the
//! study runs them on a rayon pool; results are reassembled in J order, so
//! the table is deterministic regardless of scheduling.

use std::time::Instant;

use advect_bc_core::{run, ErrorReport, SolverError, SpectralError};
use rayon::prelude::*;

use crate::config::{build_problem, echo, ConfigError, ExperimentConfig};
use crate::table::{ConvergenceTable, TableRow};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("run expects exactly one refinement entry, got {0} (use `converge`)")]
    NotSingleRun(usize),
    #[error("refinement row unstable: {0}")]
    RowInstability(String),
    #[error("io error: {0}")]
    Io(String),
}

impl LabError {
    /// Process exit code: 1 config/usage, 2 numerical instability,
    /// 3 assumption violation (raised by the analyze command in strict mode).
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Solver(SolverError::Unstable { .. }) => 2,
            LabError::RowInstability(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

/// One completed run with its timing.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub cells: usize,
    pub report: ErrorReport,
    pub wall_ms: f64,
}

/// Executes the run at one grid size.
pub fn run_single(config: &ExperimentConfig, cells: usize) -> Result<RunOutcome, LabError> {
    let problem = build_problem(config, cells)?;
    let start = Instant::now();
    let report = run(&problem)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunOutcome {
        cells,
        report,
        wall_ms,
    })
}

/// Runs the whole refinement list (rows in parallel) and assembles the
/// convergence table. Per-row failures are recorded in their row without
/// aborting the remaining rows.
pub fn converge(config: &ExperimentConfig, jobs: Option<usize>) -> Result<ConvergenceTable, LabError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| LabError::Io(e.to_string()))?;
    let start = Instant::now();
    let cells_list = config.refinement.cells.clone();
    let rows: Vec<TableRow> = pool.install(|| {
        cells_list
            .par_iter()
            .map(|&cells| {
                let dx = config.problem.length / cells as f64;
                match run_single(config, cells) {
                    Ok(outcome) => TableRow {
                        cells,
                        dx,
                        linf: Some(outcome.report.linf_nj),
                        sup_l2: Some(outcome.report.sup_l2),
                        wall_ms: outcome.wall_ms,
                        error: None,
                        unstable: false,
                    },
                    Err(e) => TableRow {
                        cells,
                        dx,
                        linf: None,
                        sup_l2: None,
                        wall_ms: 0.0,
                        unstable: matches!(
                            e,
                            LabError::Solver(SolverError::Unstable { .. })
                        ),
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });
    Ok(ConvergenceTable {
        config_echo: echo(config),
        rows,
        total_wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
