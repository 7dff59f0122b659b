//! Configuration-driven front end for the advection boundary-condition
//! laboratory: declarative TOML experiment configs, built-in presets for
//! the standard convergence studies, a refinement-study runner with CSV
//! and plot-data output, and a scheme analysis report.

pub mod analyze;
pub mod config;
pub mod presets;
pub mod runner;
pub mod table;

pub use analyze::{analyze, AnalysisReport};
pub use config::{build_problem, parse_config, ConfigError, ExperimentConfig};
pub use presets::{preset, preset_names};
pub use runner::{converge, run_single, LabError, RunOutcome};
pub use table::ConvergenceTable;
