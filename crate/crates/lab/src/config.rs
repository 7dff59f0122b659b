//! Declarative experiment configuration: a flat TOML document with
//! `[scheme]`, `[problem]`, `[boundary]`, `[refinement]` and `[output]`
//! sections. `parse_config` validates and resolves defaults (derived cfl
//! or lambda, truncation K = k - 1, cell-average family), so a parsed
//! config echoes back byte-for-byte reproducibly.

use advect_bc_core::{
    DataOracle, Geometry, GridConfig, InflowFamily, InflowSpec, OracleParseError, OutflowSpec,
    ProblemSpec, SchemeCoefficients, SchemeError, SolverError,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Toml(String),
    #[error("scheme.name `{0}` is not one of lax_wendroff, o3, upwind")]
    UnknownScheme(String),
    #[error("{field}: {source}")]
    Oracle {
        field: &'static str,
        source: OracleParseError,
    },
    #[error("{field} must be positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("scheme.cfl = {cfl} disagrees with problem.lambda * problem.a = {lambda_a}")]
    CflInconsistent { cfl: f64, lambda_a: f64 },
    #[error("one of scheme.cfl or problem.lambda is required")]
    MissingLambda,
    #[error("refinement.J must not be empty")]
    RefinementEmpty,
    #[error("refinement.J must be strictly increasing at position {0}")]
    RefinementNotIncreasing(usize),
    #[error("scheme construction failed: {0}")]
    Scheme(#[from] SchemeError),
    #[error("grid for J = {cells} is invalid: {source}")]
    Grid { cells: usize, source: SolverError },
    #[error("boundary setup failed: {0}")]
    Boundary(#[from] advect_bc_core::BoundaryError),
    #[error("problem setup for J = {cells} failed: {source}")]
    Problem { cells: usize, source: SolverError },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: SchemeSection,
    pub problem: ProblemSection,
    pub boundary: BoundarySection,
    pub refinement: RefinementSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    /// `lax_wendroff`, `o3` or `upwind`.
    pub name: String,
    /// CFL number; derived from `problem.lambda * problem.a` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cfl: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub geometry: GeometryName,
    #[serde(rename = "L")]
    pub length: f64,
    /// Grid ratio dt/dx; derived from `scheme.cfl / problem.a` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(rename = "a")]
    pub velocity: f64,
    #[serde(rename = "T")]
    pub final_time: f64,
    /// Initial data oracle name.
    #[serde(rename = "f")]
    pub initial: String,
    /// Boundary datum oracle name.
    #[serde(rename = "g")]
    pub boundary_datum: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryName {
    Interval,
    HalflineInflow,
    HalflineOutflow,
}

impl From<GeometryName> for Geometry {
    fn from(name: GeometryName) -> Self {
        match name {
            GeometryName::Interval => Geometry::Interval,
            GeometryName::HalflineInflow => Geometry::HalflineInflow,
            GeometryName::HalflineOutflow => Geometry::HalflineOutflow,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    CellAverage,
    CellCenter,
}

impl From<FamilyName> for InflowFamily {
    fn from(name: FamilyName) -> Self {
        match name {
            FamilyName::CellAverage => InflowFamily::CellAverage,
            FamilyName::CellCenter => InflowFamily::CellCenter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    /// Inflow coefficient family; defaults to `cell_average`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyName>,
    /// Taylor truncation K; defaults to the scheme's claimed order minus 1.
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Outflow extrapolation order.
    pub k_b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefinementSection {
    #[serde(rename = "J")]
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default = "default_true")]
    pub csv: bool,
    #[serde(default = "default_true")]
    pub plot_data: bool,
}

fn default_true() -> bool {
    true
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: None,
            csv: true,
            plot_data: true,
        }
    }
}

/// Claimed consistency order of a named scheme.
fn claimed_order_of(name: &str) -> Option<usize> {
    match name {
        "lax_wendroff" => Some(2),
        "o3" => Some(3),
        "upwind" => Some(1),
        _ => None,
    }
}

/// Builds the named scheme at the given CFL number.
pub fn scheme_by_name(name: &str, cfl: f64) -> Result<SchemeCoefficients, ConfigError> {
    match name {
        "lax_wendroff" => Ok(SchemeCoefficients::lax_wendroff(cfl)?),
        "o3" => Ok(SchemeCoefficients::o3(cfl)?),
        "upwind" => Ok(SchemeCoefficients::upwind(cfl)?),
        other => Err(ConfigError::UnknownScheme(other.to_string())),
    }
}

/// Parses and validates a TOML experiment config, resolving every default
/// so that the result echoes reproducibly.
pub fn parse_config(source: &str) -> Result<ExperimentConfig, ConfigError> {
    let config: ExperimentConfig =
        toml::from_str(source).map_err(|e| ConfigError::Toml(e.to_string()))?;
    resolve(config)
}

fn positive(field: &'static str, value: f64) -> Result<f64, ConfigError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::NonPositive { field, value })
    }
}

fn resolve(mut config: ExperimentConfig) -> Result<ExperimentConfig, ConfigError> {
    let claimed = claimed_order_of(&config.scheme.name)
        .ok_or_else(|| ConfigError::UnknownScheme(config.scheme.name.clone()))?;
    positive("problem.L", config.problem.length)?;
    positive("problem.a", config.problem.velocity)?;
    positive("problem.T", config.problem.final_time)?;
    let velocity = config.problem.velocity;
    match (config.scheme.cfl, config.problem.lambda) {
        (Some(cfl), Some(lambda)) => {
            positive("scheme.cfl", cfl)?;
            positive("problem.lambda", lambda)?;
            let lambda_a = lambda * velocity;
            if (cfl - lambda_a).abs() > 1e-12 * cfl.max(1.0) {
                return Err(ConfigError::CflInconsistent { cfl, lambda_a });
            }
        }
        (Some(cfl), None) => {
            positive("scheme.cfl", cfl)?;
            config.problem.lambda = Some(cfl / velocity);
        }
        (None, Some(lambda)) => {
            positive("problem.lambda", lambda)?;
            config.scheme.cfl = Some(lambda * velocity);
        }
        (None, None) => return Err(ConfigError::MissingLambda),
    }
    config
        .problem
        .initial
        .parse::<DataOracle>()
        .map_err(|source| ConfigError::Oracle {
            field: "problem.f",
            source,
        })?;
    config
        .problem
        .boundary_datum
        .parse::<DataOracle>()
        .map_err(|source| ConfigError::Oracle {
            field: "problem.g",
            source,
        })?;
    if config.boundary.family.is_none() {
        config.boundary.family = Some(FamilyName::CellAverage);
    }
    if config.boundary.truncation.is_none() {
        config.boundary.truncation = Some(claimed - 1);
    }
    if config.refinement.cells.is_empty() {
        return Err(ConfigError::RefinementEmpty);
    }
    for (i, pair) in config.refinement.cells.windows(2).enumerate() {
        if pair[1] <= pair[0] {
            return Err(ConfigError::RefinementNotIncreasing(i + 1));
        }
    }
    // every listed J must make a valid grid
    for &cells in &config.refinement.cells {
        grid_for(&config, cells)?;
    }
    Ok(config)
}

/// Serializes a resolved config back to TOML (the echo embedded in
/// metadata files; parsing the echo reproduces the config exactly).
pub fn echo(config: &ExperimentConfig) -> String {
    toml::to_string_pretty(config).expect("config serializes")
}

fn grid_for(config: &ExperimentConfig, cells: usize) -> Result<GridConfig, ConfigError> {
    GridConfig::new(
        config.problem.length,
        cells,
        config.problem.lambda.expect("resolved"),
        config.problem.velocity,
        config.problem.final_time,
    )
    .map_err(|source| ConfigError::Grid { cells, source })
}

/// Instantiates the full problem at one grid size from a resolved config.
pub fn build_problem(config: &ExperimentConfig, cells: usize) -> Result<ProblemSpec, ConfigError> {
    let grid = grid_for(config, cells)?;
    let scheme = scheme_by_name(&config.scheme.name, config.scheme.cfl.expect("resolved"))?;
    let datum: DataOracle = config
        .problem
        .boundary_datum
        .parse()
        .map_err(|source| ConfigError::Oracle {
            field: "problem.g",
            source,
        })?;
    let initial: DataOracle = config
        .problem
        .initial
        .parse()
        .map_err(|source| ConfigError::Oracle {
            field: "problem.f",
            source,
        })?;
    let inflow = InflowSpec::new(
        config.boundary.family.expect("resolved").into(),
        config.boundary.truncation.expect("resolved"),
        datum,
        config.problem.velocity,
    )?;
    let outflow = OutflowSpec::new(config.boundary.k_b);
    ProblemSpec::new(
        grid,
        scheme,
        inflow,
        outflow,
        initial,
        config.problem.geometry.into(),
    )
    .map_err(|source| ConfigError::Problem { cells, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[scheme]
name = "lax_wendroff"

[problem]
geometry = "interval"
L = 6.0
lambda = 0.8333333333333334
a = 1.0
T = 8.0
f = "sin"
g = "neg_sin"

[boundary]
k_b = 1

[refinement]
J = [100, 200]
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.boundary.truncation, Some(1)); // K = k - 1 for LW
        assert_eq!(cfg.boundary.family, Some(FamilyName::CellAverage));
        let cfl = cfg.scheme.cfl.unwrap();
        assert!((cfl - 5.0 / 6.0).abs() < 1e-12);
        assert!(cfg.output.csv && cfg.output.plot_data);
    }

    #[test]
    fn o3_truncation_default_is_two() {
        let text = MINIMAL.replace("lax_wendroff", "o3").replace("k_b = 1", "k_b = 3");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.boundary.truncation, Some(2));
        let problem = build_problem(&cfg, 100).unwrap();
        assert_eq!(problem.scheme.left_width(), 2);
    }

    #[test]
    fn misspelled_oracle_is_rejected_with_field() {
        let text = MINIMAL.replace("\"sin\"", "\"sinn\"");
        match parse_config(&text) {
            Err(ConfigError::Oracle { field, .. }) => assert_eq!(field, "problem.f"),
            other => panic!("expected oracle error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_scheme_is_rejected() {
        let text = MINIMAL.replace("lax_wendroff", "lax_wendrof");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::UnknownScheme(_))
        ));
    }

    #[test]
    fn nonpositive_sizes_are_rejected() {
        let text = MINIMAL.replace("L = 6.0", "L = -6.0");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::NonPositive { field: "problem.L", .. })
        ));
    }

    #[test]
    fn inconsistent_cfl_is_rejected() {
        let with_cfl =
            MINIMAL.replace("name = \"lax_wendroff\"", "name = \"lax_wendroff\"\ncfl = 0.5");
        assert!(matches!(
            parse_config(&with_cfl),
            Err(ConfigError::CflInconsistent { .. })
        ));
    }

    #[test]
    fn refinement_must_increase() {
        let text = MINIMAL.replace("J = [100, 200]", "J = [200, 100]");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::RefinementNotIncreasing(1))
        ));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("lambda =", "lamda =");
        assert!(matches!(parse_config(&text), Err(ConfigError::Toml(_))));
    }

    #[test]
    fn echo_round_trips() {
        let cfg = parse_config(MINIMAL).unwrap();
        let echoed = echo(&cfg);
        let back = parse_config(&echoed).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn build_problem_wires_everything() {
        let cfg = parse_config(MINIMAL).unwrap();
        let problem = build_problem(&cfg, 100).unwrap();
        assert_eq!(problem.grid.cells, 100);
        assert_eq!(problem.scheme.name(), "lax_wendroff");
        assert_eq!(problem.outflow.extrapolation_order, 1);
        assert_eq!(problem.inflow.truncation, 1);
    }
}
