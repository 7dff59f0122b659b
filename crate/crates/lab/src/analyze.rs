//! Scheme analysis report: consistency order, amplification verdict,
//! characteristic polynomial, classified roots, unstable-root count
//! against the stencil width, corrector-matrix conditioning across
//! extrapolation orders, and (when the refinement list allows) the
//! boundary-layer norm scaling.

use std::fmt::Write as _;

use advect_bc_core::{
    build_corrector_system, char_poly, check_amplification, check_consistency,
    check_root_assumption, corrector_l2_scaling, count_unstable, find_roots, steady_state_basis,
    suggested_window, CharPoly, RootRegion, RootSet, SchemeCoefficients, SpectralError,
};
use serde::Serialize;

use crate::config::{build_problem, scheme_by_name, ExperimentConfig};
use crate::runner::LabError;

/// Cluster and circle tolerances for root classification.
const ROOT_TOL: f64 = 1e-8;
/// Amplification samples and pass tolerance.
const AMP_SAMPLES: usize = 10_000;
const AMP_TOL: f64 = 1e-12;
/// Moment residual tolerance.
const MOMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct SchemeInfo {
    pub name: String,
    pub cfl: f64,
    pub left_width: usize,
    pub right_width: usize,
    pub claimed_order: usize,
    pub weights: Vec<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyInfo {
    pub orders_checked: Vec<usize>,
    pub residuals: Vec<f64>,
    pub achieved_order: Option<usize>,
    pub matches_claim: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplificationInfo {
    pub sup_modulus: f64,
    pub argmax_theta: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootInfo {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub multiplicity: usize,
    pub region: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrectorInfo {
    pub k_b: usize,
    /// Row-major entries as `[re, im]` pairs; empty when unsolvable.
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub condition_one_norm: Option<f64>,
    pub solvable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingInfo {
    pub points: Vec<ScalingPointInfo>,
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingPointInfo {
    pub cells: usize,
    pub dx: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub scheme: SchemeInfo,
    pub consistency: ConsistencyInfo,
    pub amplification: AmplificationInfo,
    pub characteristic_polynomial: Vec<f64>,
    /// Classified roots; empty when the polynomial is degenerate.
    pub roots: Vec<RootInfo>,
    pub root_error: Option<String>,
    pub root_assumption_satisfied: Option<bool>,
    pub unstable_multiplicity: Option<usize>,
    pub expected_unstable: usize,
    pub correctors: Vec<CorrectorInfo>,
    pub boundary_layer: Option<ScalingInfo>,
    /// Human-readable assumption violations; drives strict mode.
    pub violations: Vec<String>,
}

fn region_name(region: RootRegion) -> &'static str {
    match region {
        RootRegion::Outside => "outside_unit_circle",
        RootRegion::OnCircle => "on_unit_circle",
        RootRegion::Inside => "inside_unit_disk",
    }
}

fn root_infos(rs: &RootSet) -> Vec<RootInfo> {
    rs.roots()
        .iter()
        .map(|r| RootInfo {
            re: r.value.re,
            im: r.value.im,
            modulus: r.value.norm(),
            multiplicity: r.multiplicity,
            region: region_name(r.region).to_string(),
        })
        .collect()
}

fn corrector_infos(
    scheme: &SchemeCoefficients,
    roots: &RootSet,
    violations: &mut Vec<String>,
) -> Vec<CorrectorInfo> {
    let claimed = scheme.claimed_order();
    let p = scheme.right_width();
    let mut out = Vec::new();
    if p == 0 || roots.unstable_multiplicity() == 0 {
        return out;
    }
    for kb in 1..=claimed {
        let window = suggested_window(roots, scheme.left_width(), p)
            .unwrap_or(kb + 1)
            .max(kb + 1);
        let basis = steady_state_basis(roots, 0, window);
        match build_corrector_system(&basis, kb) {
            Ok(sys) => {
                let dim = sys.dim();
                let matrix = (0..dim)
                    .map(|row| {
                        (0..dim)
                            .map(|col| {
                                let z = sys.matrix()[row * dim + col];
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect();
                out.push(CorrectorInfo {
                    k_b: kb,
                    matrix,
                    condition_one_norm: Some(sys.condition_one_norm()),
                    solvable: true,
                });
            }
            Err(e) => {
                if kb < claimed {
                    violations.push(format!("corrector system k_b = {kb}: {e}"));
                }
                out.push(CorrectorInfo {
                    k_b: kb,
                    matrix: Vec::new(),
                    condition_one_norm: None,
                    solvable: false,
                });
            }
        }
    }
    out
}

/// Builds the full analysis report for the configured scheme.
pub fn analyze(config: &ExperimentConfig) -> Result<AnalysisReport, LabError> {
    let cfl = config.scheme.cfl.expect("resolved");
    let scheme = scheme_by_name(&config.scheme.name, cfl)?;
    let mut violations = Vec::new();

    let consistency_report = check_consistency(&scheme, scheme.claimed_order() + 1, MOMENT_TOL);
    let matches_claim = consistency_report.achieved_order >= Some(scheme.claimed_order());
    if !matches_claim {
        violations.push(format!(
            "consistency order {:?} below the claimed order {}",
            consistency_report.achieved_order,
            scheme.claimed_order()
        ));
    }

    let amplification_report = check_amplification(&scheme, AMP_SAMPLES, AMP_TOL);
    if !amplification_report.satisfied {
        violations.push(format!(
            "amplification sup {:.6} exceeds 1 (whole-line l2 stability fails)",
            amplification_report.sup_modulus
        ));
    }

    let cp: CharPoly = char_poly(&scheme);
    let expected_unstable = scheme.right_width();
    let (roots, root_error, assumption, unstable) =
        match find_roots(&cp, ROOT_TOL, ROOT_TOL) {
            Ok(rs) => {
                let assumption = check_root_assumption(&rs);
                if !assumption {
                    violations.push("root assumption fails: roots on the unit circle other than a simple 1".to_string());
                }
                let unstable = match count_unstable(&rs, expected_unstable) {
                    Ok(n) => Some(n),
                    Err(SpectralError::UnstableCountMismatch { found, expected }) => {
                        violations.push(format!(
                            "unstable root multiplicity {found} differs from p = {expected}"
                        ));
                        Some(found)
                    }
                    Err(_) => None,
                };
                (rs, None, Some(assumption), unstable)
            }
            Err(e) => {
                violations.push(format!("characteristic polynomial: {e}"));
                (
                    RootSet::new(Vec::new(), ROOT_TOL),
                    Some(e.to_string()),
                    None,
                    None,
                )
            }
        };

    let correctors = corrector_infos(&scheme, &roots, &mut violations);

    // Boundary-layer scaling when the refinement list is a doubling chain
    // and the configured k_b admits a corrector.
    let boundary_layer = if config.boundary.k_b >= 1 && roots.unstable_multiplicity() > 0 {
        build_problem(config, config.refinement.cells[0])
            .ok()
            .and_then(|problem| corrector_l2_scaling(&problem, &config.refinement.cells).ok())
            .map(|scaling| ScalingInfo {
                points: scaling
                    .points
                    .iter()
                    .map(|pt| ScalingPointInfo {
                        cells: pt.cells,
                        dx: pt.dx,
                        norm: pt.norm,
                    })
                    .collect(),
                slope: scaling.slope,
            })
    } else {
        None
    };

    Ok(AnalysisReport {
        scheme: SchemeInfo {
            name: scheme.name().to_string(),
            cfl: scheme.cfl(),
            left_width: scheme.left_width(),
            right_width: scheme.right_width(),
            claimed_order: scheme.claimed_order(),
            weights: scheme.weights().to_vec(),
            warnings: scheme.warnings().iter().map(|w| format!("{w:?}")).collect(),
        },
        consistency: ConsistencyInfo {
            orders_checked: consistency_report.orders_checked,
            residuals: consistency_report.residuals,
            achieved_order: consistency_report.achieved_order,
            matches_claim,
        },
        amplification: AmplificationInfo {
            sup_modulus: amplification_report.sup_modulus,
            argmax_theta: amplification_report.argmax_theta,
            satisfied: amplification_report.satisfied,
        },
        characteristic_polynomial: cp.coefficients().to_vec(),
        roots: root_infos(&roots),
        root_error,
        root_assumption_satisfied: assumption,
        unstable_multiplicity: unstable,
        expected_unstable,
        correctors,
        boundary_layer,
        violations,
    })
}

impl AnalysisReport {
    pub fn has_violation(&self) -> bool {
        !self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Short console rendering of the verdicts.
    pub fn console(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "scheme {} (r = {}, p = {}, cfl = {:.6}, claimed order {})",
            self.scheme.name,
            self.scheme.left_width,
            self.scheme.right_width,
            self.scheme.cfl,
            self.scheme.claimed_order
        );
        let _ = writeln!(
            out,
            "  consistency: achieved order {:?} ({})",
            self.consistency.achieved_order,
            if self.consistency.matches_claim {
                "matches claim"
            } else {
                "BELOW CLAIM"
            }
        );
        let _ = writeln!(
            out,
            "  amplification: sup |gamma| = {:.12} at theta = {:.6} -> {}",
            self.amplification.sup_modulus,
            self.amplification.argmax_theta,
            if self.amplification.satisfied {
                "stable"
            } else {
                "VIOLATED"
            }
        );
        if let Some(err) = &self.root_error {
            let _ = writeln!(out, "  roots: {err}");
        } else {
            for root in &self.roots {
                let _ = writeln!(
                    out,
                    "  root {:+.9}{:+.9}i  |.| = {:.6}  mult {}  [{}]",
                    root.re, root.im, root.modulus, root.multiplicity, root.region
                );
            }
            let _ = writeln!(
                out,
                "  root assumption: {}; unstable multiplicity {} (p = {})",
                match self.root_assumption_satisfied {
                    Some(true) => "satisfied",
                    Some(false) => "VIOLATED",
                    None => "not checked",
                },
                self.unstable_multiplicity
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "?".to_string()),
                self.expected_unstable
            );
        }
        for c in &self.correctors {
            match c.condition_one_norm {
                Some(cond) => {
                    let _ = writeln!(
                        out,
                        "  corrector k_b = {}: solvable, cond_1 = {:.6e}",
                        c.k_b, cond
                    );
                }
                None => {
                    let _ = writeln!(out, "  corrector k_b = {}: SINGULAR", c.k_b);
                }
            }
        }
        if let Some(bl) = &self.boundary_layer {
            match bl.slope {
                Some(slope) => {
                    let _ = writeln!(
                        out,
                        "  boundary layer norm slope: {slope:.4} over {} grids",
                        bl.points.len()
                    );
                }
                None => {
                    let _ = writeln!(out, "  boundary layer norm: zero (no corrector needed)");
                }
            }
        }
        if self.violations.is_empty() {
            let _ = writeln!(out, "  verdict: all assumptions satisfied");
        } else {
            for v in &self.violations {
                let _ = writeln!(out, "  violation: {v}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn config_for(scheme: &str, lambda: f64, kb: usize, js: &str) -> ExperimentConfig {
        let text = format!(
            r#"
[scheme]
name = "{scheme}"

[problem]
geometry = "interval"
L = 6.0
lambda = {lambda}
a = 1.0
T = 8.0
f = "sin"
g = "neg_sin"

[boundary]
k_b = {kb}

[refinement]
J = {js}
"#
        );
        parse_config(&text).unwrap()
    }

    #[test]
    fn lax_wendroff_analysis_is_clean() {
        let cfg = config_for("lax_wendroff", 5.0 / 6.0, 1, "[500, 1000]");
        let report = analyze(&cfg).unwrap();
        assert!(!report.has_violation(), "{:?}", report.violations);
        assert_eq!(report.consistency.achieved_order, Some(2));
        assert!(report.amplification.satisfied);
        assert_eq!(report.root_assumption_satisfied, Some(true));
        assert_eq!(report.unstable_multiplicity, Some(1));
        assert_eq!(report.correctors.len(), 2);
        assert!(report.correctors.iter().all(|c| c.solvable));
        // k_b = 1 corrector is the scalar kappa - 1 = -12
        let m = &report.correctors[0].matrix;
        assert!((m[0][0][0] + 12.0).abs() < 1e-8);
        let bl = report.boundary_layer.as_ref().unwrap();
        let slope = bl.slope.unwrap();
        assert!((slope - 1.5).abs() < 0.1);
        // JSON serializes
        assert!(report.to_json().contains("\"roots\""));
    }

    #[test]
    fn unstable_scheme_reports_violation() {
        let cfg = config_for("lax_wendroff", 1.1, 1, "[100]");
        let report = analyze(&cfg).unwrap();
        assert!(report.has_violation());
        assert!(!report.amplification.satisfied);
        assert!((report.amplification.sup_modulus - 1.42).abs() < 1e-6);
    }

    #[test]
    fn o3_analysis_matches_closed_forms() {
        let cfg = config_for("o3", 5.0 / 6.0, 2, "[500, 1000]");
        let report = analyze(&cfg).unwrap();
        assert!(!report.has_violation(), "{:?}", report.violations);
        assert_eq!(report.consistency.achieved_order, Some(3));
        assert_eq!(report.roots.len(), 3);
        assert_eq!(report.correctors.len(), 3);
        let slope = report.boundary_layer.as_ref().unwrap().slope.unwrap();
        assert!((slope - 2.5).abs() < 0.1);
    }

    #[test]
    fn unit_cfl_reports_degenerate_roots_without_panicking() {
        let cfg = config_for("lax_wendroff", 1.0, 1, "[100]");
        let report = analyze(&cfg).unwrap();
        assert!(report.root_error.is_some());
        assert!(report.has_violation());
        assert!(report.amplification.satisfied);
    }

    #[test]
    fn upwind_has_no_correctors() {
        let cfg = config_for("upwind", 0.5, 1, "[100]");
        let report = analyze(&cfg).unwrap();
        assert!(report.correctors.is_empty());
        assert!(report.boundary_layer.is_none());
        assert!(!report.has_violation(), "{:?}", report.violations);
    }
}
