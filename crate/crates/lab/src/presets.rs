//! Built-in experiment configurations for the standard studies: the three
//! interval convergence tables, their Dirichlet-inflow variants, and the
//! half-line order checks. All share the reference setup a = 1,
//! lambda = 5/6, L = 6, T = 8, f = sin, g = -sin.

use crate::config::{parse_config, ExperimentConfig};

struct Preset {
    name: &'static str,
    description: &'static str,
    text: &'static str,
}

const PRESETS: &[Preset] = &[
    Preset {
        name: "table1",
        description: "Lax-Wendroff, first order outflow extrapolation, inverse Lax-Wendroff inflow (K = 1)",
        text: r#"
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
K = 1
k_b = 1

[refinement]
J = [1000, 2000, 4000, 8000]
"#,
    },
    Preset {
        name: "table1-dirichlet",
        description: "Lax-Wendroff, first order outflow extrapolation, plain Dirichlet inflow (K = 0)",
        text: r#"
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
K = 0
k_b = 1

[refinement]
J = [1000, 2000, 4000, 8000]
"#,
    },
    Preset {
        name: "table2",
        description: "Lax-Wendroff, second order outflow extrapolation, inverse Lax-Wendroff inflow (K = 1)",
        text: r#"
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
K = 1
k_b = 2

[refinement]
J = [1000, 2000, 4000, 8000]
"#,
    },
    Preset {
        name: "table2-dirichlet",
        description: "Lax-Wendroff, second order outflow extrapolation, plain Dirichlet inflow (K = 0)",
        text: r#"
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
K = 0
k_b = 2

[refinement]
J = [1000, 2000, 4000, 8000]
"#,
    },
    Preset {
        name: "table3",
        description: "O3 scheme, third order outflow extrapolation, inverse Lax-Wendroff inflow (K = 2)",
        text: r#"
[scheme]
name = "o3"

[problem]
geometry = "interval"
L = 6.0
lambda = 0.8333333333333334
a = 1.0
T = 8.0
f = "sin"
g = "neg_sin"

[boundary]
K = 2
k_b = 3

[refinement]
J = [1000, 2000, 4000]
"#,
    },
    Preset {
        name: "halfline-outflow",
        description: "Outflow half-line, Lax-Wendroff with first order extrapolation (max-norm order k_b = 1)",
        text: r#"
[scheme]
name = "lax_wendroff"

[problem]
geometry = "halfline_outflow"
L = 6.0
lambda = 0.8333333333333334
a = 1.0
T = 8.0
f = "sin"
g = "neg_sin"

[boundary]
K = 1
k_b = 1

[refinement]
J = [500, 1000, 2000, 4000]
"#,
    },
    Preset {
        name: "halfline-outflow-o3",
        description: "Outflow half-line, O3 with second order extrapolation (max-norm order k_b = 2)",
        text: r#"
[scheme]
name = "o3"

[problem]
geometry = "halfline_outflow"
L = 6.0
lambda = 0.8333333333333334
a = 1.0
T = 8.0
f = "sin"
g = "neg_sin"

[boundary]
K = 2
k_b = 2

[refinement]
J = [500, 1000, 2000, 4000]
"#,
    },
    Preset {
        name: "halfline-inflow",
        description: "Inflow half-line, Lax-Wendroff with inverse Lax-Wendroff inflow (l2 order k = 2)",
        text: r#"
[scheme]
name = "lax_wendroff"

[problem]
geometry = "halfline_inflow"
L = 6.0
lambda = 0.8333333333333334
a = 1.0
T = 8.0
f = "sin"
g = "neg_sin"

[boundary]
K = 1
k_b = 2

[refinement]
J = [500, 1000, 2000, 4000]
"#,
    },
];

/// Resolved built-in config by name.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    PRESETS.iter().find(|p| p.name == name).map(|p| {
        parse_config(p.text).expect("built-in presets are valid")
    })
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn preset_description(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|p| p.name == name).map(|p| p.description)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_parse_and_resolve() {
        for name in preset_names() {
            let cfg = preset(name).unwrap();
            assert!(!cfg.refinement.cells.is_empty(), "{name}");
            assert!(cfg.scheme.cfl.is_some(), "{name}");
            assert!(preset_description(name).is_some());
        }
    }

    #[test]
    fn table3_uses_o3_with_third_order_extrapolation() {
        let cfg = preset("table3").unwrap();
        assert_eq!(cfg.scheme.name, "o3");
        assert_eq!(cfg.boundary.k_b, 3);
        assert_eq!(cfg.boundary.truncation, Some(2));
    }

    #[test]
    fn unknown_preset_is_none() {
        assert!(preset("table4").is_none());
    }
}
