//! Cross-module convergence behavior at moderate grid sizes: the observed
//! orders and the inflow-treatment gap that motivate the whole library.

use advect_bc_core::*;

fn sine_interval(
    scheme: SchemeCoefficients,
    truncation: usize,
    kb: usize,
    cells: usize,
) -> ErrorReport {
    let grid = GridConfig::new(6.0, cells, 5.0 / 6.0, 1.0, 8.0).unwrap();
    let inflow = InflowSpec::new(
        InflowFamily::CellAverage,
        truncation,
        DataOracle::neg_sin(),
        1.0,
    )
    .unwrap();
    let spec = ProblemSpec::new(
        grid,
        scheme,
        inflow,
        OutflowSpec::new(kb),
        DataOracle::sin(),
        Geometry::Interval,
    )
    .unwrap();
    run(&spec).unwrap()
}

#[test]
fn dirichlet_inflow_caps_lax_wendroff_at_first_order() {
    // k_b = 2 alone does not help: the K = 0 inflow stays first order
    let coarse = sine_interval(SchemeCoefficients::lax_wendroff(5.0 / 6.0).unwrap(), 0, 2, 500);
    let fine = sine_interval(SchemeCoefficients::lax_wendroff(5.0 / 6.0).unwrap(), 0, 2, 1000);
    let order = observed_order(&coarse, &fine).unwrap();
    assert!((order - 1.0).abs() < 0.15, "order {order}");
}

#[test]
fn ilw_inflow_restores_second_order_and_shrinks_errors() {
    let lw = || SchemeCoefficients::lax_wendroff(5.0 / 6.0).unwrap();
    let dirichlet = sine_interval(lw(), 0, 2, 1000);
    let ilw_coarse = sine_interval(lw(), 1, 2, 500);
    let ilw_fine = sine_interval(lw(), 1, 2, 1000);
    let order = observed_order(&ilw_coarse, &ilw_fine).unwrap();
    assert!((order - 2.0).abs() < 0.15, "order {order}");
    // the one-term correction buys two orders of magnitude at J = 1000
    assert!(ilw_fine.linf_nj * 100.0 < dirichlet.linf_nj);
}

#[test]
fn upwind_is_first_order_with_either_inflow() {
    let up = || SchemeCoefficients::upwind(5.0 / 6.0).unwrap();
    let coarse = sine_interval(up(), 0, 1, 500);
    let fine = sine_interval(up(), 0, 1, 1000);
    let order = observed_order(&coarse, &fine).unwrap();
    assert!((order - 1.0).abs() < 0.15, "order {order}");
}

#[test]
fn l2_norms_track_linf_within_the_crude_bound() {
    for cells in [250usize, 500] {
        let report = sine_interval(
            SchemeCoefficients::lax_wendroff(5.0 / 6.0).unwrap(),
            1,
            2,
            cells,
        );
        assert!(report.linf_nj <= report.sup_l2 / report.dx.sqrt() * (1.0 + 1e-12));
        assert!(report.sup_l2 > 0.0);
    }
}
