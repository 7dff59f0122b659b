//! Stencil coefficient sets for explicit one-step advection schemes.
//!
//! A scheme advances cell values through `u_j^{n+1} = sum_l a_l u_{j+l}^n`
//! with offsets `l = -r..p`. The builders here cover the upwind,
//! Lax-Wendroff and third-order O3 stencils, all parametrized by the CFL
//! number (the product of the grid ratio and the velocity). Consistency is
//! checked through the moment conditions `sum_l l^m a_l = (-cfl)^m` and
//! whole-line stability through the amplification factor
//! `gamma(theta) = sum_l a_l e^{i l theta}`.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // float math in no_std builds; std shadows it
use num_traits::Float;

/// Errors from scheme construction and stencil application.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchemeError {
    #[error("cfl number must be positive, got {0}")]
    CflNotPositive(f64),
    #[error("expected {expected} stencil weights for widths ({left},{right}), got {actual}")]
    WeightCount {
        left: usize,
        right: usize,
        expected: usize,
        actual: usize,
    },
    #[error("stencil window must hold {expected} values, got {actual}")]
    WindowLength { expected: usize, actual: usize },
}

/// Machine-readable flags raised by the builders for parameter choices that
/// are representable but outside the nominal regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeWarning {
    /// The CFL number exceeds one; the whole-line stability bound fails.
    CflAboveOne,
    /// An endpoint weight vanishes, so the declared widths overstate the
    /// true stencil support (happens at cfl = 1).
    ZeroEdgeWeight,
}

/// Weights `a_{-r}..a_p` of an explicit one-step scheme, with the CFL
/// number they were built from and the consistency order the construction
/// claims.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeCoefficients {
    name: String,
    left_width: usize,
    right_width: usize,
    weights: Vec<f64>,
    cfl: f64,
    claimed_order: usize,
    warnings: Vec<SchemeWarning>,
}

impl SchemeCoefficients {
    /// Assembles a scheme from raw weights, ordered from offset `-r` to `p`.
    pub fn new(
        name: &str,
        left_width: usize,
        right_width: usize,
        weights: Vec<f64>,
        cfl: f64,
        claimed_order: usize,
    ) -> Result<Self, SchemeError> {
        if !(cfl > 0.0) {
            return Err(SchemeError::CflNotPositive(cfl));
        }
        let expected = left_width + right_width + 1;
        if weights.len() != expected {
            return Err(SchemeError::WeightCount {
                left: left_width,
                right: right_width,
                expected,
                actual: weights.len(),
            });
        }
        let mut warnings = Vec::new();
        if cfl > 1.0 {
            warnings.push(SchemeWarning::CflAboveOne);
        }
        let edge_zero = weights.first().is_some_and(|a| *a == 0.0)
            || weights.last().is_some_and(|a| *a == 0.0);
        if edge_zero {
            warnings.push(SchemeWarning::ZeroEdgeWeight);
        }
        Ok(Self {
            name: String::from(name),
            left_width,
            right_width,
            weights,
            cfl,
            claimed_order,
            warnings,
        })
    }

    /// Lax-Wendroff: r = p = 1, second order.
    ///
    /// Weights `(c(1+c)/2, 1-c^2, -c(1-c)/2)` for `c` the CFL number.
    pub fn lax_wendroff(cfl: f64) -> Result<Self, SchemeError> {
        if !(cfl > 0.0) {
            return Err(SchemeError::CflNotPositive(cfl));
        }
        let c = cfl;
        let weights = alloc::vec![
            c * (1.0 + c) / 2.0,
            1.0 - c * c,
            -c * (1.0 - c) / 2.0,
        ];
        Self::new("lax_wendroff", 1, 1, weights, cfl, 2)
    }

    /// O3: the third-order convex combination of Lax-Wendroff and
    /// Beam-Warming, r = 2, p = 1.
    pub fn o3(cfl: f64) -> Result<Self, SchemeError> {
        if !(cfl > 0.0) {
            return Err(SchemeError::CflNotPositive(cfl));
        }
        let c = cfl;
        let weights = alloc::vec![
            -c / 6.0 * (1.0 - c * c),
            c / 2.0 * (1.0 + c) * (2.0 - c),
            (1.0 - c * c) * (2.0 - c) / 2.0,
            -c / 6.0 * (1.0 - c) * (2.0 - c),
        ];
        Self::new("o3", 2, 1, weights, cfl, 3)
    }

    /// First-order upwind: r = 1, p = 0, weights `(c, 1-c)`.
    pub fn upwind(cfl: f64) -> Result<Self, SchemeError> {
        if !(cfl > 0.0) {
            return Err(SchemeError::CflNotPositive(cfl));
        }
        let weights = alloc::vec![cfl, 1.0 - cfl];
        Self::new("upwind", 1, 0, weights, cfl, 1)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Left stencil width r (number of inflow ghost cells needed).
    pub fn left_width(&self) -> usize {
        self.left_width
    }

    /// Right stencil width p (number of outflow ghost cells needed).
    pub fn right_width(&self) -> usize {
        self.right_width
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    pub fn claimed_order(&self) -> usize {
        self.claimed_order
    }

    /// Weights ordered from offset `-r` to `p`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight at a signed stencil offset in `-r..=p`.
    ///
    /// Panics when the offset lies outside the stencil.
    pub fn weight(&self, offset: i64) -> f64 {
        self.weights[(offset + self.left_width as i64) as usize]
    }

    pub fn warnings(&self) -> &[SchemeWarning] {
        &self.warnings
    }

    pub fn has_warning(&self, warning: SchemeWarning) -> bool {
        self.warnings.contains(&warning)
    }

    /// One interior update: `sum_l a_l window[l]` for a window ordered from
    /// index j-r to j+p.
    pub fn apply_interior(&self, window: &[f64]) -> Result<f64, SchemeError> {
        if window.len() != self.weights.len() {
            return Err(SchemeError::WindowLength {
                expected: self.weights.len(),
                actual: window.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(window)
            .map(|(a, u)| a * u)
            .sum())
    }

    /// Modulus of the amplification factor `gamma(theta)`.
    pub fn amplification_at(&self, theta: f64) -> f64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (q, a) in self.weights.iter().enumerate() {
            let arg = (q as i64 - self.left_width as i64) as f64 * theta;
            z += a * Complex64::new(arg.cos(), arg.sin());
        }
        z.norm()
    }
}

/// Residuals of the moment conditions `|sum_l l^m a_l - (-cfl)^m|` for
/// m = 0..max, and the largest order they certify.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub orders_checked: Vec<usize>,
    pub residuals: Vec<f64>,
    /// Largest m such that every residual up to m stays below the
    /// tolerance; `None` when already the m = 0 condition fails.
    pub achieved_order: Option<usize>,
}

/// Evaluates the moment conditions up to `max_order` with an absolute
/// tolerance on each residual.
pub fn check_consistency(
    scheme: &SchemeCoefficients,
    max_order: usize,
    tol: f64,
) -> MomentReport {
    let r = scheme.left_width() as i64;
    let mut orders_checked = Vec::with_capacity(max_order + 1);
    let mut residuals = Vec::with_capacity(max_order + 1);
    for m in 0..=max_order {
        let lhs: f64 = scheme
            .weights()
            .iter()
            .enumerate()
            .map(|(q, a)| ((q as i64 - r) as f64).powi(m as i32) * a)
            .sum();
        let target = (-scheme.cfl()).powi(m as i32);
        orders_checked.push(m);
        residuals.push((lhs - target).abs());
    }
    let mut achieved_order = None;
    for (m, res) in residuals.iter().enumerate() {
        if *res <= tol {
            achieved_order = Some(m);
        } else {
            break;
        }
    }
    MomentReport {
        orders_checked,
        residuals,
        achieved_order,
    }
}

/// Estimated supremum of the amplification factor over the dual circle.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplificationReport {
    pub sup_modulus: f64,
    /// Angle in [0, 2pi) where the supremum was located.
    pub argmax_theta: f64,
    /// Whether `sup |gamma| <= 1 + tol`.
    pub satisfied: bool,
}

/// Estimates `sup_theta |gamma(theta)|` by dense sampling followed by
/// golden-section refinement around the sampled maximum.
///
/// `samples` must be at least 64; gamma is a trigonometric polynomial of
/// degree r + p, so a few thousand samples rule out aliasing entirely.
pub fn check_amplification(
    scheme: &SchemeCoefficients,
    samples: usize,
    tol: f64,
) -> AmplificationReport {
    assert!(samples >= 64, "need at least 64 theta samples");
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut best_theta = 0.0;
    let mut best = scheme.amplification_at(0.0);
    for k in 1..samples {
        let theta = two_pi * k as f64 / samples as f64;
        let v = scheme.amplification_at(theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    let half = two_pi / samples as f64;
    let (theta_ref, val_ref) = golden_max(
        |t| scheme.amplification_at(t),
        best_theta - half,
        best_theta + half,
    );
    if val_ref > best {
        best = val_ref;
        best_theta = theta_ref % two_pi;
        if best_theta < 0.0 {
            best_theta += two_pi;
        }
    }
    AmplificationReport {
        sup_modulus: best,
        argmax_theta: best_theta,
        satisfied: best <= 1.0 + tol,
    }
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..90 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFL: f64 = 5.0 / 6.0;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn lax_wendroff_weights_at_five_sixths() {
        let s = SchemeCoefficients::lax_wendroff(CFL).unwrap();
        assert_eq!(s.left_width(), 1);
        assert_eq!(s.right_width(), 1);
        assert_eq!(s.claimed_order(), 2);
        assert!(close(s.weight(-1), 55.0 / 72.0, 1e-15));
        assert!(close(s.weight(0), 11.0 / 36.0, 1e-15));
        assert!(close(s.weight(1), -5.0 / 72.0, 1e-15));
        let sum: f64 = s.weights().iter().sum();
        assert!(close(sum, 1.0, 1e-14));
        assert!(s.warnings().is_empty());
    }

    #[test]
    fn lax_wendroff_unit_cfl_is_shift() {
        let s = SchemeCoefficients::lax_wendroff(1.0).unwrap();
        assert_eq!(s.weights(), &[1.0, 0.0, 0.0]);
        assert!(s.has_warning(SchemeWarning::ZeroEdgeWeight));
        assert!(!s.has_warning(SchemeWarning::CflAboveOne));
    }

    #[test]
    fn o3_weights_at_five_sixths() {
        let s = SchemeCoefficients::o3(CFL).unwrap();
        assert_eq!((s.left_width(), s.right_width()), (2, 1));
        assert_eq!(s.claimed_order(), 3);
        assert!(close(s.weight(-2), -55.0 / 1296.0, 1e-15));
        assert!(close(s.weight(-1), 385.0 / 432.0, 1e-15));
        assert!(close(s.weight(0), 77.0 / 432.0, 1e-15));
        assert!(close(s.weight(1), -35.0 / 1296.0, 1e-15));
        let sum: f64 = s.weights().iter().sum();
        assert!(close(sum, 1.0, 1e-14));
    }

    #[test]
    fn o3_unit_cfl_degenerates() {
        let s = SchemeCoefficients::o3(1.0).unwrap();
        assert_eq!(s.weight(-2), 0.0);
        assert_eq!(s.weight(1), 0.0);
        assert!(s.has_warning(SchemeWarning::ZeroEdgeWeight));
    }

    #[test]
    fn upwind_weights() {
        let s = SchemeCoefficients::upwind(CFL).unwrap();
        assert_eq!((s.left_width(), s.right_width()), (1, 0));
        assert!(close(s.weight(-1), CFL, 1e-15));
        assert!(close(s.weight(0), 1.0 - CFL, 1e-15));
        let shift = SchemeCoefficients::upwind(1.0).unwrap();
        assert_eq!(shift.weights(), &[1.0, 0.0]);
    }

    #[test]
    fn builders_reject_nonpositive_cfl() {
        assert!(matches!(
            SchemeCoefficients::lax_wendroff(0.0),
            Err(SchemeError::CflNotPositive(_))
        ));
        assert!(matches!(
            SchemeCoefficients::o3(-0.5),
            Err(SchemeError::CflNotPositive(_))
        ));
        assert!(matches!(
            SchemeCoefficients::upwind(f64::NAN),
            Err(SchemeError::CflNotPositive(_))
        ));
    }

    #[test]
    fn builders_warn_above_one() {
        let s = SchemeCoefficients::lax_wendroff(1.1).unwrap();
        assert!(s.has_warning(SchemeWarning::CflAboveOne));
    }

    #[test]
    fn consistency_orders_match_claims() {
        let lw = SchemeCoefficients::lax_wendroff(CFL).unwrap();
        assert_eq!(check_consistency(&lw, 4, 1e-12).achieved_order, Some(2));
        let o3 = SchemeCoefficients::o3(CFL).unwrap();
        assert_eq!(check_consistency(&o3, 5, 1e-12).achieved_order, Some(3));
        let up = SchemeCoefficients::upwind(0.5).unwrap();
        let rep = check_consistency(&up, 3, 1e-12);
        assert_eq!(rep.achieved_order, Some(1));
        // second moment fails by exactly |0.5 - 0.25|
        assert!(close(rep.residuals[2], 0.25, 1e-14));
    }

    #[test]
    fn lax_wendroff_third_moment_residual() {
        // sum l^3 a_l = -5/6 while (-cfl)^3 = -125/216, residual 55/216
        let lw = SchemeCoefficients::lax_wendroff(CFL).unwrap();
        let rep = check_consistency(&lw, 3, 1e-12);
        assert!(close(rep.residuals[3], 55.0 / 216.0, 1e-13));
    }

    #[test]
    fn claimed_order_achieved_across_cfl_grid() {
        for k in 1..=9 {
            let cfl = k as f64 / 10.0;
            for s in [
                SchemeCoefficients::lax_wendroff(cfl).unwrap(),
                SchemeCoefficients::o3(cfl).unwrap(),
                SchemeCoefficients::upwind(cfl).unwrap(),
            ] {
                let rep = check_consistency(&s, s.claimed_order() + 1, 1e-12);
                assert_eq!(
                    rep.achieved_order,
                    Some(s.claimed_order()),
                    "scheme {} at cfl {}",
                    s.name(),
                    cfl
                );
                let sum: f64 = s.weights().iter().sum();
                assert!(close(sum, 1.0, 1e-14));
            }
        }
    }

    #[test]
    fn amplification_lax_wendroff_stable_at_five_sixths() {
        let s = SchemeCoefficients::lax_wendroff(CFL).unwrap();
        let rep = check_amplification(&s, 10_000, 1e-12);
        assert!(rep.satisfied);
        assert!(close(rep.sup_modulus, 1.0, 1e-12));
        // |gamma|^2 = 1 - 4 c^2 (1 - c^2) sin^4(theta/2) peaks at theta = 0
        assert!(rep.argmax_theta < 1e-3 || rep.argmax_theta > 2.0 * core::f64::consts::PI - 1e-3);
    }

    #[test]
    fn amplification_unit_cfl_is_unimodular() {
        let s = SchemeCoefficients::lax_wendroff(1.0).unwrap();
        for k in 0..50 {
            let theta = 2.0 * core::f64::consts::PI * k as f64 / 50.0;
            assert!(close(s.amplification_at(theta), 1.0, 1e-14));
        }
        let rep = check_amplification(&s, 10_000, 1e-12);
        assert!(rep.satisfied);
    }

    #[test]
    fn amplification_above_one_detected() {
        // |gamma(pi)| = sqrt(1 + 4 * 1.21 * 0.21) = sqrt(2.0164) = 1.42
        let s = SchemeCoefficients::lax_wendroff(1.1).unwrap();
        let rep = check_amplification(&s, 10_000, 1e-12);
        assert!(!rep.satisfied);
        assert!(close(rep.sup_modulus, 1.42, 1e-9));
        assert!(close(rep.argmax_theta, core::f64::consts::PI, 1e-6));
    }

    #[test]
    fn amplification_at_zero_equals_weight_sum() {
        for s in [
            SchemeCoefficients::lax_wendroff(CFL).unwrap(),
            SchemeCoefficients::o3(0.4).unwrap(),
            SchemeCoefficients::upwind(0.7).unwrap(),
        ] {
            let sum: f64 = s.weights().iter().sum();
            assert!(close(s.amplification_at(0.0), sum, 4.0 * f64::EPSILON));
        }
    }

    #[test]
    fn apply_interior_constant_window() {
        let s = SchemeCoefficients::o3(CFL).unwrap();
        let out = s.apply_interior(&[3.5; 4]).unwrap();
        assert!(close(out, 3.5, 1e-14));
    }

    #[test]
    fn apply_interior_rejects_bad_window() {
        let s = SchemeCoefficients::lax_wendroff(CFL).unwrap();
        assert!(matches!(
            s.apply_interior(&[1.0, 2.0]),
            Err(SchemeError::WindowLength {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn apply_interior_polynomial_exactness() {
        // Brute-force oracle: the moment conditions are equivalent, by
        // binomial expansion, to reproducing q(j - cfl) from samples of
        // q(x) = x^m on the stencil abscissae, for every m <= k.
        for s in [
            SchemeCoefficients::lax_wendroff(CFL).unwrap(),
            SchemeCoefficients::o3(CFL).unwrap(),
            SchemeCoefficients::upwind(CFL).unwrap(),
        ] {
            let r = s.left_width() as i64;
            let p = s.right_width() as i64;
            for m in 0..=s.claimed_order() as i32 {
                for j in -5..=5i64 {
                    let window: alloc::vec::Vec<f64> = (j - r..=j + p)
                        .map(|q| (q as f64).powi(m))
                        .collect();
                    let got = s.apply_interior(&window).unwrap();
                    let want = (j as f64 - s.cfl()).powi(m);
                    let scale = 1.0 + want.abs();
                    assert!(
                        (got - want).abs() <= 1e-10 * scale,
                        "{} m={} j={} got={} want={}",
                        s.name(),
                        m,
                        j,
                        got,
                        want
                    );
                }
            }
        }
    }

    #[test]
    fn apply_interior_fixes_characteristic_root_powers() {
        // kappa = -11 solves A(kappa) = 0 for Lax-Wendroff at cfl 5/6, so
        // the stencil fixes the geometric window (kappa^-1, 1, kappa).
        let s = SchemeCoefficients::lax_wendroff(CFL).unwrap();
        let out = s.apply_interior(&[-1.0 / 11.0, 1.0, -11.0]).unwrap();
        assert!(close(out, 1.0, 1e-13));
    }

    proptest::proptest! {
        #[test]
        fn apply_interior_is_linear(
            w1 in proptest::collection::vec(-10.0f64..10.0, 4),
            w2 in proptest::collection::vec(-10.0f64..10.0, 4),
            alpha in -5.0f64..5.0,
            beta in -5.0f64..5.0,
        ) {
            let s = SchemeCoefficients::o3(CFL).unwrap();
            let combined: alloc::vec::Vec<f64> = w1
                .iter()
                .zip(&w2)
                .map(|(a, b)| alpha * a + beta * b)
                .collect();
            let lhs = s.apply_interior(&combined).unwrap();
            let rhs = alpha * s.apply_interior(&w1).unwrap()
                + beta * s.apply_interior(&w2).unwrap();
            proptest::prop_assert!((lhs - rhs).abs() <= 1e-11);
        }
    }
}
