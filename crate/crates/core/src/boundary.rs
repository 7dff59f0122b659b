//! Ghost cell values at both ends of the domain.
//!
//! At the inflow (the velocity is positive, so the left end) ghost values
//! come from the inverse Lax-Wendroff procedure: a truncated Taylor
//! expansion of the boundary datum in which spatial derivatives have been
//! traded for time derivatives through the advection equation. Two
//! coefficient families are supported, one matching point values at cell
//! centers and one matching cell averages.
//!
//! At the outflow the ghost values are polynomial extrapolation of order
//! `k_b`: the `k_b`-th backward difference is forced to vanish at every
//! ghost index.

use alloc::vec;
use alloc::vec::Vec;

use crate::oracle::{DataOracle, OracleError};

#[allow(unused_imports)] // float math in no_std builds; std shadows it
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("outflow extrapolation of order {needed} needs {needed} interior values, got {got}")]
    InsufficientTail { needed: usize, got: usize },
    #[error("inflow velocity must be positive, got {0}")]
    VelocityNotPositive(f64),
    #[error("truncation order {truncation} exceeds the datum's derivative cap {max}")]
    TruncationTooHigh { truncation: usize, max: usize },
}

/// Which Taylor coefficient family the inflow fill uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InflowFamily {
    /// Ghost values match cell averages of the expansion (the choice that
    /// pairs with cell-average error measurement).
    CellAverage,
    /// Ghost values match point values at cell centers.
    CellCenter,
}

/// Inflow boundary treatment: datum, coefficient family and the number of
/// Taylor terms kept (`truncation` = K keeps orders 0..=K).
#[derive(Debug, Clone, PartialEq)]
pub struct InflowSpec {
    pub family: InflowFamily,
    pub truncation: usize,
    pub datum: DataOracle,
    pub velocity: f64,
}

impl InflowSpec {
    pub fn new(
        family: InflowFamily,
        truncation: usize,
        datum: DataOracle,
        velocity: f64,
    ) -> Result<Self, BoundaryError> {
        if !(velocity > 0.0) {
            return Err(BoundaryError::VelocityNotPositive(velocity));
        }
        if let Some(max) = datum.max_derivative_order() {
            if truncation > max {
                return Err(BoundaryError::TruncationTooHigh {
                    truncation,
                    max,
                });
            }
        }
        Ok(Self {
            family,
            truncation,
            datum,
            velocity,
        })
    }
}

/// Outflow boundary treatment: extrapolation order `k_b`.
///
/// `k_b = 0` is read literally: the vanishing zeroth difference makes all
/// ghost values zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutflowSpec {
    pub extrapolation_order: usize,
}

impl OutflowSpec {
    pub fn new(extrapolation_order: usize) -> Self {
        Self {
            extrapolation_order,
        }
    }
}

/// Taylor coefficient `alpha_{kappa,ell}` of the inflow fill.
///
/// Cell-average family: `(-1)^kappa / (kappa+1) * (ell^{kappa+1} - (ell-1)^{kappa+1})`.
/// Cell-center family: `(1/2 - ell)^kappa`.
pub fn ilw_alpha(family: InflowFamily, kappa: usize, ell: i64) -> f64 {
    match family {
        InflowFamily::CellAverage => {
            let k1 = (kappa + 1) as i32;
            let sign = if kappa % 2 == 0 { 1.0 } else { -1.0 };
            sign / (kappa as f64 + 1.0)
                * ((ell as f64).powi(k1) - ((ell - 1) as f64).powi(k1))
        }
        InflowFamily::CellCenter => (0.5 - ell as f64).powi(kappa as i32),
    }
}

/// Inflow ghost values `u_{1-r}..u_0` at time `t`:
/// `u_ell = sum_{kappa=0..=K} dx^kappa / (kappa! a^kappa) * alpha_{kappa,ell} * g^(kappa)(t)`.
pub fn fill_inflow_ghosts(
    spec: &InflowSpec,
    t: f64,
    dx: f64,
    left_width: usize,
) -> Result<Vec<f64>, BoundaryError> {
    let mut out = Vec::with_capacity(left_width);
    for ell in (1 - left_width as i64)..=0 {
        let mut acc = 0.0;
        let mut factor = 1.0; // dx^kappa / (kappa! a^kappa)
        for kappa in 0..=spec.truncation {
            if kappa > 0 {
                factor *= dx / (kappa as f64 * spec.velocity);
            }
            acc += factor * ilw_alpha(spec.family, kappa, ell) * spec.datum.derivative(kappa, t)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Outflow ghost values `u_{J+1}..u_{J+p}` extrapolated from the last
/// `k_b` interior values (ordered oldest first, i.e. `u_{J-k_b+1}..u_J`).
///
/// Ghosts are computed sequentially so that the `k_b`-th backward
/// difference vanishes exactly at each ghost index.
pub fn fill_outflow_ghosts(
    spec: &OutflowSpec,
    interior_tail: &[f64],
    right_width: usize,
) -> Result<Vec<f64>, BoundaryError> {
    let kb = spec.extrapolation_order;
    if kb == 0 {
        return Ok(vec![0.0; right_width]);
    }
    if interior_tail.len() < kb {
        return Err(BoundaryError::InsufficientTail {
            needed: kb,
            got: interior_tail.len(),
        });
    }
    // u_{J+l} = sum_{m=1..=kb} (-1)^{m+1} C(kb, m) u_{J+l-m}
    let coeffs = binomial_row(kb);
    let mut window: Vec<f64> = interior_tail[interior_tail.len() - kb..].to_vec();
    let mut out = Vec::with_capacity(right_width);
    for _ in 0..right_width {
        let mut v = 0.0;
        for m in 1..=kb {
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            v += sign * coeffs[m] * window[kb - m];
        }
        out.push(v);
        window.rotate_left(1);
        window[kb - 1] = v;
    }
    Ok(out)
}

/// Binomial coefficients `C(n, 0..=n)` as floats.
fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for m in 1..=n {
        let next = row[m - 1] * (n - m + 1) as f64 / m as f64;
        row.push(next);
    }
    row
}

/// Highest order m in `0..=max_order` with
/// `f^(m)(0) = (-a)^{-m} g^(m)(0)` within the absolute tolerance, or
/// `None` when already the m = 0 condition fails.
///
/// These are the corner conditions at t = x = 0 under which the exact
/// solution stays smooth across the characteristic through the origin.
pub fn check_compatibility(
    f: &DataOracle,
    g: &DataOracle,
    a: f64,
    max_order: usize,
    tol: f64,
) -> Result<Option<usize>, BoundaryError> {
    let mut highest = None;
    for m in 0..=max_order {
        let lhs = f.derivative(m, 0.0)?;
        let rhs = g.derivative(m, 0.0)? / (-a).powi(m as i32);
        if (lhs - rhs).abs() > tol {
            break;
        }
        highest = Some(m);
    }
    Ok(highest)
}
