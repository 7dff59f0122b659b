//! Full discretizations: grid layout, initial projection, time stepping
//! with boundary fills, exact-solution cell averages and error norms.
//!
//! Three geometries are supported. `Interval` is the bounded problem with
//! inflow ghosts on the left and extrapolation ghosts on the right. The
//! two half-line geometries realize the one-boundary problems exactly on a
//! finite grid by over-allocating on the artificial side: the domain of
//! dependence grows by at most `r` (respectively `p`) cells per step, so
//! allocating `r*N` extra cells (and shrinking the updated range every
//! step) keeps the comparison window untouched by the truncation for all
//! `N` steps.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::boundary::{
    fill_inflow_ghosts, fill_outflow_ghosts, BoundaryError, InflowSpec, OutflowSpec,
};
use crate::oracle::DataOracle;
use crate::scheme::SchemeCoefficients;

#[allow(unused_imports)] // float math in no_std builds; std shadows it
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("scheme cfl {scheme} does not match grid lambda*a = {grid}")]
    CflMismatch { scheme: f64, grid: f64 },
    #[error("inflow velocity {inflow} does not match grid velocity {grid}")]
    VelocityMismatch { inflow: f64, grid: f64 },
    #[error("grid has {cells} cells but the outflow tail needs {needed}")]
    GridTooShort { cells: usize, needed: usize },
    #[error("solution blew up at step {step}: max |u| = {magnitude:e}")]
    Unstable { step: usize, magnitude: f64 },
    #[error("refinement ratio must be 2: coarse J = {coarse}, fine J = {fine}")]
    RefinementRatio { coarse: usize, fine: usize },
    #[error("error norms must be positive and finite to estimate an order")]
    DegenerateErrorNorm,
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

/// Uniform grid on `(0, L)` with `J` cells, time step `dt = lambda * dx`
/// and final time `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub length: f64,
    pub cells: usize,
    pub lambda: f64,
    pub velocity: f64,
    pub final_time: f64,
}

impl GridConfig {
    pub fn new(
        length: f64,
        cells: usize,
        lambda: f64,
        velocity: f64,
        final_time: f64,
    ) -> Result<Self, SolverError> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(SolverError::InvalidGrid("length must be positive"));
        }
        if cells == 0 {
            return Err(SolverError::InvalidGrid("cell count must be positive"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(SolverError::InvalidGrid("lambda must be positive"));
        }
        if !(velocity > 0.0) || !velocity.is_finite() {
            return Err(SolverError::InvalidGrid("velocity must be positive"));
        }
        let grid = Self {
            length,
            cells,
            lambda,
            velocity,
            final_time,
        };
        if !(final_time > 0.0) || grid.steps() == 0 {
            return Err(SolverError::InvalidGrid(
                "final time must allow at least one step",
            ));
        }
        Ok(grid)
    }

    /// Same grid with a different cell count (refinement helper).
    pub fn with_cells(&self, cells: usize) -> Result<Self, SolverError> {
        Self::new(
            self.length,
            cells,
            self.lambda,
            self.velocity,
            self.final_time,
        )
    }

    pub fn dx(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn dt(&self) -> f64 {
        self.lambda * self.dx()
    }

    /// CFL number `lambda * a`.
    pub fn cfl(&self) -> f64 {
        self.lambda * self.velocity
    }

    /// Number of time steps, `floor(T / dt)`. Ratios within 1e-9 of an
    /// integer snap to it so that binary rounding of `dt` cannot drop an
    /// intended final step.
    pub fn steps(&self) -> usize {
        let ratio = self.final_time / self.dt();
        let rounded = ratio.round();
        if (ratio - rounded).abs() <= 1e-9 * rounded.max(1.0) {
            rounded as usize
        } else {
            ratio.floor() as usize
        }
    }

    /// Bounds `(x_{j-1}, x_j)` of cell `j`.
    pub fn cell_bounds(&self, j: i64) -> (f64, f64) {
        let dx = self.dx();
        ((j - 1) as f64 * dx, j as f64 * dx)
    }
}

/// Which boundary configuration the run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// Both boundaries: inflow ghosts left, extrapolation ghosts right.
    Interval,
    /// Inflow at the left only; the right end is over-allocated.
    HalflineInflow,
    /// Extrapolation at the right only; the left end is over-allocated.
    HalflineOutflow,
}

/// A complete discretization: grid, scheme, boundary treatments and data.
///
/// The boundary datum g lives inside `inflow`; the comparison target is
/// built from `initial` and that datum through the method of
/// characteristics.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub grid: GridConfig,
    pub scheme: SchemeCoefficients,
    pub inflow: InflowSpec,
    pub outflow: OutflowSpec,
    pub initial: DataOracle,
    pub geometry: Geometry,
}

impl ProblemSpec {
    pub fn new(
        grid: GridConfig,
        scheme: SchemeCoefficients,
        inflow: InflowSpec,
        outflow: OutflowSpec,
        initial: DataOracle,
        geometry: Geometry,
    ) -> Result<Self, SolverError> {
        let tol = 1e-14 * grid.cfl().max(1.0);
        if (scheme.cfl() - grid.cfl()).abs() > tol {
            return Err(SolverError::CflMismatch {
                scheme: scheme.cfl(),
                grid: grid.cfl(),
            });
        }
        if (inflow.velocity - grid.velocity).abs() > 1e-14 * grid.velocity.max(1.0) {
            return Err(SolverError::VelocityMismatch {
                inflow: inflow.velocity,
                grid: grid.velocity,
            });
        }
        if grid.cells < outflow.extrapolation_order {
            return Err(SolverError::GridTooShort {
                cells: grid.cells,
                needed: outflow.extrapolation_order,
            });
        }
        Ok(Self {
            grid,
            scheme,
            inflow,
            outflow,
            initial,
            geometry,
        })
    }

    /// Boundary datum g.
    pub fn boundary_datum(&self) -> &DataOracle {
        &self.inflow.datum
    }
}

/// One time level of cell values, interior plus ghost cells, with the
/// updated range bookkeeping for the half-line geometries.
#[derive(Debug, Clone)]
pub struct SolutionState {
    time_index: usize,
    /// Grid index of `values[0]`.
    base: i64,
    values: Vec<f64>,
    scratch: Vec<f64>,
    active_lo: i64,
    active_hi: i64,
}

impl SolutionState {
    /// Projects the initial data, lays out ghost allocation per geometry
    /// and fills the level-0 ghost values.
    pub fn initialize(spec: &ProblemSpec) -> Result<Self, SolverError> {
        let r = spec.scheme.left_width() as i64;
        let p = spec.scheme.right_width() as i64;
        let steps = spec.grid.steps() as i64;
        let cells = spec.grid.cells as i64;
        let (active_lo, active_hi, alloc_lo, alloc_hi) = match spec.geometry {
            Geometry::Interval => (1, cells, 1 - r, cells + p),
            Geometry::HalflineInflow => {
                let hi = cells + p * steps;
                (1, hi, 1 - r, hi)
            }
            Geometry::HalflineOutflow => {
                let lo = 1 - r * steps;
                (lo, cells, lo, cells + p)
            }
        };
        let len = (alloc_hi - alloc_lo + 1) as usize;
        let mut values = vec![0.0; len];
        let interior = project_initial(&spec.initial, &spec.grid, active_lo..=active_hi);
        let start = (active_lo - alloc_lo) as usize;
        values[start..start + interior.len()].copy_from_slice(&interior);
        let mut state = Self {
            time_index: 0,
            base: alloc_lo,
            values,
            scratch: vec![0.0; len],
            active_lo,
            active_hi,
        };
        state.fill_ghosts(spec)?;
        Ok(state)
    }

    pub fn time_index(&self) -> usize {
        self.time_index
    }

    /// Currently updated interior range (shrinks on half-line runs).
    pub fn interior_range(&self) -> RangeInclusive<i64> {
        self.active_lo..=self.active_hi
    }

    /// Value at grid index `j` (interior or ghost).
    ///
    /// Panics outside the allocated range.
    pub fn value(&self, j: i64) -> f64 {
        self.values[(j - self.base) as usize]
    }

    fn slot(&self, j: i64) -> usize {
        (j - self.base) as usize
    }

    /// Largest |u| over the currently updated interior range.
    pub fn interior_abs_max(&self) -> f64 {
        let lo = self.slot(self.active_lo);
        let hi = self.slot(self.active_hi);
        self.values[lo..=hi]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Refreshes ghost values for the current time level.
    fn fill_ghosts(&mut self, spec: &ProblemSpec) -> Result<(), SolverError> {
        let r = spec.scheme.left_width();
        let p = spec.scheme.right_width();
        let t = self.time_index as f64 * spec.grid.dt();
        let fill_left = matches!(
            spec.geometry,
            Geometry::Interval | Geometry::HalflineInflow
        );
        let fill_right = matches!(
            spec.geometry,
            Geometry::Interval | Geometry::HalflineOutflow
        );
        if fill_left && r > 0 {
            let ghosts = fill_inflow_ghosts(&spec.inflow, t, spec.grid.dx(), r)?;
            let start = self.slot(1 - r as i64);
            self.values[start..start + r].copy_from_slice(&ghosts);
        }
        if fill_right && p > 0 {
            let kb = spec.outflow.extrapolation_order;
            let top = spec.grid.cells as i64;
            let tail_start = self.slot(top - kb as i64 + 1);
            let tail_end = self.slot(top);
            let ghosts =
                fill_outflow_ghosts(&spec.outflow, &self.values[tail_start..=tail_end], p)?;
            let start = self.slot(top + 1);
            self.values[start..start + p].copy_from_slice(&ghosts);
        }
        Ok(())
    }

    /// Advances one time step: applies the interior stencil (ghosts must be
    /// current, which `initialize` and previous steps guarantee), increments
    /// the level and fills the new level's ghosts.
    pub fn step(&mut self, spec: &ProblemSpec) -> Result<(), SolverError> {
        let r = spec.scheme.left_width();
        let p = spec.scheme.right_width();
        let (new_lo, new_hi) = match spec.geometry {
            Geometry::Interval => (self.active_lo, self.active_hi),
            Geometry::HalflineInflow => (self.active_lo, self.active_hi - p as i64),
            Geometry::HalflineOutflow => (self.active_lo + r as i64, self.active_hi),
        };
        let weights = spec.scheme.weights();
        let len = weights.len();
        let start = (new_lo - self.base) as usize;
        let count = (new_hi - new_lo + 1) as usize;
        let src = &self.values[start - r..];
        for (out, window) in self.scratch[start..start + count]
            .iter_mut()
            .zip(src.windows(len))
        {
            *out = weights.iter().zip(window).map(|(a, u)| a * u).sum();
        }
        core::mem::swap(&mut self.values, &mut self.scratch);
        self.active_lo = new_lo;
        self.active_hi = new_hi;
        self.time_index += 1;
        self.fill_ghosts(spec)
    }
}

/// Cell averages of `f` over the cells in `j_range`: exact through the
/// antiderivative when the oracle provides one, else 5-point
/// Gauss-Legendre per cell (degree-9 exactness, far below scheme error).
pub fn project_initial(
    f: &DataOracle,
    grid: &GridConfig,
    j_range: RangeInclusive<i64>,
) -> Vec<f64> {
    let dx = grid.dx();
    j_range
        .map(|j| {
            let (lo, hi) = grid.cell_bounds(j);
            integral(f, lo, hi) / dx
        })
        .collect()
}

/// Cell average at time `t` of the exact solution built from `f` and `g`
/// by the method of characteristics: `f(x - a t)` for `x >= a t`,
/// `g(t - x/a)` for `x <= a t`. Cells straddling `x = a t` are split.
pub fn exact_cell_average(
    f: &DataOracle,
    g: &DataOracle,
    a: f64,
    t: f64,
    cell: (f64, f64),
) -> f64 {
    let (lo, hi) = cell;
    let split = a * t;
    let mut acc = 0.0;
    if hi > split {
        let s_lo = lo.max(split);
        acc += integral_shifted(f, s_lo, hi, a * t);
    }
    if lo < split {
        let s_hi = hi.min(split);
        // substitute s = t - x/a: integral of g(t - x/a) dx over (lo, s_hi)
        acc += a * integral(g, t - s_hi / a, t - lo / a);
    }
    acc / (hi - lo)
}

/// Cell average at time `t` of the free-stream solution `f(x - a t)`
/// (no boundary, as on the outflow half-line).
pub fn advected_cell_average(f: &DataOracle, a: f64, t: f64, cell: (f64, f64)) -> f64 {
    let (lo, hi) = cell;
    integral_shifted(f, lo, hi, a * t) / (hi - lo)
}

/// Integral of `f(x - shift)` over `(lo, hi)`.
fn integral_shifted(f: &DataOracle, lo: f64, hi: f64, shift: f64) -> f64 {
    integral(f, lo - shift, hi - shift)
}

fn integral(f: &DataOracle, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return 0.0;
    }
    match (f.antiderivative(lo), f.antiderivative(hi)) {
        (Some(fa), Some(fb)) => fb - fa,
        _ => gauss5(f, lo, hi),
    }
}

/// 5-point Gauss-Legendre nodes and weights on (-1, 1).
const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

fn gauss5(f: &DataOracle, lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for (node, weight) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
        acc += weight * f.value(mid + half * node);
    }
    acc * half
}

/// Error norms of one run: max over kept levels and window cells, and the
/// sup over levels of the dx-weighted spatial l2 norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub linf_nj: f64,
    pub sup_l2: f64,
    pub per_step_linf: Vec<f64>,
    pub per_step_l2: Vec<f64>,
    pub cells: usize,
    pub dx: f64,
}

/// Runs the discretization for `floor(T/dt)` steps, comparing the window
/// cells against exact cell averages at every level.
///
/// Aborts with an instability diagnostic when `max |u|` exceeds 1e6 times
/// the initial maximum (or stops being finite).
pub fn run(spec: &ProblemSpec) -> Result<ErrorReport, SolverError> {
    let steps = spec.grid.steps();
    let dt = spec.grid.dt();
    let dx = spec.grid.dx();
    let a = spec.grid.velocity;
    let mut state = SolutionState::initialize(spec)?;
    let initial_max = state.interior_abs_max();
    if !initial_max.is_finite() {
        return Err(SolverError::Unstable {
            step: 0,
            magnitude: initial_max,
        });
    }
    let threshold = 1e6 * initial_max;
    let window = 1..=spec.grid.cells as i64;
    let f = &spec.initial;
    let g = spec.boundary_datum();
    let mut per_step_linf = Vec::with_capacity(steps + 1);
    let mut per_step_l2 = Vec::with_capacity(steps + 1);
    for n in 0..=steps {
        let t = n as f64 * dt;
        let mut linf = 0.0f64;
        let mut sq = 0.0f64;
        for j in window.clone() {
            let cell = spec.grid.cell_bounds(j);
            let exact = match spec.geometry {
                Geometry::HalflineOutflow => advected_cell_average(f, a, t, cell),
                _ => exact_cell_average(f, g, a, t, cell),
            };
            let err = (state.value(j) - exact).abs();
            linf = linf.max(err);
            sq += err * err;
        }
        per_step_linf.push(linf);
        per_step_l2.push((dx * sq).sqrt());
        if n < steps {
            state.step(spec)?;
            let magnitude = state.interior_abs_max();
            if !magnitude.is_finite() || magnitude > threshold {
                return Err(SolverError::Unstable {
                    step: state.time_index(),
                    magnitude,
                });
            }
        }
    }
    let linf_nj = per_step_linf.iter().copied().fold(0.0f64, f64::max);
    let sup_l2 = per_step_l2.iter().copied().fold(0.0f64, f64::max);
    Ok(ErrorReport {
        linf_nj,
        sup_l2,
        per_step_linf,
        per_step_l2,
        cells: spec.grid.cells,
        dx,
    })
}

/// Observed convergence order between two runs at J and 2J from the
/// max-norm errors: `log2(coarse / fine)`.
pub fn observed_order(coarse: &ErrorReport, fine: &ErrorReport) -> Result<f64, SolverError> {
    order_from(coarse.cells, fine.cells, coarse.linf_nj, fine.linf_nj)
}

/// Same estimator on the sup-in-time l2 norms.
pub fn observed_order_l2(coarse: &ErrorReport, fine: &ErrorReport) -> Result<f64, SolverError> {
    order_from(coarse.cells, fine.cells, coarse.sup_l2, fine.sup_l2)
}

fn order_from(
    coarse_cells: usize,
    fine_cells: usize,
    coarse_err: f64,
    fine_err: f64,
) -> Result<f64, SolverError> {
    if fine_cells != 2 * coarse_cells {
        return Err(SolverError::RefinementRatio {
            coarse: coarse_cells,
            fine: fine_cells,
        });
    }
    if !(coarse_err > 0.0) || !(fine_err > 0.0) || !coarse_err.is_finite() || !fine_err.is_finite()
    {
        return Err(SolverError::DegenerateErrorNorm);
    }
    Ok((coarse_err / fine_err).log2())
}
