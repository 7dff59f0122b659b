//! Explicit (r, p)-stencil finite difference schemes for the 1D advection
//! equation `u_t + a u_x = 0` on bounded domains, together with the two
//! numerical boundary treatments that make high order possible:
//!
//! * inverse Lax-Wendroff ghost values at the inflow, built from the
//!   boundary datum and its time derivatives,
//! * backward-difference extrapolation ghost values at the outflow.
//!
//! The crate also carries the analysis tools that go with such schemes:
//! moment-condition consistency checks, the amplification factor on the
//! whole line, the characteristic polynomial and its classified roots,
//! discrete steady states near an outflow boundary, and the boundary-layer
//! corrector system they generate. [`solver::run`] drives a full
//! discretization against the exact solution and reports error norms for
//! convergence studies.
//!
//! The crate is `no_std` (with `alloc`); all IO, configuration and CLI
//! plumbing lives in the companion `advect-bc-lab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub use num_complex;

pub mod boundary;
pub mod oracle;
pub mod scheme;
pub mod solver;
pub mod spectral;

pub use boundary::{
    check_compatibility, fill_inflow_ghosts, fill_outflow_ghosts, ilw_alpha, BoundaryError,
    InflowFamily, InflowSpec, OutflowSpec,
};
pub use oracle::{DataOracle, OracleError, OracleParseError};
pub use scheme::{
    check_amplification, check_consistency, AmplificationReport, MomentReport, SchemeCoefficients,
    SchemeError, SchemeWarning,
};
pub use solver::{
    advected_cell_average, exact_cell_average, observed_order, observed_order_l2,
    project_initial, run, ErrorReport, Geometry, GridConfig, ProblemSpec, SolutionState,
    SolverError,
};
pub use spectral::{
    build_corrector_system, char_poly, check_root_assumption, corrector_l2_scaling,
    count_unstable, find_roots, solve_corrector, steady_state_basis, suggested_window,
    verify_steady_state, BasisSequence, CharPoly, CorrectorScaling, CorrectorSolution,
    CorrectorSystem, Root, RootRegion, RootSet, ScalingPoint, SpectralError, SteadyStateBasis,
};
