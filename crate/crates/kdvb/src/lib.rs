//! Solver library for initial-boundary-value problems of the
//! Korteweg-de Vries-Burgers equation
//!
//! ```text
//! u_t + eps u u_x - theta u_xx + mu u_xxx = 0,    x in [a, b]
//! ```
//!
//! Space is discretized by collocation with extended cubic B-splines after
//! reducing the third-order term through the substitution `v = u_x`; time is
//! advanced by the Crank-Nicolson rule with a linearized product term. Each
//! step solves one small banded system.
//!
//! The crate ships two ready-made experiments: a traveling wavefront with a
//! closed-form solution for accuracy studies, and a wide pulse that splits
//! into a train of solitary waves for conservation studies. A narrative guide
//! with runnable examples lives in `book/`; its code blocks are compiled and
//! executed as doc-tests of this crate.
//!
//! # Quick start
//!
//! ```
//! use kdvb::prelude::*;
//!
//! let scenario = make_example1(0.004);
//! let basis = BasisConfig::new(0.0, scenario.grid.h()).unwrap();
//! let state = fit_initial(
//!     &scenario.grid,
//!     &basis,
//!     scenario.initial.as_ref(),
//!     scenario.initial_derivative.as_ref(),
//! )
//! .unwrap();
//! let stepper = Stepper::new(scenario.params, &basis, &scenario.closure);
//! let next = stepper.step(&state).unwrap();
//! assert!((next.t() - 0.001).abs() < 1e-12);
//! ```

pub mod basis;
pub mod cli;
pub mod diagnostics;
pub mod discretization;
pub mod error;
pub mod linalg;
pub mod scenarios;
pub mod stepper;

pub use error::{Error, Result};

/// Convenient single-import surface for the library.
pub mod prelude {
    pub use crate::basis::{BasisConfig, MidpointTable, NodalTable};
    pub use crate::diagnostics::{conserved_quantities, find_peaks, linf_error, ConservedQuantities, Peak};
    pub use crate::discretization::{eval_at, fit_initial, nodal_values, Grid, NodalValues, SolutionState};
    pub use crate::error::{Error, Result};
    pub use crate::linalg::BandedMatrix;
    pub use crate::scenarios::{
        exact_traveling_wave, make_example1, make_example2, pulse_initial, Scenario,
    };
    pub use crate::stepper::{BoundaryClosure, PhysicalParams, StepCoefficients, Stepper};
}

#[cfg(doctest)]
mod book;
