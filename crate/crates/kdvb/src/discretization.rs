//! Uniform grid, solution state, nodal evaluation and initial-condition fit.
//!
//! The solution pair `(U, V)` with `V = U_x` is carried as two coefficient
//! vectors `delta` and `phi` over the spline basis `E_{-1} .. E_{N+1}`; the
//! two phantom parameters on each side extend the storage to `N + 3` entries.
//! Index convention throughout: parameter `i` (`-1 <= i <= N+1`) lives at
//! slice position `i + 1`.

use crate::basis::{BasisConfig, NodalTable};
use crate::error::{Error, Result};
use crate::linalg::BandedMatrix;

/// Uniform grid `a = x_0 < x_1 < ... < x_N = b` with spacing `h = (b-a)/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n_cells: usize,
    h: f64,
}

impl Grid {
    /// Requires `a < b` (finite) and at least 4 cells.
    pub fn new(a: f64, b: f64, n_cells: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInterval { a, b });
        }
        if n_cells < 4 {
            return Err(Error::TooFewCells(n_cells));
        }
        Ok(Self {
            a,
            b,
            n_cells,
            h: (b - a) / n_cells as f64,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node `x_i = a + i h`.
    pub fn node(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h
    }

    /// All `N + 1` nodes.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n_cells).map(|i| self.node(i)).collect()
    }
}

/// Spline coefficients of `U` and `V` at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionState {
    delta: Vec<f64>,
    phi: Vec<f64>,
    t: f64,
}

impl SolutionState {
    /// Both vectors must have length `N + 3` for a common `N`, and `t >= 0`.
    pub fn new(delta: Vec<f64>, phi: Vec<f64>, t: f64) -> Result<Self> {
        if delta.len() != phi.len() || delta.len() < 7 {
            return Err(Error::DimensionMismatch {
                expected: delta.len(),
                actual: phi.len(),
            });
        }
        Ok(Self { delta, phi, t })
    }

    /// Coefficients of `U`, positions `0..N+3` holding parameters `-1..=N+1`.
    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    /// Coefficients of `V`, laid out like [`Self::delta`].
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Number of grid cells `N` implied by the storage length.
    pub fn n_cells(&self) -> usize {
        self.delta.len() - 3
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut [f64], &mut [f64], &mut f64) {
        (&mut self.delta, &mut self.phi, &mut self.t)
    }
}

/// Values of the two approximations and their derivatives at all nodes.
#[derive(Debug, Clone)]
pub struct NodalValues {
    pub u: Vec<f64>,
    pub ux: Vec<f64>,
    pub uxx: Vec<f64>,
    pub v: Vec<f64>,
    pub vx: Vec<f64>,
    pub vxx: Vec<f64>,
}

/// Evaluates the three-term nodal formulas at every node `i = 0..=N`.
pub fn nodal_values(state: &SolutionState, table: &NodalTable) -> NodalValues {
    let n = state.n_cells();
    let three_term = |c: &[f64], w1: f64, w2: f64| -> Vec<f64> {
        (0..=n).map(|i| w1 * c[i] + w2 * c[i + 1] + w1 * c[i + 2]).collect()
    };
    let diff = |c: &[f64]| -> Vec<f64> {
        (0..=n).map(|i| table.beta1 * (c[i] - c[i + 2])).collect()
    };
    NodalValues {
        u: three_term(&state.delta, table.alpha1, table.alpha2),
        ux: diff(&state.delta),
        uxx: three_term(&state.delta, table.gamma1, table.gamma2),
        v: three_term(&state.phi, table.alpha1, table.alpha2),
        vx: diff(&state.phi),
        vxx: three_term(&state.phi, table.gamma1, table.gamma2),
    }
}

/// Evaluates `(U, V)` at an arbitrary point of `[a, b]` by summing the (at
/// most four) basis functions whose support contains `x`.
pub fn eval_at(state: &SolutionState, cfg: &BasisConfig, grid: &Grid, x: f64) -> Result<(f64, f64)> {
    if !(x >= grid.a() && x <= grid.b()) {
        return Err(Error::OutOfDomain {
            x,
            a: grid.a(),
            b: grid.b(),
        });
    }
    let n = grid.n_cells() as i64;
    let cell = (((x - grid.a()) / grid.h()).floor() as i64).clamp(0, n - 1);
    let mut u = 0.0;
    let mut v = 0.0;
    for i in cell - 1..=cell + 2 {
        let e = cfg.eval(i, x, grid.a());
        let k = (i + 1) as usize;
        u += state.delta[k] * e;
        v += state.phi[k] * e;
    }
    Ok((u, v))
}

/// Determines the initial coefficient vectors from `f` and `f'`.
///
/// `delta` solves nodal interpolation of `f` closed by `U_xx = 0` at both
/// ends; `phi` solves nodal interpolation of `f'` closed by `V_x = 0` at both
/// ends. Both systems are banded with two off-diagonals.
pub fn fit_initial(
    grid: &Grid,
    cfg: &BasisConfig,
    f: impl Fn(f64) -> f64,
    f_prime: impl Fn(f64) -> f64,
) -> Result<SolutionState> {
    let n = grid.n_cells();
    let table = cfg.nodal_table();
    let dim = n + 3;

    let mut d_sys = BandedMatrix::zero(dim, 2, 2)?;
    let mut d_rhs = vec![0.0; dim];
    d_sys.set(0, 0, table.gamma1);
    d_sys.set(0, 1, table.gamma2);
    d_sys.set(0, 2, table.gamma1);
    for i in 0..=n {
        d_sys.set(i + 1, i, table.alpha1);
        d_sys.set(i + 1, i + 1, table.alpha2);
        d_sys.set(i + 1, i + 2, table.alpha1);
        d_rhs[i + 1] = f(grid.node(i));
    }
    d_sys.set(dim - 1, dim - 3, table.gamma1);
    d_sys.set(dim - 1, dim - 2, table.gamma2);
    d_sys.set(dim - 1, dim - 1, table.gamma1);
    let delta = d_sys.solve(&d_rhs)?;

    let mut p_sys = BandedMatrix::zero(dim, 2, 2)?;
    let mut p_rhs = vec![0.0; dim];
    p_sys.set(0, 0, table.beta1);
    p_sys.set(0, 2, -table.beta1);
    for i in 0..=n {
        p_sys.set(i + 1, i, table.alpha1);
        p_sys.set(i + 1, i + 1, table.alpha2);
        p_sys.set(i + 1, i + 2, table.alpha1);
        p_rhs[i + 1] = f_prime(grid.node(i));
    }
    p_sys.set(dim - 1, dim - 3, table.beta1);
    p_sys.set(dim - 1, dim - 1, -table.beta1);
    let phi = p_sys.solve(&p_rhs)?;

    SolutionState::new(delta, phi, 0.0)
}
