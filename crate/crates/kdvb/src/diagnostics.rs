//! Error norms, conserved quantities and wave-peak extraction.

use crate::basis::NodalTable;
use crate::discretization::{nodal_values, Grid, SolutionState};
use crate::error::{Error, Result};
use crate::stepper::PhysicalParams;

/// The four lowest invariants of the KdV flow,
///
/// ```text
/// C1 = int u,                          C2 = int u^2,
/// C3 = int u^3 - (3 mu / eps) u_x^2,
/// C4 = int u^4 - 12 (mu/eps) u u_x^2 + 7.2 (mu/eps)^2 u_xx^2,
/// ```
///
/// evaluated by the composite trapezoid rule over the grid nodes with the
/// derivatives taken from the spline's own nodal formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedQuantities {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// One detected wave crest: a grid node that is a strict local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
}

/// Maximum absolute nodal difference between `U` and a reference solution,
/// evaluated at the state's own time.
pub fn linf_error(
    state: &SolutionState,
    table: &NodalTable,
    grid: &Grid,
    exact: impl Fn(f64, f64) -> f64,
) -> f64 {
    let nv = nodal_values(state, table);
    let t = state.t();
    (0..=grid.n_cells())
        .map(|i| (exact(grid.node(i), t) - nv.u[i]).abs())
        .fold(0.0, f64::max)
}

fn trapezoid(h: f64, n: usize, value: impl Fn(usize) -> f64) -> f64 {
    let mut sum = 0.5 * (value(0) + value(n));
    for i in 1..n {
        sum += value(i);
    }
    h * sum
}

/// Computes the four invariants for the current state.
///
/// `eps = 0` is rejected because `C3` and `C4` divide by it.
pub fn conserved_quantities(
    state: &SolutionState,
    table: &NodalTable,
    grid: &Grid,
    params: &PhysicalParams,
) -> Result<ConservedQuantities> {
    if params.epsilon == 0.0 {
        return Err(Error::ZeroEpsilon);
    }
    let nv = nodal_values(state, table);
    let h = grid.h();
    let ratio = params.mu / params.epsilon;
    let n = grid.n_cells();
    let c1 = trapezoid(h, n, |i| nv.u[i]);
    let c2 = trapezoid(h, n, |i| nv.u[i] * nv.u[i]);
    let c3 = trapezoid(h, n, |i| {
        nv.u[i].powi(3) - 3.0 * ratio * nv.ux[i] * nv.ux[i]
    });
    let c4 = trapezoid(h, n, |i| {
        nv.u[i].powi(4) - 12.0 * ratio * nv.u[i] * nv.ux[i] * nv.ux[i]
            + 7.2 * ratio * ratio * nv.uxx[i] * nv.uxx[i]
    });
    Ok(ConservedQuantities { c1, c2, c3, c4 })
}

/// Interior nodes that are strict maxima of `U` over a five-node window and
/// at least `threshold` high, ordered by descending position (leading wave
/// first). Positions are reported as exact grid nodes.
pub fn find_peaks(
    state: &SolutionState,
    table: &NodalTable,
    grid: &Grid,
    threshold: f64,
) -> Vec<Peak> {
    assert!(threshold > 0.0, "peak threshold must be positive");
    let nv = nodal_values(state, table);
    let n = grid.n_cells();
    let mut peaks: Vec<Peak> = (2..n.saturating_sub(1))
        .filter(|&i| {
            let u = nv.u[i];
            u >= threshold
                && u > nv.u[i - 2]
                && u > nv.u[i - 1]
                && u > nv.u[i + 1]
                && u > nv.u[i + 2]
        })
        .map(|i| Peak {
            position: grid.node(i),
            height: nv.u[i],
        })
        .collect();
    peaks.sort_by(|a, b| b.position.total_cmp(&a.position));
    peaks
}
