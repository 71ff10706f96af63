//! Crank-Nicolson time stepping of the collocated system.
//!
//! The order-reduced system
//!
//! ```text
//! u_t + eps u v - theta v_x + mu v_xx = 0
//! u_x - v = 0
//! ```
//!
//! is discretized in time by the Crank-Nicolson rule with the product term
//! linearized as `(UV)^{n+1} ~ U^{n+1} V^n + U^n V^{n+1} - U^n V^n`, so each
//! step is one linear banded solve. The evolution equation is collocated at
//! the grid nodes. The compatibility equation `u_x = v` is collocated at the
//! cell midpoints plus the right-boundary node: sampling the derivative at
//! nodes alone leaves the two-cell sawtooth mode of `U` invisible to `V`
//! (the centered nodal derivative vanishes on it), and that mode then grows
//! without bound through the linearized product term on long runs. At the
//! midpoints the mode has a nonzero derivative, which closes the gap.
//!
//! Two boundary closures are available: eliminating the four phantom
//! parameters through homogeneous Neumann end conditions, or keeping them as
//! unknowns pinned by four rows of prescribed boundary values of `u` and `v`.

use crate::basis::{BasisConfig, MidpointTable, NodalTable};
use crate::discretization::SolutionState;
use crate::error::{Error, Result};
use crate::linalg::BandedMatrix;

/// Coefficients of the PDE and the time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub epsilon: f64,
    pub theta: f64,
    pub mu: f64,
    pub dt: f64,
}

impl PhysicalParams {
    /// Requires `mu != 0`, `dt > 0` and `theta >= 0` (pure KdV is `theta = 0`).
    pub fn new(epsilon: f64, theta: f64, mu: f64, dt: f64) -> Result<Self> {
        if mu == 0.0 || !mu.is_finite() {
            return Err(Error::ZeroDispersion);
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::NonPositiveTimeStep(dt));
        }
        if !(theta >= 0.0) {
            return Err(Error::NegativeDissipation(theta));
        }
        Ok(Self {
            epsilon,
            theta,
            mu,
            dt,
        })
    }
}

/// Row coefficients of the discretized system at one node.
///
/// `nu1..nu5` multiply the unknowns of the evolution row, `nu6..nu10` its
/// right-hand side, and `nu11..nu13` are the nodal constraint-row weights.
/// `k` and `l` are the current nodal values `U_m` and `V_m` entering the
/// linearized product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCoefficients {
    pub nu1: f64,
    pub nu2: f64,
    pub nu3: f64,
    pub nu4: f64,
    pub nu5: f64,
    pub nu6: f64,
    pub nu7: f64,
    pub nu8: f64,
    pub nu9: f64,
    pub nu10: f64,
    pub nu11: f64,
    pub nu12: f64,
    pub nu13: f64,
    pub k: f64,
    pub l: f64,
}

/// Time-dependent boundary data for the value closure.
pub struct DirichletData {
    /// `u(a, t)`
    pub u_left: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// `u_x(a, t)`, i.e. `v(a, t)`
    pub v_left: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// `u(b, t)`
    pub u_right: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// `u_x(b, t)`, i.e. `v(b, t)`
    pub v_right: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

/// How the four phantom parameters are closed at the interval ends.
pub enum BoundaryClosure {
    /// `u_x = v_x = 0` at both ends; the phantoms are eliminated through
    /// `d_{-1} = d_1`, `p_{-1} = p_1`, `d_{N+1} = d_{N-1}`, `p_{N+1} = p_{N-1}`
    /// and restored from those relations after each solve.
    NeumannElimination,
    /// Prescribed `u` and `v` values at both ends enter as four extra rows;
    /// the phantoms stay in the unknown vector.
    Dirichlet(DirichletData),
}

impl std::fmt::Debug for BoundaryClosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryClosure::NeumannElimination => f.write_str("NeumannElimination"),
            BoundaryClosure::Dirichlet(_) => f.write_str("Dirichlet(..)"),
        }
    }
}

/// Assembles and advances the per-step linear system for one parameter set.
pub struct Stepper<'a> {
    params: PhysicalParams,
    table: NodalTable,
    mid: MidpointTable,
    closure: &'a BoundaryClosure,
}

/// Both banded systems fit comfortably in five off-diagonals each side.
const BAND: usize = 5;

/// Maps a parameter index onto its interior image under the Neumann
/// relations.
#[inline]
fn fold(j: i64, n: i64) -> i64 {
    if j < 0 {
        -j
    } else if j > n {
        2 * n - j
    } else {
        j
    }
}

impl<'a> Stepper<'a> {
    pub fn new(params: PhysicalParams, cfg: &BasisConfig, closure: &'a BoundaryClosure) -> Self {
        Self {
            params,
            table: cfg.nodal_table(),
            mid: cfg.midpoint_table(),
            closure,
        }
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    /// Computes the thirteen row coefficients at node `m` (`0 <= m <= N`)
    /// with `K = U_m`, `L = V_m` taken from the current state.
    pub fn assemble_row(&self, state: &SolutionState, m: usize) -> StepCoefficients {
        let t = &self.table;
        let p = &self.params;
        let d = state.delta();
        let f = state.phi();
        let k = t.alpha1 * d[m] + t.alpha2 * d[m + 1] + t.alpha1 * d[m + 2];
        let l = t.alpha1 * f[m] + t.alpha2 * f[m + 1] + t.alpha1 * f[m + 2];
        let two_dt = 2.0 / p.dt;
        StepCoefficients {
            nu1: (two_dt + p.epsilon * l) * t.alpha1,
            nu2: p.epsilon * k * t.alpha1 - p.theta * t.beta1 + p.mu * t.gamma1,
            nu3: (two_dt + p.epsilon * l) * t.alpha2,
            nu4: p.epsilon * k * t.alpha2 + p.mu * t.gamma2,
            nu5: p.epsilon * k * t.alpha1 + p.theta * t.beta1 + p.mu * t.gamma1,
            nu6: two_dt * t.alpha1,
            nu7: p.theta * t.beta1 - p.mu * t.gamma1,
            nu8: two_dt * t.alpha2,
            nu9: -p.mu * t.gamma2,
            nu10: -p.theta * t.beta1 - p.mu * t.gamma1,
            nu11: t.beta1,
            nu12: -t.alpha1,
            nu13: -t.alpha2,
            k,
            l,
        }
    }

    /// Builds the per-step system `A x^{n+1} = rhs` for the current state.
    ///
    /// Under the Neumann closure the system has dimension `2N + 2` over the
    /// interleaved interior unknowns `(d_0, p_0, ..., d_N, p_N)`; the
    /// right-hand side is the banded product of the level-`n` operator with
    /// the state, phantoms folded onto their interior images. Under the
    /// Dirichlet closure the dimension is `2N + 6` and the boundary rows
    /// carry the prescribed values at the new time level.
    pub fn build_system(&self, state: &SolutionState) -> Result<(BandedMatrix, Vec<f64>)> {
        match self.closure {
            BoundaryClosure::NeumannElimination => self.build_neumann(state),
            BoundaryClosure::Dirichlet(data) => self.build_dirichlet(state, data),
        }
    }

    fn build_neumann(&self, state: &SolutionState) -> Result<(BandedMatrix, Vec<f64>)> {
        let n = state.n_cells();
        let ni = n as i64;
        let dim = 2 * n + 2;
        let mut a = BandedMatrix::zero(dim, BAND, BAND)?;
        let mut rhs = vec![0.0; dim];

        let d = state.delta();
        let f = state.phi();
        // folded level-n values
        let fd = |j: i64| d[(fold(j, ni) + 1) as usize];
        let fp = |j: i64| f[(fold(j, ni) + 1) as usize];
        let col_d = |j: i64| (2 * fold(j, ni)) as usize;
        let col_p = |j: i64| (2 * fold(j, ni) + 1) as usize;

        let wv = self.mid.values();
        let wd = self.mid.derivs();

        for m in 0..=n {
            let c = self.assemble_row(state, m);
            let mi = m as i64;
            let row = 2 * m;
            a.add(row, col_d(mi - 1), c.nu1);
            a.add(row, col_p(mi - 1), c.nu2);
            a.add(row, col_d(mi), c.nu3);
            a.add(row, col_p(mi), c.nu4);
            a.add(row, col_d(mi + 1), c.nu1);
            a.add(row, col_p(mi + 1), c.nu5);
            rhs[row] = c.nu6 * fd(mi - 1)
                + c.nu7 * fp(mi - 1)
                + c.nu8 * fd(mi)
                + c.nu9 * fp(mi)
                + c.nu6 * fd(mi + 1)
                + c.nu10 * fp(mi + 1);

            if m < n {
                // constraint at midpoint x_{m+1/2}
                let row = 2 * m + 1;
                for (k, jj) in (mi - 1..=mi + 2).enumerate() {
                    a.add(row, col_d(jj), wd[k]);
                    a.add(row, col_p(jj), -wv[k]);
                    rhs[row] += -wd[k] * fd(jj) + wv[k] * fp(jj);
                }
            } else {
                // nodal constraint at x_N; the derivative part folds away
                let row = 2 * m + 1;
                a.add(row, col_d(mi - 1), c.nu11);
                a.add(row, col_d(mi + 1), -c.nu11);
                a.add(row, col_p(mi - 1), c.nu12);
                a.add(row, col_p(mi), c.nu13);
                a.add(row, col_p(mi + 1), c.nu12);
                rhs[row] = -c.nu11 * fd(mi - 1) + c.nu11 * fd(mi + 1)
                    - c.nu12 * fp(mi - 1)
                    - c.nu13 * fp(mi)
                    - c.nu12 * fp(mi + 1);
            }
        }
        Ok((a, rhs))
    }

    fn build_dirichlet(
        &self,
        state: &SolutionState,
        data: &DirichletData,
    ) -> Result<(BandedMatrix, Vec<f64>)> {
        let n = state.n_cells();
        let dim = 2 * n + 6;
        let t_new = state.t() + self.params.dt;
        let mut a = BandedMatrix::zero(dim, BAND, BAND)?;
        let mut rhs = vec![0.0; dim];

        let d = state.delta();
        let f = state.phi();
        let dv = |j: i64| d[(j + 1) as usize];
        let pv = |j: i64| f[(j + 1) as usize];
        let col_d = |j: i64| (2 * (j + 1)) as usize;
        let col_p = |j: i64| (2 * (j + 1) + 1) as usize;

        let tb = &self.table;
        let wv = self.mid.values();
        let wd = self.mid.derivs();

        // value rows at the left end
        a.add(0, col_d(-1), tb.alpha1);
        a.add(0, col_d(0), tb.alpha2);
        a.add(0, col_d(1), tb.alpha1);
        rhs[0] = (data.u_left)(t_new);
        a.add(1, col_p(-1), tb.alpha1);
        a.add(1, col_p(0), tb.alpha2);
        a.add(1, col_p(1), tb.alpha1);
        rhs[1] = (data.v_left)(t_new);

        for m in 0..=n {
            let c = self.assemble_row(state, m);
            let mi = m as i64;
            let row = 2 * m + 2;
            a.add(row, col_d(mi - 1), c.nu1);
            a.add(row, col_p(mi - 1), c.nu2);
            a.add(row, col_d(mi), c.nu3);
            a.add(row, col_p(mi), c.nu4);
            a.add(row, col_d(mi + 1), c.nu1);
            a.add(row, col_p(mi + 1), c.nu5);
            rhs[row] = c.nu6 * dv(mi - 1)
                + c.nu7 * pv(mi - 1)
                + c.nu8 * dv(mi)
                + c.nu9 * pv(mi)
                + c.nu6 * dv(mi + 1)
                + c.nu10 * pv(mi + 1);

            let row = 2 * m + 3;
            if m < n {
                for (k, jj) in (mi - 1..=mi + 2).enumerate() {
                    a.add(row, col_d(jj), wd[k]);
                    a.add(row, col_p(jj), -wv[k]);
                    rhs[row] += -wd[k] * dv(jj) + wv[k] * pv(jj);
                }
            } else {
                a.add(row, col_d(mi - 1), c.nu11);
                a.add(row, col_d(mi + 1), -c.nu11);
                a.add(row, col_p(mi - 1), c.nu12);
                a.add(row, col_p(mi), c.nu13);
                a.add(row, col_p(mi + 1), c.nu12);
                rhs[row] = -c.nu11 * dv(mi - 1) + c.nu11 * dv(mi + 1)
                    - c.nu12 * pv(mi - 1)
                    - c.nu13 * pv(mi)
                    - c.nu12 * pv(mi + 1);
            }
        }

        // value rows at the right end
        let ni = n as i64;
        let row = 2 * n + 4;
        a.add(row, col_d(ni - 1), tb.alpha1);
        a.add(row, col_d(ni), tb.alpha2);
        a.add(row, col_d(ni + 1), tb.alpha1);
        rhs[row] = (data.u_right)(t_new);
        let row = 2 * n + 5;
        a.add(row, col_p(ni - 1), tb.alpha1);
        a.add(row, col_p(ni), tb.alpha2);
        a.add(row, col_p(ni + 1), tb.alpha1);
        rhs[row] = (data.v_right)(t_new);

        Ok((a, rhs))
    }

    /// Advances the state by one time step.
    pub fn step(&self, state: &SolutionState) -> Result<SolutionState> {
        let n = state.n_cells();
        let (a, rhs) = self.build_system(state)?;
        let sol = a.solve(&rhs)?;
        let mut delta = vec![0.0; n + 3];
        let mut phi = vec![0.0; n + 3];
        match self.closure {
            BoundaryClosure::NeumannElimination => {
                for i in 0..=n {
                    delta[i + 1] = sol[2 * i];
                    phi[i + 1] = sol[2 * i + 1];
                }
                delta[0] = delta[2];
                delta[n + 2] = delta[n];
                phi[0] = phi[2];
                phi[n + 2] = phi[n];
            }
            BoundaryClosure::Dirichlet(_) => {
                for i in 0..n + 3 {
                    delta[i] = sol[2 * i];
                    phi[i] = sol[2 * i + 1];
                }
            }
        }
        SolutionState::new(delta, phi, state.t() + self.params.dt)
    }

    /// Marches from `state`, returning a snapshot at each requested time.
    ///
    /// Record times must be strictly increasing, not before `state.t`, and
    /// integer multiples of `dt` to within `1e-9` relative.
    pub fn advance(&self, state: &SolutionState, record_times: &[f64]) -> Result<Vec<SolutionState>> {
        let dt = self.params.dt;
        let start = (state.t() / dt).round() as i64;
        let mut targets = Vec::with_capacity(record_times.len());
        let mut prev = f64::NEG_INFINITY;
        for &t in record_times {
            if !(t >= 0.0) || t <= prev {
                return Err(Error::UnorderedRecordTimes);
            }
            prev = t;
            let k = (t / dt).round();
            if (t - k * dt).abs() > 1e-9 * t.abs().max(1.0) || (k as i64) < start {
                return Err(Error::UnalignedRecordTime { t, dt });
            }
            targets.push(k as i64);
        }

        let mut snapshots = Vec::with_capacity(targets.len());
        let mut current = state.clone();
        let mut step_index = start;
        for &target in &targets {
            while step_index < target {
                current = self.step(&current).map_err(|e| match e {
                    Error::SingularMatrix => Error::SingularStep {
                        step: (step_index + 1) as usize,
                        t: (step_index + 1) as f64 * dt,
                    },
                    other => other,
                })?;
                step_index += 1;
                // pin accumulated time to the step counter
                let (_, _, t) = current.parts_mut();
                *t = step_index as f64 * dt;
            }
            snapshots.push(current.clone());
        }
        Ok(snapshots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::{fit_initial, nodal_values, Grid};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_state(n: usize, seed: u64) -> SolutionState {
        let mut rng = StdRng::seed_from_u64(seed);
        let delta = (0..n + 3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let phi = (0..n + 3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SolutionState::new(delta, phi, 0.0).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(PhysicalParams::new(1.0, 0.0, 0.0, 0.1).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, 0.1, 0.0).is_err());
        assert!(PhysicalParams::new(1.0, -0.1, 0.1, 0.1).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, 0.1, 0.1).is_ok());
    }

    #[test]
    fn row_coefficients_zero_state() {
        // lambda = 0, h = 0.5, dt = 0.001, eps = 1, theta = 0.004, mu = 0.01
        let cfg = BasisConfig::new(0.0, 0.5).unwrap();
        let params = PhysicalParams::new(1.0, 0.004, 0.01, 0.001).unwrap();
        let closure = BoundaryClosure::NeumannElimination;
        let stepper = Stepper::new(params, &cfg, &closure);
        let state = SolutionState::new(vec![0.0; 11], vec![0.0; 11], 0.0).unwrap();
        let c = stepper.assemble_row(&state, 3);
        assert!((c.nu1 - 2000.0 / 6.0).abs() < 1e-10);
        assert!((c.nu2 - 0.044).abs() < 1e-15);
        assert_eq!(c.k, 0.0);
        assert_eq!(c.l, 0.0);
    }

    #[test]
    fn row_coefficient_identities() {
        let cfg = BasisConfig::new(-0.5, 0.4).unwrap();
        let params = PhysicalParams::new(0.7, 0.2, 0.3, 0.01).unwrap();
        let closure = BoundaryClosure::NeumannElimination;
        let stepper = Stepper::new(params, &cfg, &closure);
        let table = cfg.nodal_table();
        let state = random_state(12, 42);
        for m in [0, 3, 7, 12] {
            let c = stepper.assemble_row(&state, m);
            assert!((c.nu6 / c.nu8 - table.alpha1 / table.alpha2).abs() < 1e-14);
            assert!((c.nu1 - c.nu6 - params.epsilon * c.l * table.alpha1).abs() < 1e-12);
            assert!((c.nu3 - c.nu8 - params.epsilon * c.l * table.alpha2).abs() < 1e-12);
            // K and L are the nodal values of the current state
            let nv = nodal_values(&state, &table);
            assert!((c.k - nv.u[m]).abs() < 1e-14);
            assert!((c.l - nv.v[m]).abs() < 1e-14);
        }
    }

    #[test]
    fn constraint_rows_vanish_for_constant_state() {
        let cfg = BasisConfig::new(0.25, 0.5).unwrap();
        let params = PhysicalParams::new(1.0, 0.1, 0.2, 0.05).unwrap();
        let closure = BoundaryClosure::NeumannElimination;
        let stepper = Stepper::new(params, &cfg, &closure);
        let n = 10;
        let state = SolutionState::new(vec![4.0; n + 3], vec![0.0; n + 3], 0.0).unwrap();
        let (_, rhs) = stepper.build_system(&state).unwrap();
        for m in 0..=n {
            assert!(rhs[2 * m + 1].abs() < 1e-12, "constraint row {m}");
        }
    }

    #[test]
    fn pde_rows_state_independent_at_zero_state() {
        let cfg = BasisConfig::new(0.0, 0.5).unwrap();
        let params = PhysicalParams::new(1.0, 0.004, 0.01, 0.001).unwrap();
        let closure = BoundaryClosure::NeumannElimination;
        let stepper = Stepper::new(params, &cfg, &closure);
        let table = cfg.nodal_table();
        let n = 8;
        let state = SolutionState::new(vec![0.0; n + 3], vec![0.0; n + 3], 0.0).unwrap();
        let (a, _) = stepper.build_system(&state).unwrap();
        // K = L = 0 reduces the evolution row to time derivative + linear terms
        let two_dt = 2.0 / params.dt;
        let m = 4usize;
        assert!((a.get(2 * m, 2 * m - 2) - two_dt * table.alpha1).abs() < 1e-10);
        assert!((a.get(2 * m, 2 * m) - two_dt * table.alpha2).abs() < 1e-10);
        assert!(
            (a.get(2 * m, 2 * m - 1) - (-params.theta * table.beta1 + params.mu * table.gamma1))
                .abs()
                < 1e-12
        );
        assert!((a.get(2 * m, 2 * m + 1) - params.mu * table.gamma2).abs() < 1e-12);
    }

    /// Construct-then-substitute oracle: the full system over all `2N + 6`
    /// parameters with the four Neumann relations imposed afterwards must
    /// equal the assembled folded system.
    #[test]
    fn elimination_matches_dense_substitution_oracle() {
        let n = 8usize;
        let ni = n as i64;
        let h = 0.5;
        let cfg = BasisConfig::new(-0.25, h).unwrap();
        let params = PhysicalParams::new(0.9, 0.05, 0.02, 0.01).unwrap();
        let closure = BoundaryClosure::NeumannElimination;
        let stepper = Stepper::new(params, &cfg, &closure);
        let state = random_state(n, 7);
        let (a, rhs) = stepper.build_system(&state).unwrap();

        // dense rows over the full parameter set, midpoint weights taken
        // from basis evaluation rather than the closed-form table
        let origin = 0.0;
        let grid_x = |i: i64| origin + i as f64 * h;
        let dim_full = 2 * n + 6;
        let dim = 2 * n + 2;
        let mut full_a = vec![vec![0.0; dim_full]; dim];
        let mut full_b = vec![vec![0.0; dim_full]; dim];
        let cd = |j: i64| (2 * (j + 1)) as usize;
        let cp = |j: i64| (2 * (j + 1) + 1) as usize;
        for m in 0..=n {
            let c = stepper.assemble_row(&state, m);
            let mi = m as i64;
            let r = 2 * m;
            for (j, av, bv) in [
                (mi - 1, c.nu1, c.nu6),
                (mi, c.nu3, c.nu8),
                (mi + 1, c.nu1, c.nu6),
            ] {
                full_a[r][cd(j)] += av;
                full_b[r][cd(j)] += bv;
            }
            for (j, av, bv) in [
                (mi - 1, c.nu2, c.nu7),
                (mi, c.nu4, c.nu9),
                (mi + 1, c.nu5, c.nu10),
            ] {
                full_a[r][cp(j)] += av;
                full_b[r][cp(j)] += bv;
            }
            let r = 2 * m + 1;
            if m < n {
                let xm = grid_x(mi) + 0.5 * h;
                for j in mi - 1..=mi + 2 {
                    let val = cfg.eval(j, xm, origin);
                    let der = cfg.eval_deriv(j, xm, origin, 1).unwrap();
                    full_a[r][cd(j)] += der;
                    full_a[r][cp(j)] += -val;
                    full_b[r][cd(j)] += -der;
                    full_b[r][cp(j)] += val;
                }
            } else {
                let c = stepper.assemble_row(&state, n);
                for (j, w) in [(mi - 1, c.nu11), (mi + 1, -c.nu11)] {
                    full_a[r][cd(j)] += w;
                    full_b[r][cd(j)] -= w;
                }
                for (j, w) in [(mi - 1, c.nu12), (mi, c.nu13), (mi + 1, c.nu12)] {
                    full_a[r][cp(j)] += w;
                    full_b[r][cp(j)] -= w;
                }
            }
        }
        // impose the Neumann relations on A by folding phantom columns; the
        // right-hand side instead keeps B intact and folds the state vector
        for row in full_a.iter_mut() {
            let c = row[cd(-1)];
            row[cd(1)] += c;
            let c = row[cp(-1)];
            row[cp(1)] += c;
            let c = row[cd(ni + 1)];
            row[cd(ni - 1)] += c;
            let c = row[cp(ni + 1)];
            row[cp(ni - 1)] += c;
        }
        // compare: interior columns of the oracle against the banded matrix
        for r in 0..dim {
            for j in 0..=ni {
                for (oracle_col, band_col) in [(cd(j), 2 * j as usize), (cp(j), 2 * j as usize + 1)]
                {
                    let want = full_a[r][oracle_col];
                    let got = a.get(r, band_col);
                    assert!(
                        (want - got).abs() < 1e-11,
                        "A mismatch at row {r} param {j}: {want} vs {got}"
                    );
                }
            }
        }
        // rhs: oracle B times the folded state vector
        let mut x_full = vec![0.0; dim_full];
        for j in -1..=ni + 1 {
            let jf = fold(j, ni);
            x_full[cd(j)] = state.delta()[(jf + 1) as usize];
            x_full[cp(j)] = state.phi()[(jf + 1) as usize];
        }
        for r in 0..dim {
            let want: f64 = full_b[r].iter().zip(&x_full).map(|(c, v)| c * v).sum();
            assert!(
                (want - rhs[r]).abs() < 1e-11,
                "rhs mismatch at row {r}: {want} vs {}",
                rhs[r]
            );
        }
    }

    #[test]
    fn constant_state_is_a_fixed_point() {
        for &lambda in &[-1.0, 0.0, 0.5] {
            let cfg = BasisConfig::new(lambda, 0.5).unwrap();
            let params = PhysicalParams::new(1.0, 0.004, 0.01, 0.001).unwrap();
            let closure = BoundaryClosure::NeumannElimination;
            let stepper = Stepper::new(params, &cfg, &closure);
            let n = 12;
            let c = -0.7;
            let state = SolutionState::new(vec![c; n + 3], vec![0.0; n + 3], 0.0).unwrap();
            let table = cfg.nodal_table();
            let next = stepper.step(&state).unwrap();
            let nv = nodal_values(&next, &table);
            for i in 0..=n {
                assert!((nv.u[i] - c).abs() < 1e-13, "one step, node {i}");
            }
            // long-run drift stays at rounding level
            let mut s = state;
            for _ in 0..100 {
                s = stepper.step(&s).unwrap();
            }
            let nv = nodal_values(&s, &table);
            for i in 0..=n {
                assert!((nv.u[i] - c).abs() < 1e-12, "100 steps, node {i}");
            }
            assert!((s.t() - 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_constant_closure_is_a_fixed_point() {
        let cfg = BasisConfig::new(0.0, 0.5).unwrap();
        let params = PhysicalParams::new(1.0, 0.004, 0.01, 0.001).unwrap();
        let c = 1.2;
        let closure = BoundaryClosure::Dirichlet(DirichletData {
            u_left: Box::new(move |_| c),
            v_left: Box::new(|_| 0.0),
            u_right: Box::new(move |_| c),
            v_right: Box::new(|_| 0.0),
        });
        let stepper = Stepper::new(params, &cfg, &closure);
        let n = 10;
        let state = SolutionState::new(vec![c; n + 3], vec![0.0; n + 3], 0.0).unwrap();
        let next = stepper.step(&state).unwrap();
        let nv = nodal_values(&next, &cfg.nodal_table());
        for i in 0..=n {
            assert!((nv.u[i] - c).abs() < 1e-12);
            assert!(nv.v[i].abs() < 1e-12);
        }
    }

    #[test]
    fn advance_record_schedules() {
        let cfg = BasisConfig::new(0.0, 0.5).unwrap();
        let params = PhysicalParams::new(1.0, 0.0, 0.01, 0.01).unwrap();
        let closure = BoundaryClosure::NeumannElimination;
        let stepper = Stepper::new(params, &cfg, &closure);
        let state = random_state(8, 1);

        // [0] returns the initial state only
        let snaps = stepper.advance(&state, &[0.0]).unwrap();
        assert_eq!(snaps.len(), 1);
        assert_eq!(snaps[0].delta(), state.delta());

        // [dt] is one call to step
        let snaps = stepper.advance(&state, &[0.01]).unwrap();
        let one = stepper.step(&state).unwrap();
        assert_eq!(snaps.len(), 1);
        for (a, b) in snaps[0].delta().iter().zip(one.delta()) {
            assert!((a - b).abs() < 1e-15);
        }

        // several record points, spacing checked by step count
        let snaps = stepper.advance(&state, &[0.02, 0.05]).unwrap();
        assert_eq!(snaps.len(), 2);
        assert!((snaps[0].t() - 0.02).abs() < 1e-15);
        assert!((snaps[1].t() - 0.05).abs() < 1e-15);

        // rejections
        assert!(matches!(
            stepper.advance(&state, &[0.015]),
            Err(Error::UnalignedRecordTime { .. })
        ));
        assert!(matches!(
            stepper.advance(&state, &[0.05, 0.02]),
            Err(Error::UnorderedRecordTimes)
        ));
        assert!(stepper.advance(&state, &[-0.01]).is_err());
    }

    #[test]
    fn advance_reports_failing_step_index() {
        // an (effectively) infinite time step removes the delta coupling from
        // the evolution rows at zero state, leaving a singular system
        let cfg = BasisConfig::new(0.0, 0.5).unwrap();
        let params = PhysicalParams::new(1.0, 0.0, 0.01, 1e300).unwrap();
        let closure = BoundaryClosure::NeumannElimination;
        let stepper = Stepper::new(params, &cfg, &closure);
        let n = 6;
        let state = SolutionState::new(vec![0.0; n + 3], vec![0.0; n + 3], 0.0).unwrap();
        match stepper.advance(&state, &[1e300]) {
            Err(Error::SingularStep { step, .. }) => assert_eq!(step, 1),
            other => panic!("expected SingularStep, got {other:?}"),
        }
    }
}
