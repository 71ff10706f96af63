//! The two bundled experiments.
//!
//! * `example1` — a traveling wavefront with a closed-form solution, used for
//!   accuracy tables against the exact profile. The boundary rows carry the
//!   exact values of `u` and `u_x` at the interval ends.
//! * `example2` — a wide pulse under the pure KdV flow (`theta = 0`) that
//!   splits into a train of solitary waves, used for conservation studies.
//!   Both ends are quiescent, so the phantom parameters are closed by the
//!   homogeneous Neumann elimination.

use crate::discretization::Grid;
use crate::stepper::{BoundaryClosure, DirichletData, PhysicalParams};

type SpaceFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;
type SpaceTimeFn = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A ready-to-run problem: interval, physics, initial data, optional exact
/// solution, boundary closure and recording schedule.
pub struct Scenario {
    pub name: String,
    pub grid: Grid,
    pub params: PhysicalParams,
    pub initial: SpaceFn,
    pub initial_derivative: SpaceFn,
    pub exact: Option<SpaceTimeFn>,
    pub closure: BoundaryClosure,
    pub record_times: Vec<f64>,
}

impl Scenario {
    /// The run ends at the last record time.
    pub fn stop_time(&self) -> f64 {
        self.record_times.last().copied().unwrap_or(0.0)
    }
}

/// Closed-form traveling wavefront of the full equation for `eps = 1`:
///
/// ```text
/// u(x, t) = -(6 theta^2 / (25 mu)) [1 + tanh(xi) - sech^2(xi) / 2],
/// xi = (theta / (10 mu)) (x + (6 theta^2 / (25 mu)) t)
/// ```
///
/// A monotone kink running in the `-x` direction between the rest states `0`
/// and `-12 theta^2 / (25 mu)`.
///
/// Panics when `mu = 0`.
pub fn exact_traveling_wave(x: f64, t: f64, theta: f64, mu: f64) -> f64 {
    assert!(mu != 0.0, "dispersion coefficient mu must be nonzero");
    let amp = 6.0 * theta * theta / (25.0 * mu);
    let xi = theta / (10.0 * mu) * (x + amp * t);
    let sech = 1.0 / xi.cosh();
    -amp * (1.0 + xi.tanh() - 0.5 * sech * sech)
}

/// Spatial derivative of [`exact_traveling_wave`].
pub fn exact_traveling_wave_dx(x: f64, t: f64, theta: f64, mu: f64) -> f64 {
    assert!(mu != 0.0, "dispersion coefficient mu must be nonzero");
    let amp = 6.0 * theta * theta / (25.0 * mu);
    let kappa = theta / (10.0 * mu);
    let xi = kappa * (x + amp * t);
    let sech = 1.0 / xi.cosh();
    -amp * kappa * sech * sech * (1.0 + xi.tanh())
}

/// Initial pulse of the splitting experiment: `[1 - tanh((|x| - 25) / 5)] / 2`.
pub fn pulse_initial(x: f64) -> f64 {
    0.5 * (1.0 - ((x.abs() - 25.0) / 5.0).tanh())
}

/// Piecewise analytic derivative of the pulse; zero at the symmetry point.
pub fn pulse_initial_dx(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let y = (x.abs() - 25.0) / 5.0;
    let sech = 1.0 / y.cosh();
    -x.signum() * 0.1 * sech * sech
}

/// Traveling-wave accuracy experiment on `[-20, 20]`:
/// `eps = 1`, `mu = 0.01`, `h = 0.5`, `dt = 0.001`, recording at `t = 1`.
pub fn make_example1(theta: f64) -> Scenario {
    let mu = 0.01;
    let grid = Grid::new(-20.0, 20.0, 80).expect("static grid");
    let params = PhysicalParams::new(1.0, theta, mu, 0.001).expect("static params");
    let (a, b) = (grid.a(), grid.b());
    let closure = BoundaryClosure::Dirichlet(DirichletData {
        u_left: Box::new(move |t| exact_traveling_wave(a, t, theta, mu)),
        v_left: Box::new(move |t| exact_traveling_wave_dx(a, t, theta, mu)),
        u_right: Box::new(move |t| exact_traveling_wave(b, t, theta, mu)),
        v_right: Box::new(move |t| exact_traveling_wave_dx(b, t, theta, mu)),
    });
    Scenario {
        name: "example1".to_string(),
        grid,
        params,
        initial: Box::new(move |x| exact_traveling_wave(x, 0.0, theta, mu)),
        initial_derivative: Box::new(move |x| exact_traveling_wave_dx(x, 0.0, theta, mu)),
        exact: Some(Box::new(move |x, t| exact_traveling_wave(x, t, theta, mu))),
        closure,
        record_times: vec![1.0],
    }
}

/// Pulse-splitting experiment on `[-50, 150]`: `eps = 0.2`, `theta = 0`,
/// `mu = 0.1`, `h = 0.4`, `dt = 0.05`, recording at `t = 100..800`.
pub fn make_example2() -> Scenario {
    let grid = Grid::new(-50.0, 150.0, 500).expect("static grid");
    let params = PhysicalParams::new(0.2, 0.0, 0.1, 0.05).expect("static params");
    Scenario {
        name: "example2".to_string(),
        grid,
        params,
        initial: Box::new(pulse_initial),
        initial_derivative: Box::new(pulse_initial_dx),
        exact: None,
        closure: BoundaryClosure::NeumannElimination,
        record_times: vec![100.0, 200.0, 400.0, 600.0, 800.0],
    }
}
