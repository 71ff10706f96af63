//! Shared fixtures for the integration suites: full runs of the two bundled
//! experiments, executed once and reused by every test that needs them.

use kdvb::prelude::*;

/// Fits the initial state of a scenario for a given extension parameter.
pub fn fit_scenario(scenario: &Scenario, lambda: f64) -> (BasisConfig, SolutionState) {
    let basis = BasisConfig::new(lambda, scenario.grid.h()).unwrap();
    let state = fit_initial(
        &scenario.grid,
        &basis,
        scenario.initial.as_ref(),
        scenario.initial_derivative.as_ref(),
    )
    .unwrap();
    (basis, state)
}

/// Maximum-error history of the traveling-wave experiment at the requested
/// record times.
pub fn example1_linf(lambda: f64, theta: f64, times: &[f64]) -> Vec<f64> {
    let scenario = make_example1(theta);
    let (basis, state) = fit_scenario(&scenario, lambda);
    let stepper = Stepper::new(scenario.params, &basis, &scenario.closure);
    let snapshots = stepper.advance(&state, times).unwrap();
    let table = basis.nodal_table();
    let exact = scenario.exact.as_ref().unwrap();
    snapshots
        .iter()
        .map(|s| linf_error(s, &table, &scenario.grid, exact.as_ref()))
        .collect()
}

pub struct Example2Run {
    pub initial: ConservedQuantities,
    /// `(t, conserved quantities, peaks above 0.5)` per record time
    pub rows: Vec<(f64, ConservedQuantities, Vec<Peak>)>,
}

/// Full pulse-splitting run to `t = 800` recording the five reference times.
pub fn example2_run(lambda: f64) -> Example2Run {
    let scenario = make_example2();
    let (basis, state) = fit_scenario(&scenario, lambda);
    let table = basis.nodal_table();
    let initial = conserved_quantities(&state, &table, &scenario.grid, &scenario.params).unwrap();
    let stepper = Stepper::new(scenario.params, &basis, &scenario.closure);
    let snapshots = stepper.advance(&state, &scenario.record_times).unwrap();
    let rows = snapshots
        .iter()
        .map(|s| {
            let cq = conserved_quantities(s, &table, &scenario.grid, &scenario.params).unwrap();
            let peaks = find_peaks(s, &table, &scenario.grid, 0.5);
            (s.t(), cq, peaks)
        })
        .collect();
    Example2Run { initial, rows }
}
