//! Config parsing, run orchestration and CSV output.
//!
//! A run is described by a line-oriented `key=value` file:
//!
//! ```text
//! # traveling wavefront, classical spline
//! scenario = example1
//! lambda = 0
//! stop_time = 1
//! ```
//!
//! Recognized keys: `scenario` (required), `lambda`, and the overrides
//! `h`, `dt`, `theta`, `stop_time`, `record_times` (comma separated),
//! `threshold`, `output_dir`. Unknown keys and malformed lines are rejected
//! with their line number.
//!
//! Each run writes one profile CSV (`x,U,V`) per record time plus a
//! `diagnostics.csv` (`t,linf,c1,c2,c3,c4,peaks`); numbers are serialized in
//! scientific notation with 15 significant digits so that identical configs
//! produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::basis::BasisConfig;
use crate::diagnostics::{conserved_quantities, find_peaks, linf_error, ConservedQuantities, Peak};
use crate::discretization::{fit_initial, nodal_values, Grid};
use crate::error::{Error, Result};
use crate::scenarios::{make_example1, make_example2, Scenario};
use crate::stepper::Stepper;

/// Default peak-report threshold; the trains of interest ride well above it.
const DEFAULT_THRESHOLD: f64 = 0.5;

/// Optional per-run adjustments on top of the scenario defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub h: Option<f64>,
    pub dt: Option<f64>,
    pub theta: Option<f64>,
    pub stop_time: Option<f64>,
    pub record_times: Option<Vec<f64>>,
    pub threshold: Option<f64>,
}

/// A parsed and validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub lambda: f64,
    pub overrides: Overrides,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn threshold(&self) -> f64 {
        self.overrides.threshold.unwrap_or(DEFAULT_THRESHOLD)
    }
}

/// One diagnostics record at a snapshot time.
#[derive(Debug, Clone)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub linf: Option<f64>,
    pub conserved: ConservedQuantities,
    pub peaks: Vec<Peak>,
}

/// What a run produced: files on disk plus the in-memory diagnostics.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub lambda: f64,
    pub rows: Vec<DiagnosticsRow>,
    pub files: Vec<PathBuf>,
    pub summary_lines: Vec<String>,
}

fn config_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config {
        line,
        msg: msg.into(),
    }
}

/// Parses the `key=value` document and validates every constraint that can
/// be checked without running: known scenario, grid divisibility, record
/// times aligned to the time step and increasing, positive threshold.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: Vec<(String, String, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(config_err(line_no, format!("missing '=' in `{line}`")));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        const KNOWN: [&str; 9] = [
            "scenario",
            "lambda",
            "h",
            "dt",
            "theta",
            "stop_time",
            "record_times",
            "threshold",
            "output_dir",
        ];
        if !KNOWN.contains(&key.as_str()) {
            return Err(config_err(line_no, format!("unknown key `{key}`")));
        }
        if entries.iter().any(|(k, _, _)| *k == key) {
            return Err(config_err(line_no, format!("duplicate key `{key}`")));
        }
        entries.push((key, value, line_no));
    }

    let lookup = |key: &str| entries.iter().find(|(k, _, _)| k == key);
    let number = |key: &str| -> Result<Option<(f64, usize)>> {
        match lookup(key) {
            None => Ok(None),
            Some((_, v, line)) => {
                let parsed: f64 = v
                    .parse()
                    .map_err(|_| config_err(*line, format!("`{v}` is not a number")))?;
                if !parsed.is_finite() {
                    return Err(config_err(*line, format!("`{v}` is not finite")));
                }
                Ok(Some((parsed, *line)))
            }
        }
    };

    let Some((_, scenario, scen_line)) = lookup("scenario") else {
        return Err(config_err(0, "missing required key `scenario`"));
    };
    let scenario = scenario.clone();
    if scenario != "example1" && scenario != "example2" {
        return Err(config_err(
            *scen_line,
            format!("unknown scenario `{scenario}` (expected example1 or example2)"),
        ));
    }

    let lambda = number("lambda")?.map(|(v, _)| v).unwrap_or(0.0);
    let h = number("h")?;
    let dt = number("dt")?;
    let theta = number("theta")?;
    let stop_time = number("stop_time")?;
    let threshold = number("threshold")?;
    let record_times = match lookup("record_times") {
        None => None,
        Some((_, v, line)) => {
            let mut times = Vec::new();
            for part in v.split(',') {
                let t: f64 = part.trim().parse().map_err(|_| {
                    config_err(*line, format!("`{}` is not a number", part.trim()))
                })?;
                times.push(t);
            }
            if times.is_empty() {
                return Err(config_err(*line, "record_times must not be empty"));
            }
            Some((times, *line))
        }
    };

    if let Some((v, line)) = theta {
        if v < 0.0 {
            return Err(config_err(line, "theta must be nonnegative"));
        }
    }
    if let Some((v, line)) = threshold {
        if !(v > 0.0) {
            return Err(config_err(line, "threshold must be positive"));
        }
    }
    if let Some((v, line)) = dt {
        if !(v > 0.0) {
            return Err(config_err(line, "dt must be positive"));
        }
    }

    // defaults come from the scenario constructors
    let base = if scenario == "example1" {
        make_example1(theta.map(|(v, _)| v).unwrap_or(0.004))
    } else {
        make_example2()
    };
    let span = base.grid.b() - base.grid.a();

    if let Some((hv, line)) = h {
        if !(hv > 0.0) {
            return Err(config_err(line, "h must be positive"));
        }
        let cells = (span / hv).round();
        if cells < 4.0 || (span - cells * hv).abs() > 1e-9 * span {
            return Err(config_err(
                line,
                format!("h = {hv} does not divide the interval length {span} into whole cells"),
            ));
        }
    }

    let dt_value = dt.map(|(v, _)| v).unwrap_or(base.params.dt);
    let mut resolved_records = record_times
        .as_ref()
        .map(|(v, _)| v.clone())
        .unwrap_or_else(|| base.record_times.clone());
    if let Some((stop, line)) = stop_time {
        match record_times {
            Some((ref v, rline)) => {
                let last = *v.last().unwrap();
                if (last - stop).abs() > 1e-9 * stop.abs().max(1.0) {
                    return Err(config_err(
                        rline.max(line),
                        format!("stop_time = {stop} disagrees with the last record time {last}"),
                    ));
                }
            }
            None => resolved_records = vec![stop],
        }
    }
    let rec_line = record_times.as_ref().map(|(_, l)| *l).unwrap_or(0);
    let mut prev = -1.0;
    for &t in &resolved_records {
        if t < 0.0 || t <= prev {
            return Err(config_err(
                rec_line,
                "record times must be nonnegative and strictly increasing",
            ));
        }
        prev = t;
        let k = (t / dt_value).round();
        if (t - k * dt_value).abs() > 1e-9 * t.abs().max(1.0) {
            return Err(config_err(
                rec_line,
                format!("record time {t} is not a multiple of dt = {dt_value}"),
            ));
        }
    }

    let output_dir = lookup("output_dir")
        .map(|(_, v, _)| PathBuf::from(v))
        .unwrap_or_else(|| PathBuf::from("out"));

    Ok(RunConfig {
        scenario,
        lambda,
        overrides: Overrides {
            h: h.map(|(v, _)| v),
            dt: dt.map(|(v, _)| v),
            theta: theta.map(|(v, _)| v),
            stop_time: stop_time.map(|(v, _)| v),
            record_times: Some(resolved_records),
            threshold: threshold.map(|(v, _)| v),
        },
        output_dir,
    })
}

/// Instantiates the scenario named by the config with all overrides applied.
pub fn build_scenario(cfg: &RunConfig) -> Result<Scenario> {
    let mut scenario = match cfg.scenario.as_str() {
        "example1" => make_example1(cfg.overrides.theta.unwrap_or(0.004)),
        "example2" => make_example2(),
        other => {
            return Err(config_err(0, format!("unknown scenario `{other}`")));
        }
    };
    if cfg.scenario == "example2" {
        if let Some(theta) = cfg.overrides.theta {
            scenario.params.theta = theta;
        }
    }
    if let Some(h) = cfg.overrides.h {
        let span = scenario.grid.b() - scenario.grid.a();
        let cells = (span / h).round() as usize;
        scenario.grid = Grid::new(scenario.grid.a(), scenario.grid.b(), cells)?;
    }
    if let Some(dt) = cfg.overrides.dt {
        scenario.params.dt = dt;
    }
    if let Some(ref times) = cfg.overrides.record_times {
        scenario.record_times = times.clone();
    }
    Ok(scenario)
}

fn sci(v: f64) -> String {
    format!("{:.14e}", v)
}

fn peaks_field(peaks: &[Peak]) -> String {
    let mut s = String::new();
    for (i, p) in peaks.iter().enumerate() {
        if i > 0 {
            s.push(';');
        }
        let _ = write!(s, "{}:{}", sci(p.position), sci(p.height));
    }
    s
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Executes one run: fit, march, emit one profile CSV per record time and a
/// diagnostics CSV, and collect a one-line summary per snapshot.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let scenario = build_scenario(cfg)?;
    run_scenario(cfg, &scenario)
}

fn run_scenario(cfg: &RunConfig, scenario: &Scenario) -> Result<RunReport> {
    let basis = BasisConfig::new(cfg.lambda, scenario.grid.h())?;
    let table = basis.nodal_table();
    let state = fit_initial(
        &scenario.grid,
        &basis,
        scenario.initial.as_ref(),
        scenario.initial_derivative.as_ref(),
    )?;
    let stepper = Stepper::new(scenario.params, &basis, &scenario.closure);
    let snapshots = stepper.advance(&state, &scenario.record_times)?;

    fs::create_dir_all(&cfg.output_dir).map_err(|source| Error::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;

    let mut files = Vec::new();
    let mut rows = Vec::new();
    let mut summary_lines = Vec::new();
    let mut diag_csv = String::from("t,linf,c1,c2,c3,c4,peaks\n");

    for snap in &snapshots {
        let nv = nodal_values(snap, &table);
        let mut profile = String::from("x,U,V\n");
        for i in 0..=scenario.grid.n_cells() {
            let _ = writeln!(
                profile,
                "{},{},{}",
                sci(scenario.grid.node(i)),
                sci(nv.u[i]),
                sci(nv.v[i])
            );
        }
        let path = cfg.output_dir.join(format!("profile_t{}.csv", snap.t()));
        write_file(&path, &profile)?;
        files.push(path);

        let linf = scenario
            .exact
            .as_ref()
            .map(|exact| linf_error(snap, &table, &scenario.grid, exact.as_ref()));
        let conserved = conserved_quantities(snap, &table, &scenario.grid, &scenario.params)?;
        let peaks = find_peaks(snap, &table, &scenario.grid, cfg.threshold());
        let _ = writeln!(
            diag_csv,
            "{},{},{},{},{},{},{}",
            sci(snap.t()),
            linf.map(sci).unwrap_or_default(),
            sci(conserved.c1),
            sci(conserved.c2),
            sci(conserved.c3),
            sci(conserved.c4),
            peaks_field(&peaks)
        );
        let linf_text = linf.map(|e| format!(" linf={e:.3e}")).unwrap_or_default();
        summary_lines.push(format!(
            "{} lambda={} t={}{} c1={:.3} c2={:.3} c3={:.3} c4={:.3} peaks={}",
            scenario.name,
            cfg.lambda,
            snap.t(),
            linf_text,
            conserved.c1,
            conserved.c2,
            conserved.c3,
            conserved.c4,
            peaks.len()
        ));
        rows.push(DiagnosticsRow {
            t: snap.t(),
            linf,
            conserved,
            peaks,
        });
    }

    let diag_path = cfg.output_dir.join("diagnostics.csv");
    write_file(&diag_path, &diag_csv)?;
    files.push(diag_path);

    Ok(RunReport {
        lambda: cfg.lambda,
        rows,
        files,
        summary_lines,
    })
}

/// Runs the configured scenario once per extension parameter (concurrently,
/// one thread each) and assembles `sweep.csv` with a leading `lambda` column,
/// blocks in the input order.
pub fn sweep_lambda(cfg: &RunConfig, lambdas: &[f64]) -> Result<(Vec<RunReport>, PathBuf)> {
    if lambdas.is_empty() {
        return Err(config_err(0, "sweep needs at least one lambda"));
    }
    let reports: Vec<Result<RunReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = lambdas
            .iter()
            .map(|&lambda| {
                let sub = RunConfig {
                    scenario: cfg.scenario.clone(),
                    lambda,
                    overrides: cfg.overrides.clone(),
                    output_dir: cfg.output_dir.join(format!("lambda_{lambda}")),
                };
                scope.spawn(move || run(&sub))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("run thread")).collect()
    });

    let mut ordered = Vec::with_capacity(reports.len());
    for report in reports {
        ordered.push(report?);
    }

    fs::create_dir_all(&cfg.output_dir).map_err(|source| Error::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;
    let mut csv = String::from("lambda,t,linf,c1,c2,c3,c4,peaks\n");
    for report in &ordered {
        for row in &report.rows {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{}",
                sci(report.lambda),
                sci(row.t),
                row.linf.map(sci).unwrap_or_default(),
                sci(row.conserved.c1),
                sci(row.conserved.c2),
                sci(row.conserved.c3),
                sci(row.conserved.c4),
                peaks_field(&row.peaks)
            );
        }
    }
    let path = cfg.output_dir.join("sweep.csv");
    write_file(&path, &csv)?;
    Ok((ordered, path))
}
