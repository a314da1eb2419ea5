//! Sweep orchestration behind the `noonsim` binary.
//!
//! A [`SweepSpec`] names one command, a state, rates and grids. [`render`]
//! turns it into CSV text; [`run`] writes that text to a file or stdout.
//! Grid points may be evaluated in parallel but rows are always emitted in
//! grid order, so output bytes depend only on the spec.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::dephasing::{evolve_analytic, DephasingParams};
use crate::error::Error;
use crate::exec::Execution;
use crate::interferometry::{
    default_phi_samples, fringe_curve, phase_grid, t_crit, visibility_curve_with,
};
use crate::io::{fmt_f64, parse_state_file, StateFileError};
use crate::partial_transpose::{
    esd_probe_with, pt_spectrum_analytic, pt_spectrum_numeric, MAX_DENSE_N,
};
use crate::state::{make_noon, TwoModeNState, ValidationReport};

/// Largest tolerated gap between the block spectrum and the dense one.
pub const SPECTRUM_CHECK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Evolve,
    PtSpectrum,
    NegativityScan,
    VisibilityScan,
    Tcrit,
    Fringe,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Evolve,
        Command::PtSpectrum,
        Command::NegativityScan,
        Command::VisibilityScan,
        Command::Tcrit,
        Command::Fringe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::PtSpectrum => "pt-spectrum",
            Command::NegativityScan => "negativity-scan",
            Command::VisibilityScan => "visibility-scan",
            Command::Tcrit => "tcrit",
            Command::Fringe => "fringe",
        }
    }

    pub fn csv_header(self) -> &'static str {
        match self {
            Command::Evolve => "t,k,m,re,im",
            Command::PtSpectrum => "index,eigenvalue,provenance",
            Command::NegativityScan => {
                "t,negativity,min_eig,log_bound_exponent,entangled,float_underflow"
            }
            Command::VisibilityScan => "t,visibility,dosage_max,dosage_min",
            Command::Tcrit => "n,gamma_eff,v_crit,t_crit",
            Command::Fringe => "phi,dosage",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateSource {
    Noon { phase: f64 },
    File(PathBuf),
}

impl FromStr for StateSource {
    type Err = String;

    /// `noon:<phase>` or `file:<path>`.
    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(phase) = s.strip_prefix("noon:") {
            let phase: f64 = phase
                .parse()
                .map_err(|_| format!("bad NOON phase `{phase}`"))?;
            if !phase.is_finite() {
                return Err(format!("bad NOON phase `{phase}`"));
            }
            Ok(StateSource::Noon { phase })
        } else if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err("empty state file path".into());
            }
            Ok(StateSource::File(PathBuf::from(path)))
        } else {
            Err(format!(
                "state must be `noon:<phase>` or `file:<path>`, got `{s}`"
            ))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TimeGrid {
    /// `steps` evenly spaced points from `start` to `end` inclusive.
    Range {
        start: f64,
        end: f64,
        steps: usize,
    },
    List(Vec<f64>),
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            TimeGrid::List(ts) => ts.clone(),
            TimeGrid::Range {
                start, steps: 1, ..
            } => vec![*start],
            &TimeGrid::Range { start, end, steps } => {
                let span = end - start;
                let last = (steps - 1) as f64;
                (0..steps)
                    .map(|i| {
                        if i + 1 == steps {
                            end
                        } else {
                            start + span * i as f64 / last
                        }
                    })
                    .collect()
            }
        }
    }

    fn check(&self) -> Result<(), String> {
        match self {
            &TimeGrid::Range { start, end, steps } => {
                if !(start.is_finite() && end.is_finite()) {
                    return Err("time bounds must be finite".into());
                }
                if start < 0.0 {
                    return Err(format!("t-start must be >= 0, got {start}"));
                }
                if end < start {
                    return Err(format!("t-end ({end}) must be >= t-start ({start})"));
                }
                if steps < 1 {
                    return Err("t-steps must be >= 1".into());
                }
                if steps > 1 && end == start {
                    return Err("t-steps > 1 needs t-end > t-start".into());
                }
                Ok(())
            }
            TimeGrid::List(ts) => {
                if ts.is_empty() {
                    return Err("empty time list".into());
                }
                for (i, &t) in ts.iter().enumerate() {
                    if !(t.is_finite() && t >= 0.0) || (i > 0 && t <= ts[i - 1]) {
                        return Err("times must be finite, non-negative and increasing".into());
                    }
                }
                Ok(())
            }
        }
    }

    /// The latest time on the grid.
    pub fn last(&self) -> f64 {
        match self {
            TimeGrid::Range { start, end, steps } => {
                if *steps == 1 {
                    *start
                } else {
                    *end
                }
            }
            TimeGrid::List(ts) => ts.last().copied().unwrap_or(0.0),
        }
    }
}

/// Everything needed to reproduce one CLI run.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub command: Command,
    /// Required for NOON states and `tcrit`; must agree with a state file's header.
    pub n_total: Option<usize>,
    pub gamma1: f64,
    pub gamma2: f64,
    pub t_grid: TimeGrid,
    pub phi_samples: Option<usize>,
    pub v_crit: Option<f64>,
    pub state_source: StateSource,
    pub output_path: Option<PathBuf>,
}

impl SweepSpec {
    pub fn new(command: Command, n_total: usize) -> Self {
        Self {
            command,
            n_total: Some(n_total),
            gamma1: 0.0,
            gamma2: 0.0,
            t_grid: TimeGrid::Range {
                start: 0.0,
                end: 0.0,
                steps: 1,
            },
            phi_samples: None,
            v_crit: None,
            state_source: StateSource::Noon { phase: 0.0 },
            output_path: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadArgs(String),
    #[error("state file: {0}")]
    Parse(String),
    #[error("state file: {0}")]
    Validation(Box<ValidationReport>),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::BadArgs(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl From<StateFileError> for CliError {
    fn from(e: StateFileError) -> Self {
        match e {
            StateFileError::Validation(r) => CliError::Validation(r),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::NonHermitianInput { .. } => {
                CliError::Numerical(e.to_string())
            }
            Error::ValidationFailed(r) => CliError::Validation(r),
            other => CliError::BadArgs(other.to_string()),
        }
    }
}

fn load_state(spec: &SweepSpec) -> Result<TwoModeNState, CliError> {
    match &spec.state_source {
        StateSource::Noon { phase } => {
            let n = spec
                .n_total
                .ok_or_else(|| CliError::BadArgs("--n is required for NOON states".into()))?;
            Ok(make_noon(n, *phase)?)
        }
        StateSource::File(path) => {
            let s = parse_state_file(path)?;
            if let Some(n) = spec.n_total {
                if n != s.n_total() {
                    return Err(CliError::BadArgs(format!(
                        "--n {n} disagrees with N {} in {}",
                        s.n_total(),
                        path.display()
                    )));
                }
            }
            Ok(s)
        }
    }
}

/// Produces the CSV text for `spec`, header included.
pub fn render(spec: &SweepSpec) -> Result<String, CliError> {
    render_with(spec, Execution::default())
}

pub fn render_with(spec: &SweepSpec, exec: Execution) -> Result<String, CliError> {
    spec.t_grid.check().map_err(CliError::BadArgs)?;
    let params = DephasingParams::new(spec.gamma1, spec.gamma2)?;
    let mut out = String::new();
    out.push_str(spec.command.csv_header());
    out.push('\n');

    if spec.command == Command::Tcrit {
        let n_max = spec
            .n_total
            .ok_or_else(|| CliError::BadArgs("tcrit needs --n".into()))?;
        let v_crit = spec
            .v_crit
            .ok_or_else(|| CliError::BadArgs("tcrit needs --v-crit".into()))?;
        let gamma = params.gamma_eff();
        for n in 1..=n_max {
            let t = t_crit(n, gamma, v_crit)?;
            let _ = writeln!(
                out,
                "{n},{},{},{}",
                fmt_f64(gamma),
                fmt_f64(v_crit),
                fmt_f64(t)
            );
        }
        return Ok(out);
    }

    let state = load_state(spec)?;
    let n = state.n_total();
    let times = spec.t_grid.points();
    let phi_samples = spec.phi_samples.unwrap_or_else(|| default_phi_samples(n));

    match spec.command {
        Command::Evolve => {
            let evolved = exec.try_map(&times, |&t| evolve_analytic(&state, &params, t))?;
            for (t, s) in times.iter().zip(&evolved) {
                for k in 0..=n {
                    for m in k..=n {
                        let z = s.get(k, m);
                        let _ = writeln!(
                            out,
                            "{},{k},{m},{},{}",
                            fmt_f64(*t),
                            fmt_f64(z.re),
                            fmt_f64(z.im)
                        );
                    }
                }
            }
        }
        Command::PtSpectrum => {
            let s = evolve_analytic(&state, &params, spec.t_grid.last())?;
            let spectrum = pt_spectrum_analytic(&s);
            if n <= MAX_DENSE_N {
                let dense = pt_spectrum_numeric(&s)?;
                let gap = spectrum
                    .values()
                    .iter()
                    .zip(&dense.eigenvalues)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if gap > SPECTRUM_CHECK_TOL {
                    return Err(CliError::Numerical(format!(
                        "block spectrum and dense spectrum differ by {gap:e}"
                    )));
                }
            }
            for (i, e) in spectrum.all_eigenvalues.iter().enumerate() {
                let _ = writeln!(out, "{i},{},{}", fmt_f64(e.value), e.provenance);
            }
        }
        Command::NegativityScan => {
            for p in esd_probe_with(&state, &params, &times, exec)? {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    fmt_f64(p.t),
                    fmt_f64(p.negativity),
                    fmt_f64(p.min_eigenvalue),
                    fmt_f64(p.log_bound_exponent),
                    p.entangled,
                    p.float_underflow
                );
            }
        }
        Command::VisibilityScan => {
            for r in visibility_curve_with(&state, &params, &times, phi_samples, exec)? {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_f64(r.t),
                    fmt_f64(r.v),
                    fmt_f64(r.dosage_max),
                    fmt_f64(r.dosage_min)
                );
            }
        }
        Command::Fringe => {
            if phi_samples < 1 {
                return Err(CliError::BadArgs("--phi-samples must be >= 1".into()));
            }
            let t = spec.t_grid.last();
            let s = evolve_analytic(&state, &params, t)?;
            let curve = fringe_curve(&s, t, &phase_grid(phi_samples));
            for (phi, d) in curve.phi_grid.iter().zip(&curve.values) {
                let _ = writeln!(out, "{},{}", fmt_f64(*phi), fmt_f64(*d));
            }
        }
        Command::Tcrit => unreachable!("handled above"),
    }
    Ok(out)
}

/// Renders `spec` and writes it to `output_path`, or stdout when unset.
pub fn run(spec: &SweepSpec) -> Result<(), CliError> {
    let csv = render(spec)?;
    match &spec.output_path {
        Some(path) => std::fs::write(path, csv)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(csv.as_bytes())?;
        }
    }
    Ok(())
}
