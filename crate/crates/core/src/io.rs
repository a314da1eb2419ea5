//! Text formats: the line-oriented state file and CSV number formatting.
//!
//! State file:
//!
//! ```text
//! # comments run to end of line
//! N 3
//! rho 0 0 0.5 0.0
//! rho 0 3 0.5 0.0
//! rho 3 3 0.5 0.0
//! ```
//!
//! Only `k <= m` entries are written; the lower triangle follows by
//! conjugate symmetry and anything not listed is zero.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::error::Error;
use crate::linalg::ComplexMatrix;
use crate::state::{TwoModeNState, ValidationReport};

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("state failed validation: {0}")]
    Validation(Box<ValidationReport>),
}

/// 17 significant digits, so every `f64` survives a text round trip.
/// Negative zero prints as zero.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

pub fn parse_state_str(text: &str) -> Result<TwoModeNState, StateFileError> {
    let perr = |line: usize, reason: String| StateFileError::Parse { line, reason };
    let mut n_total: Option<(usize, usize)> = None;
    let mut entries: Vec<(usize, usize, usize, Complex64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "N" => {
                if n_total.is_some() {
                    return Err(perr(line_no, "duplicate N header".into()));
                }
                if fields.len() != 2 {
                    return Err(perr(line_no, "expected `N <int>`".into()));
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| perr(line_no, format!("bad photon number `{}`", fields[1])))?;
                if n < 1 {
                    return Err(perr(line_no, "photon number must be at least 1".into()));
                }
                n_total = Some((n, line_no));
            }
            "rho" => {
                let Some((n, _)) = n_total else {
                    return Err(perr(line_no, "`rho` entry before `N` header".into()));
                };
                if fields.len() != 5 {
                    return Err(perr(line_no, "expected `rho <k> <m> <re> <im>`".into()));
                }
                let index = |s: &str| -> Result<usize, StateFileError> {
                    let v: usize = s
                        .parse()
                        .map_err(|_| perr(line_no, format!("bad index `{s}`")))?;
                    if v > n {
                        return Err(perr(line_no, format!("index out of range: {v} > N = {n}")));
                    }
                    Ok(v)
                };
                let number = |s: &str| -> Result<f64, StateFileError> {
                    let v: f64 = s
                        .parse()
                        .map_err(|_| perr(line_no, format!("bad number `{s}`")))?;
                    if !v.is_finite() {
                        return Err(perr(line_no, format!("non-finite number `{s}`")));
                    }
                    Ok(v)
                };
                let k = index(fields[1])?;
                let m = index(fields[2])?;
                if k > m {
                    return Err(perr(
                        line_no,
                        format!("entry ({k},{m}) is below the diagonal; write k <= m"),
                    ));
                }
                let z = Complex64::new(number(fields[3])?, number(fields[4])?);
                if let Some(&(_, _, first, _)) = entries.iter().find(|e| e.0 == k && e.1 == m) {
                    return Err(perr(
                        line_no,
                        format!("entry ({k},{m}) already given on line {first}"),
                    ));
                }
                entries.push((k, m, line_no, z));
            }
            other => return Err(perr(line_no, format!("unknown record `{other}`"))),
        }
    }

    let Some((n, _)) = n_total else {
        return Err(perr(
            text.lines().count().max(1),
            "missing `N` header".into(),
        ));
    };
    let mut rho = ComplexMatrix::zeros(n + 1);
    for (k, m, _, z) in entries {
        rho[(k, m)] = z;
        if k != m {
            rho[(m, k)] = z.conj();
        }
    }
    TwoModeNState::from_matrix(n, rho).map_err(|e| match e {
        Error::ValidationFailed(report) => StateFileError::Validation(report),
        other => perr(0, other.to_string()),
    })
}

pub fn parse_state_file(path: &Path) -> Result<TwoModeNState, StateFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| StateFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_state_str(&text)
}

/// Canonical text: `N` header, then nonzero `k <= m` entries in row-major order.
pub fn serialize_state(s: &TwoModeNState) -> String {
    let n = s.n_total();
    let mut out = format!("N {n}\n");
    for k in 0..=n {
        for m in k..=n {
            let z = s.get(k, m);
            if z.re != 0.0 || z.im != 0.0 {
                let _ = writeln!(out, "rho {k} {m} {} {}", fmt_f64(z.re), fmt_f64(z.im));
            }
        }
    }
    out
}
