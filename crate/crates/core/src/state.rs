//! Density matrices of N photons shared between two modes.
//!
//! Index `k` in `0..=N` labels the Fock state `|N-k, k>`: mode 1 holds `N-k`
//! photons and mode 2 holds `k`. `rho[(k, m)] = <N-k, k| rho |N-m, m>`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, HERMITIAN_TOL};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const CAUCHY_SCHWARZ_TOL: f64 = 1e-10;
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A validated two-mode N-photon density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeNState {
    n_total: usize,
    rho: ComplexMatrix,
}

impl TwoModeNState {
    /// Validates `rho` as an `(N+1) x (N+1)` density matrix.
    pub fn from_matrix(n_total: usize, rho: ComplexMatrix) -> Result<Self> {
        if n_total < 1 {
            return Err(Error::InvalidN(n_total));
        }
        if rho.dim() != n_total + 1 {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: n_total + 1,
            });
        }
        let report = validate_matrix(&rho);
        if !report.passed() {
            return Err(Error::ValidationFailed(Box::new(report)));
        }
        Ok(Self { n_total, rho })
    }

    /// Skips validation; callers must already know the matrix is physical.
    pub(crate) fn from_matrix_unchecked(n_total: usize, rho: ComplexMatrix) -> Self {
        debug_assert_eq!(rho.dim(), n_total + 1);
        Self { n_total, rho }
    }

    #[inline]
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n_total + 1
    }

    #[inline]
    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    #[inline]
    pub fn get(&self, k: usize, m: usize) -> Complex64 {
        self.rho[(k, m)]
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.rho[(k, k)].re).collect()
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_km|^2 for Hermitian rho
        self.rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// True when some `rho[(k, m)]` with `k != m` is nonzero.
    pub fn has_coherence(&self) -> bool {
        let n = self.dim();
        (0..n).any(|k| (k + 1..n).any(|m| self.rho[(k, m)] != Complex64::new(0.0, 0.0)))
    }

    pub fn validate(&self) -> ValidationReport {
        validate_matrix(&self.rho)
    }
}

/// Amplitudes `c_k` of `|N-k, k>` for a pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct PureCoefficients {
    n_total: usize,
    coeffs: Vec<Complex64>,
}

impl PureCoefficients {
    /// `coeffs.len()` fixes `N = len - 1`. With `auto_normalize` the vector
    /// is rescaled to unit norm, otherwise it must already be normalized.
    pub fn new(coeffs: Vec<Complex64>, auto_normalize: bool) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidN(coeffs.len().saturating_sub(1)));
        }
        let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let coeffs = if auto_normalize {
            if !(norm_sq > 0.0 && norm_sq.is_finite()) {
                return Err(Error::NotNormalized { norm_sq });
            }
            let inv = norm_sq.sqrt().recip();
            coeffs.into_iter().map(|c| c * inv).collect()
        } else if (norm_sq - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm_sq });
        } else {
            coeffs
        };
        Ok(Self {
            n_total: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
}

/// `|psi><psi|` with `rho[(k, m)] = c_k conj(c_m)`.
pub fn from_pure(c: &PureCoefficients) -> TwoModeNState {
    let cs = &c.coeffs;
    let rho = ComplexMatrix::from_fn(cs.len(), |k, m| {
        if k == m {
            Complex64::new(cs[k].norm_sqr(), 0.0)
        } else {
            cs[k] * cs[m].conj()
        }
    });
    TwoModeNState::from_matrix_unchecked(c.n_total, rho)
}

/// `(|N,0> + e^{iN phase} |0,N>) / sqrt(2)`.
pub fn make_noon(n_total: usize, phase: f64) -> Result<TwoModeNState> {
    if n_total < 1 {
        return Err(Error::InvalidN(n_total));
    }
    let n = n_total;
    let mut rho = ComplexMatrix::zeros(n + 1);
    let half = Complex64::new(0.5, 0.0);
    let coherence = Complex64::from_polar(0.5, -(n as f64) * phase);
    rho[(0, 0)] = half;
    rho[(n, n)] = half;
    rho[(0, n)] = coherence;
    rho[(n, 0)] = coherence.conj();
    Ok(TwoModeNState::from_matrix_unchecked(n, rho))
}

/// Outcome of a single physicality check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub hermitian: Check,
    pub trace: Check,
    pub psd: Check,
    pub cauchy_schwarz: Check,
    /// Smallest eigenvalue of the Hermitian part, NaN when the eigensolver failed.
    pub min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn checks(&self) -> [&Check; 4] {
        [
            &self.hermitian,
            &self.trace,
            &self.psd,
            &self.cauchy_schwarz,
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks().into_iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.checks().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let verdict = if c.passed { "ok" } else { "FAIL" };
            write!(f, "{} {} (residual {:e})", c.name, verdict, c.residual)?;
        }
        Ok(())
    }
}

/// Runs every physicality check on a raw matrix; never fails.
pub fn validate_matrix(rho: &ComplexMatrix) -> ValidationReport {
    let n = rho.dim();

    let herm_res = rho.hermitian_residual();
    let hermitian = Check {
        name: "hermitian",
        passed: herm_res <= HERMITIAN_TOL,
        residual: herm_res,
    };

    let tr_res = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    let trace = Check {
        name: "trace",
        passed: tr_res <= TRACE_TOL,
        residual: tr_res,
    };

    // PSD is judged on the Hermitian part so a Hermiticity failure does not
    // mask it.
    let min_eigenvalue = hermitian_eigenvalues(&rho.hermitian_part())
        .map(|s| s.min())
        .unwrap_or(f64::NAN);
    let psd_res = (-min_eigenvalue).max(0.0);
    let psd = Check {
        name: "psd",
        passed: min_eigenvalue >= -PSD_TOL,
        residual: if min_eigenvalue.is_nan() {
            f64::INFINITY
        } else {
            psd_res
        },
    };

    let mut cs_res = 0.0f64;
    for k in 0..n {
        for m in 0..n {
            if k == m {
                continue;
            }
            let bound = (rho[(k, k)].re * rho[(m, m)].re).max(0.0).sqrt();
            cs_res = cs_res.max(rho[(k, m)].norm() - bound);
        }
    }
    let cauchy_schwarz = Check {
        name: "cauchy_schwarz",
        passed: cs_res <= CAUCHY_SCHWARZ_TOL,
        residual: cs_res.max(0.0),
    };

    ValidationReport {
        hermitian,
        trace,
        psd,
        cauchy_schwarz,
        min_eigenvalue,
    }
}
