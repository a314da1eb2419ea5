//! Partial transpose over mode 2 and its spectrum.
//!
//! Transposing the second mode sends `|N-k,k><N-m,m|` to `|N-k,m><N-m,k|`.
//! For `k != m` the ket and bra then carry `N-k+m` and `N-m+k` photons, so
//! each pair `k < m` spans its own 2x2 block with eigenvalues `±|rho_km|`,
//! and the populations stay on the diagonal. That gives the whole spectrum
//! without diagonalizing anything; [`pt_spectrum_numeric`] does it the slow
//! way for comparison.

use std::fmt;

use num_complex::Complex64;

use crate::dephasing::DephasingParams;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, Spectrum};
use crate::state::TwoModeNState;

/// Float threshold below which the smallest PT eigenvalue counts as negative.
pub const ENTANGLEMENT_THRESHOLD: f64 = -1e-14;

/// Largest N for which [`pt_spectrum_numeric`] builds the dense matrix.
pub const MAX_DENSE_N: usize = 20;

/// Row/column of `|a, b>` in the `(N+1)^2` two-mode basis.
#[inline]
pub fn basis_index(n_total: usize, a: usize, b: usize) -> usize {
    a * (n_total + 1) + b
}

/// Coherence block spanned by `|N-k, m>` and `|N-m, k>`, `k < m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PtBlock {
    pub k: usize,
    pub m: usize,
    pub magnitude: f64,
    /// `arg rho_km` in `(-pi, pi]`; 0 when the coherence vanishes.
    pub phase: f64,
}

impl PtBlock {
    /// Unit eigenvector for `-magnitude`:
    /// `(e^{i phase} |N-k, m> - |N-m, k>) / sqrt(2)` on the `(N+1)^2` basis.
    pub fn negative_eigenvector(&self, n_total: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); (n_total + 1) * (n_total + 1)];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        v[basis_index(n_total, n_total - self.k, self.m)] = Complex64::from_polar(r, self.phase);
        v[basis_index(n_total, n_total - self.m, self.k)] = Complex64::new(-r, 0.0);
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Diagonal { k: usize },
    BlockPlus { k: usize, m: usize },
    BlockMinus { k: usize, m: usize },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Provenance::Diagonal { k } => write!(f, "diag:{k}"),
            Provenance::BlockPlus { k, m } => write!(f, "block:{k}:{m}:+"),
            Provenance::BlockMinus { k, m } => write!(f, "block:{k}:{m}:-"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtSpectrum {
    pub diagonal_part: Vec<f64>,
    pub blocks: Vec<PtBlock>,
    /// `(N+1)^2` eigenvalues sorted ascending, each tagged with its source.
    pub all_eigenvalues: Vec<Eigenvalue>,
    pub min_eigenvalue: f64,
    pub negativity: f64,
}

impl PtSpectrum {
    pub fn values(&self) -> Vec<f64> {
        self.all_eigenvalues.iter().map(|e| e.value).collect()
    }

    pub fn negative_values(&self) -> Vec<f64> {
        self.all_eigenvalues
            .iter()
            .map(|e| e.value)
            .filter(|&v| v < 0.0)
            .collect()
    }
}

/// The matrix of `rho^{T_2}` on the `(N+1)^2` basis `|a, b>`, `a, b` in `0..=N`.
pub fn partial_transpose_matrix(s: &TwoModeNState) -> ComplexMatrix {
    let n = s.n_total();
    let mut sigma = ComplexMatrix::zeros((n + 1) * (n + 1));
    for k in 0..=n {
        for m in 0..=n {
            let row = basis_index(n, n - k, m);
            let col = basis_index(n, n - m, k);
            sigma[(row, col)] = s.get(k, m);
        }
    }
    sigma
}

/// Iterates over all coherence blocks `k < m` in row-major order.
pub fn blocks(s: &TwoModeNState) -> Vec<PtBlock> {
    let n = s.n_total();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for k in 0..=n {
        for m in k + 1..=n {
            let z = s.get(k, m);
            let magnitude = z.norm();
            let phase = if magnitude == 0.0 { 0.0 } else { z.arg() };
            out.push(PtBlock {
                k,
                m,
                magnitude,
                phase,
            });
        }
    }
    out
}

pub fn pt_spectrum_analytic(s: &TwoModeNState) -> PtSpectrum {
    let diagonal_part = s.populations();
    let blocks = blocks(s);

    let mut all: Vec<Eigenvalue> = Vec::with_capacity(s.dim() * s.dim());
    for (k, &p) in diagonal_part.iter().enumerate() {
        all.push(Eigenvalue {
            value: p,
            provenance: Provenance::Diagonal { k },
        });
    }
    for b in &blocks {
        all.push(Eigenvalue {
            value: b.magnitude,
            provenance: Provenance::BlockPlus { k: b.k, m: b.m },
        });
        all.push(Eigenvalue {
            value: -b.magnitude,
            provenance: Provenance::BlockMinus { k: b.k, m: b.m },
        });
    }
    all.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.provenance.cmp(&b.provenance))
    });

    let min_eigenvalue = all.first().map(|e| e.value).unwrap_or(0.0);
    let negativity = blocks.iter().map(|b| b.magnitude).sum();
    PtSpectrum {
        diagonal_part,
        blocks,
        all_eigenvalues: all,
        min_eigenvalue,
        negativity,
    }
}

/// Dense Jacobi diagonalization of [`partial_transpose_matrix`].
pub fn pt_spectrum_numeric(s: &TwoModeNState) -> Result<Spectrum> {
    assert!(
        s.n_total() <= MAX_DENSE_N,
        "dense PT spectrum limited to N <= {MAX_DENSE_N}"
    );
    hermitian_eigenvalues(&partial_transpose_matrix(s))
}

/// Dense spectra for a batch of states.
pub fn pt_spectra_numeric(states: &[TwoModeNState], exec: Execution) -> Result<Vec<Spectrum>> {
    exec.try_map(states, pt_spectrum_numeric)
}

/// Sum of the magnitudes of all coherences `k < m`.
pub fn negativity(s: &TwoModeNState) -> f64 {
    blocks(s).iter().map(|b| b.magnitude).sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EsdPoint {
    pub t: f64,
    pub negativity: f64,
    /// Smallest PT eigenvalue in floating point.
    pub min_eigenvalue: f64,
    /// Natural log of `max_{k<m} |rho_km(0)| e^{-rate_km t}`, i.e. of
    /// `-min_eigenvalue` computed without underflow. `-inf` when the
    /// initial state has no coherence.
    pub log_bound_exponent: f64,
    /// Exact verdict: some coherence survives at every finite time.
    pub entangled: bool,
    /// `min_eigenvalue < ENTANGLEMENT_THRESHOLD`.
    pub float_entangled: bool,
    /// Floating point lost the negative eigenvalue while the exact bound is finite.
    pub float_underflow: bool,
}

impl EsdPoint {
    /// The analytic lower bound on the PT spectrum, `-exp(log_bound_exponent)`.
    pub fn bound(&self) -> f64 {
        -self.log_bound_exponent.exp()
    }
}

pub(crate) fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for (i, &t) in t_grid.iter().enumerate() {
        let bad = !(t.is_finite() && t >= 0.0) || (i > 0 && t <= t_grid[i - 1]);
        if bad {
            return Err(Error::BadGrid { index: i, value: t });
        }
    }
    Ok(())
}

/// Entanglement bookkeeping for each time in `t_grid`.
pub fn esd_probe(s0: &TwoModeNState, p: &DephasingParams, t_grid: &[f64]) -> Result<Vec<EsdPoint>> {
    esd_probe_with(s0, p, t_grid, Execution::default())
}

pub fn esd_probe_with(
    s0: &TwoModeNState,
    p: &DephasingParams,
    t_grid: &[f64],
    exec: Execution,
) -> Result<Vec<EsdPoint>> {
    check_grid(t_grid)?;
    let initial: Vec<(f64, f64)> = blocks(s0)
        .iter()
        .filter(|b| b.magnitude > 0.0)
        .map(|b| (b.magnitude.ln(), p.coherence_rate(b.k, b.m)))
        .collect();
    let entangled = !initial.is_empty();

    exec.try_map(t_grid, |&t| {
        let st = crate::dephasing::evolve_analytic(s0, p, t)?;
        let spec = pt_spectrum_analytic(&st);
        let log_bound_exponent = initial
            .iter()
            .map(|&(log_mag, rate)| log_mag - rate * t)
            .fold(f64::NEG_INFINITY, f64::max);
        let float_entangled = spec.min_eigenvalue < ENTANGLEMENT_THRESHOLD;
        Ok(EsdPoint {
            t,
            negativity: spec.negativity,
            min_eigenvalue: spec.min_eigenvalue,
            log_bound_exponent,
            entangled,
            float_entangled,
            float_underflow: entangled && !float_entangled && log_bound_exponent.is_finite(),
        })
    })
}
