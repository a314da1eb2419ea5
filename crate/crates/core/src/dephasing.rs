//! Pure dephasing of the two modes.
//!
//! Coherences decay as `rho_km(t) = rho_km(0) exp(-(k-m)^2 (g1+g2) t / 2)`
//! while populations stay fixed. [`evolve_analytic`] applies that closed
//! form; [`evolve_numeric`] integrates the generator with RK4 and is kept
//! around as an independent check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::TwoModeNState;

/// Largest `h * r_max` accepted by [`evolve_numeric`].
pub const MAX_STEP_RATE: f64 = 0.1;
/// `h * r_max` targeted by [`default_steps`].
pub const DEFAULT_STEP_RATE: f64 = 0.025;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DephasingParams {
    gamma1: f64,
    gamma2: f64,
}

impl DephasingParams {
    pub fn new(gamma1: f64, gamma2: f64) -> Result<Self> {
        let ok = |g: f64| g.is_finite() && g >= 0.0;
        if !ok(gamma1) || !ok(gamma2) {
            return Err(Error::InvalidRates { gamma1, gamma2 });
        }
        Ok(Self { gamma1, gamma2 })
    }

    /// Both modes dephasing at the same rate.
    pub fn symmetric(gamma: f64) -> Result<Self> {
        Self::new(gamma, gamma)
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    /// `g1 + g2`.
    pub fn total(&self) -> f64 {
        self.gamma1 + self.gamma2
    }

    /// `(g1 + g2) / 2`, the single rate of the symmetric case.
    pub fn gamma_eff(&self) -> f64 {
        0.5 * self.total()
    }

    /// Decay rate of the `(k, m)` coherence: `(k-m)^2 (g1+g2) / 2`.
    pub fn coherence_rate(&self, k: usize, m: usize) -> f64 {
        let d = k.abs_diff(m) as f64;
        0.5 * d * d * self.total()
    }

    /// Fastest coherence rate for `N` photons, `N^2 (g1+g2) / 2`.
    pub fn max_rate(&self, n_total: usize) -> f64 {
        self.coherence_rate(0, n_total)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

pub fn evolve_analytic(s0: &TwoModeNState, p: &DephasingParams, t: f64) -> Result<TwoModeNState> {
    check_time(t)?;
    let rho0 = s0.rho();
    let rho = ComplexMatrix::from_fn(s0.dim(), |k, m| {
        if k == m {
            rho0[(k, k)]
        } else {
            rho0[(k, m)] * (-p.coherence_rate(k, m) * t).exp()
        }
    });
    Ok(TwoModeNState::from_matrix_unchecked(s0.n_total(), rho))
}

/// `d rho / dt` under dephasing; diagonal entries map to exactly zero.
pub fn generator_apply(s: &TwoModeNState, p: &DephasingParams) -> ComplexMatrix {
    generator_on(s.rho(), p)
}

fn generator_on(rho: &ComplexMatrix, p: &DephasingParams) -> ComplexMatrix {
    ComplexMatrix::from_fn(rho.dim(), |k, m| {
        if k == m {
            Complex64::new(0.0, 0.0)
        } else {
            rho[(k, m)] * -p.coherence_rate(k, m)
        }
    })
}

/// Step count used when the caller does not choose one:
/// `ceil(t * r_max / DEFAULT_STEP_RATE)`, at least 1.
pub fn default_steps(n_total: usize, p: &DephasingParams, t: f64) -> usize {
    let steps = (t * p.max_rate(n_total) / DEFAULT_STEP_RATE).ceil();
    if steps.is_finite() && steps >= 1.0 {
        steps as usize
    } else {
        1
    }
}

/// Classic fourth-order Runge-Kutta on the dephasing generator.
pub fn evolve_numeric(
    s0: &TwoModeNState,
    p: &DephasingParams,
    t: f64,
    steps: usize,
) -> Result<TwoModeNState> {
    check_time(t)?;
    let steps = steps.max(1);
    let h = t / steps as f64;
    let h_rate = h * p.max_rate(s0.n_total());
    if h_rate > MAX_STEP_RATE * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge {
            h_rate,
            limit: MAX_STEP_RATE,
        });
    }

    // The generator is diagonal in the entry basis (d rho_km/dt = -r_km rho_km),
    // so the RK4 stages can run entry by entry without temporaries.
    let n = s0.dim();
    let mut y = s0.rho().clone();
    if t > 0.0 {
        for k in 0..n {
            for m in k + 1..n {
                let slope = -p.coherence_rate(k, m);
                let mut z = y[(k, m)];
                for _ in 0..steps {
                    let k1 = z * slope;
                    let k2 = (z + k1 * (0.5 * h)) * slope;
                    let k3 = (z + k2 * (0.5 * h)) * slope;
                    let k4 = (z + k3 * h) * slope;
                    z += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
                }
                y[(k, m)] = z;
                y[(m, k)] = z.conj();
            }
        }
    }
    Ok(TwoModeNState::from_matrix_unchecked(s0.n_total(), y))
}

pub fn evolve_numeric_default(
    s0: &TwoModeNState,
    p: &DephasingParams,
    t: f64,
) -> Result<TwoModeNState> {
    evolve_numeric(s0, p, t, default_steps(s0.n_total(), p, t))
}
