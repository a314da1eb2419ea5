//! Interference fringes of N-photon states and how dephasing washes them out.
//!
//! The exposure dosage is modelled through the extreme coherence only:
//! `<delta>(phi) = 1 + 2 Re(e^{iN phi} <0,N|rho|N,0>)`. For a balanced NOON
//! state this is `1 + V cos(N phi)`, with visibility `V = exp(-N^2 gamma t)`
//! under symmetric dephasing. Intermediate coherences do not enter.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::dephasing::{evolve_analytic, DephasingParams};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::partial_transpose::check_grid;
use crate::state::TwoModeNState;

/// `<delta>` sampled over a phase grid at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct FringeCurve {
    pub t: f64,
    pub phi_grid: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VisibilityRecord {
    pub t: f64,
    pub v: f64,
    pub dosage_max: f64,
    pub dosage_min: f64,
}

/// Exposure dosage at scan phase `phi`.
pub fn fringe(s: &TwoModeNState, phi: f64) -> f64 {
    let n = s.n_total();
    let extreme = s.get(n, 0);
    1.0 + 2.0 * (Complex64::from_polar(1.0, n as f64 * phi) * extreme).re
}

/// `samples` phases spaced uniformly over `[0, 2 pi)`.
pub fn phase_grid(samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|j| TAU * j as f64 / samples as f64)
        .collect()
}

pub fn fringe_curve(s: &TwoModeNState, t: f64, phi_grid: &[f64]) -> FringeCurve {
    FringeCurve {
        t,
        phi_grid: phi_grid.to_vec(),
        values: phi_grid.iter().map(|&phi| fringe(s, phi)).collect(),
    }
}

/// Default phase sampling, `8N`.
pub fn default_phi_samples(n_total: usize) -> usize {
    8 * n_total
}

/// Fringe contrast `(max - min) / (max + min)` of `s` at time `t`.
///
/// The fringe is sampled on a uniform grid of `phi_samples >= 4N` points. A
/// pure `N`-th harmonic on such a grid is recovered exactly by projecting the
/// samples onto `1` and `e^{-iN phi}`, which gives the continuous extrema
/// `mean ± 2|c_N|` regardless of where the peaks fall between samples.
pub fn visibility(s: &TwoModeNState, t: f64, phi_samples: usize) -> Result<VisibilityRecord> {
    let n = s.n_total();
    let required = 4 * n;
    if phi_samples < required {
        return Err(Error::UndersampledPhase {
            samples: phi_samples,
            required,
        });
    }
    let grid = phase_grid(phi_samples);
    let curve = fringe_curve(s, t, &grid);

    let inv = 1.0 / phi_samples as f64;
    let mean = curve.values.iter().sum::<f64>() * inv;
    let harmonic: Complex64 = grid
        .iter()
        .zip(&curve.values)
        .map(|(&phi, &d)| Complex64::from_polar(d, -(n as f64) * phi))
        .sum::<Complex64>()
        * inv;
    let amplitude = 2.0 * harmonic.norm();

    let dosage_max = mean + amplitude;
    let dosage_min = mean - amplitude;
    let v = if dosage_max + dosage_min == 0.0 {
        0.0
    } else {
        (dosage_max - dosage_min) / (dosage_max + dosage_min)
    };
    Ok(VisibilityRecord {
        t,
        v,
        dosage_max,
        dosage_min,
    })
}

/// Time for the visibility to fall to `v_crit`: `ln(1/v_crit) / (gamma N^2)`.
pub fn t_crit(n_total: usize, gamma: f64, v_crit: f64) -> Result<f64> {
    if n_total < 1 {
        return Err(Error::InvalidN(n_total));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidRate(gamma));
    }
    if !(v_crit > 0.0 && v_crit < 1.0) {
        return Err(Error::InvalidVCrit(v_crit));
    }
    let n_sq = (n_total * n_total) as f64;
    Ok(-v_crit.ln() / (gamma * n_sq))
}

/// Evolves `s0` to each time in `t_grid` and measures its visibility.
pub fn visibility_curve(
    s0: &TwoModeNState,
    p: &DephasingParams,
    t_grid: &[f64],
    phi_samples: usize,
) -> Result<Vec<VisibilityRecord>> {
    visibility_curve_with(s0, p, t_grid, phi_samples, Execution::default())
}

pub fn visibility_curve_with(
    s0: &TwoModeNState,
    p: &DephasingParams,
    t_grid: &[f64],
    phi_samples: usize,
    exec: Execution,
) -> Result<Vec<VisibilityRecord>> {
    check_grid(t_grid)?;
    exec.try_map(t_grid, |&t| {
        visibility(&evolve_analytic(s0, p, t)?, t, phi_samples)
    })
}

/// Time at which the visibility curve first drops to `v_crit`.
///
/// The crossing is bracketed on `t_grid` and then refined by bisection until
/// the bracket stops shrinking in floating point.
pub fn crossing_time(
    s0: &TwoModeNState,
    p: &DephasingParams,
    t_grid: &[f64],
    phi_samples: usize,
    v_crit: f64,
) -> Result<f64> {
    if !(v_crit > 0.0 && v_crit < 1.0) {
        return Err(Error::InvalidVCrit(v_crit));
    }
    let curve = visibility_curve(s0, p, t_grid, phi_samples)?;
    let idx = curve
        .iter()
        .position(|r| r.v <= v_crit)
        .ok_or(Error::NoCrossing { v_crit })?;
    if idx == 0 {
        return Ok(curve[0].t);
    }

    let v_at =
        |t: f64| -> Result<f64> { Ok(visibility(&evolve_analytic(s0, p, t)?, t, phi_samples)?.v) };
    let (mut lo, mut hi) = (curve[idx - 1].t, curve[idx].t);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if v_at(mid)? > v_crit {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
