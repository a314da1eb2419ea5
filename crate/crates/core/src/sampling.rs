//! Random states and rates for randomized checks and benchmarks.

use num_complex::Complex64;
use rand::Rng;

use crate::dephasing::DephasingParams;
use crate::linalg::ComplexMatrix;
use crate::state::{from_pure, PureCoefficients, TwoModeNState};

/// Uniform-box complex coefficients, normalized. Retries the (measure-zero)
/// all-zero draw.
pub fn random_pure_coefficients<R: Rng + ?Sized>(n_total: usize, rng: &mut R) -> PureCoefficients {
    loop {
        let raw: Vec<Complex64> = (0..=n_total)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(pc) = PureCoefficients::new(raw, true) {
            return pc;
        }
    }
}

pub fn random_pure<R: Rng + ?Sized>(n_total: usize, rng: &mut R) -> TwoModeNState {
    from_pure(&random_pure_coefficients(n_total, rng))
}

/// Convex mixture of `rank` random pure states with random weights.
pub fn random_mixed<R: Rng + ?Sized>(n_total: usize, rank: usize, rng: &mut R) -> TwoModeNState {
    let rank = rank.max(1);
    let weights: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = ComplexMatrix::zeros(n_total + 1);
    for w in weights {
        let pure = random_pure(n_total, rng);
        rho = rho
            .add_scaled(pure.rho(), w / total)
            .expect("same dimension");
    }
    TwoModeNState::from_matrix(n_total, rho).expect("convex mixture of states is a state")
}

/// Pure or mixed with equal odds; mixed states have rank 2..=N+1.
pub fn random_state<R: Rng + ?Sized>(n_total: usize, rng: &mut R) -> TwoModeNState {
    if rng.gen_bool(0.5) {
        random_pure(n_total, rng)
    } else {
        let rank = rng.gen_range(2..=n_total + 1);
        random_mixed(n_total, rank, rng)
    }
}

/// A diagonal state with random populations, which has no coherence at all.
pub fn random_diagonal<R: Rng + ?Sized>(n_total: usize, rng: &mut R) -> TwoModeNState {
    let raw: Vec<f64> = (0..=n_total).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let pops: Vec<f64> = raw.iter().map(|p| p / total).collect();
    TwoModeNState::from_matrix(n_total, ComplexMatrix::from_real_diagonal(&pops))
        .expect("normalized populations")
}

pub fn random_params<R: Rng + ?Sized>(max_rate: f64, rng: &mut R) -> DephasingParams {
    DephasingParams::new(rng.gen_range(0.0..max_rate), rng.gen_range(0.0..max_rate))
        .expect("finite non-negative rates")
}
