//! Dephasing of two-mode N-photon states.
//!
//! * [`state`]: density matrices in the `|N-k, k>` basis, NOON and pure-state constructors.
//! * [`dephasing`]: closed-form and RK4 evolution under pure dephasing.
//! * [`partial_transpose`]: the partially transposed state, its block spectrum,
//!   negativity and the entanglement probe over time.
//! * [`interferometry`]: fringes, visibility and critical times.
//! * [`cli`] and [`io`]: the `noonsim` command line, state files and CSV output.
//!
//! With the default `parallel` feature, sweeps over grids run on rayon.

pub mod cli;
pub mod dephasing;
pub mod error;
pub mod exec;
pub mod interferometry;
pub mod io;
pub mod linalg;
pub mod partial_transpose;
pub mod sampling;
pub mod state;

pub use dephasing::{evolve_analytic, evolve_numeric, generator_apply, DephasingParams};
pub use error::{Error, Result};
pub use exec::Execution;
pub use interferometry::{
    fringe, t_crit, visibility, visibility_curve, FringeCurve, VisibilityRecord,
};
pub use linalg::{frobenius_distance, hermitian_eigenvalues, ComplexMatrix, Spectrum};
pub use partial_transpose::{
    esd_probe, negativity, partial_transpose_matrix, pt_spectrum_analytic, pt_spectrum_numeric,
    EsdPoint, PtBlock, PtSpectrum,
};
pub use state::{from_pure, make_noon, PureCoefficients, TwoModeNState, ValidationReport};
