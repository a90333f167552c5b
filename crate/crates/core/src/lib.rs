//! Coherent-state averages for degree-4 Hamiltonians near elliptic and
//! hyperbolic stationary points.
//!
//! * [`closed_form`]: exact averages, collapse times, dispersion;
//! * [`fock`]: truncated oscillator-basis oracle;
//! * [`residual`]: evolution-operator generation and finite-difference residuals;
//! * [`harness`]: run configuration, sweeps and table output used by the CLI.

pub mod closed_form;
pub mod error;
pub mod exec;
pub mod fock;
pub mod harness;
pub mod model;
pub mod residual;
pub mod scaled;
pub mod symbolic;

pub use error::{Error, Result};
pub use model::{
    lyapunov_exponents, make_hyperbolic_params, phase_space_of, ComplexAmplitude, EvolutionSeries,
    ObservableSpec, Source, SystemParams, WickPolynomial,
};
