//! Analytic coherent-state averages for the elliptic and hyperbolic
//! degree-4 Hamiltonians.

mod branch;
mod collapse;
mod dispersion;
mod elliptic;
pub mod gaussian;
mod hyperbolic;

pub use branch::{branch_factor, BranchedValue};
pub use collapse::{collapse_time, collapse_times, nearest_collapse, Guard};
pub use dispersion::{
    dispersion_approx, dispersion_exact, DispersionRegime, RegimeCheck,
};
pub use elliptic::{elliptic_classical_average, elliptic_quantum_average};
pub use hyperbolic::{
    hyperbolic_classical_xn, hyperbolic_xn_average, hyperbolic_xn_integral_form,
    hyperbolic_xn_series_form, scaling_transform_check, MAX_POWER,
};

use num_complex::Complex64;

use crate::error::Result;
use crate::model::SystemParams;
use crate::scaled::Scaled;

/// Closed-form evaluator bound to one parameter set and collapse guard.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm {
    pub params: SystemParams,
    pub guard: Guard,
}

impl ClosedForm {
    pub fn new(params: SystemParams) -> Self {
        Self {
            params,
            guard: Guard::default(),
        }
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.guard = guard;
        self
    }

    pub fn branch(&self, n: u32, t: f64) -> Result<BranchedValue> {
        branch::branch_factor_guarded(n, &self.params, t, self.guard)
    }

    pub fn xn_scaled(&self, n: u32, alpha: Complex64, t: f64) -> Result<Scaled> {
        hyperbolic::xn_scaled(n, alpha, &self.params, t, self.guard)
    }

    pub fn xn(&self, n: u32, alpha: Complex64, t: f64) -> Result<Complex64> {
        Ok(self.xn_scaled(n, alpha, t)?.to_complex())
    }

    pub fn xn_series_form(&self, n: u32, alpha: Complex64, t: f64) -> Result<Scaled> {
        hyperbolic::series_form_guarded(n, alpha, &self.params, t, self.guard)
    }

    pub fn xn_integral_form(&self, n: u32, alpha: Complex64, t: f64) -> Result<Scaled> {
        hyperbolic::integral_form_guarded(n, alpha, &self.params, t, self.guard)
    }

    pub fn classical_xn_scaled(&self, n: u32, alpha: Complex64, t: f64) -> Scaled {
        hyperbolic::classical_scaled(n, alpha, &self.params, t)
    }

    pub fn dispersion_scaled(&self, alpha: Complex64, t: f64) -> Result<Scaled> {
        dispersion::dispersion_scaled(alpha, &self.params, t, self.guard)
    }

    pub fn dispersion(&self, alpha: Complex64, t: f64) -> Result<Complex64> {
        Ok(self.dispersion_scaled(alpha, t)?.to_complex())
    }

    pub fn check_collapse(&self, n: u32, t: f64) -> Result<()> {
        self.guard.check(n, &self.params, t)
    }
}
