//! Position dispersion `D = ⟨X²⟩ − ⟨X⟩²` for the hyperbolic Hamiltonian and
//! its small-`μħt` approximations.

use num_complex::Complex64;

use super::collapse::Guard;
use super::hyperbolic::xn_scaled;
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::scaled::Scaled;

pub(crate) fn dispersion_scaled(alpha: Complex64, p: &SystemParams, t: f64, guard: Guard) -> Result<Scaled> {
    guard.check(1, p, t)?;
    guard.check(2, p, t)?;
    let f2 = xn_scaled(2, alpha, p, t, guard)?;
    let f1 = xn_scaled(1, alpha, p, t, guard)?;
    Ok(f2.sub(&f1.powu(2)))
}

/// Exact dispersion from the `n = 1` and `n = 2` closed forms. Guarded
/// against the collapse times of both.
pub fn dispersion_exact(alpha: Complex64, p: &SystemParams, t: f64) -> Result<Complex64> {
    Ok(dispersion_scaled(alpha, p, t, Guard::default())?.to_complex())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DispersionRegime {
    /// `|μħt| ≪ 1`, `|α|² ≫ ħ`, `μ²ħt²|α| ≪ 1`.
    SmallCorrection,
    /// `|μħt| ≪ 1`, `|α|² ≫ ħ`, `μ²ħt²|α|² ≫ 1`.
    ExponentialDominated,
    /// `|μħt| ≪ 1`, `|α|² ≫ ħ`, `64μ²ħt²|α|² ≈ 1`.
    Crossover,
}

impl DispersionRegime {
    /// Classification order: the crossover band overlaps the small-correction
    /// set when `|α|` is of order one and takes precedence there.
    pub const ALL: [DispersionRegime; 3] = [
        DispersionRegime::Crossover,
        DispersionRegime::ExponentialDominated,
        DispersionRegime::SmallCorrection,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            DispersionRegime::SmallCorrection => "small_correction",
            DispersionRegime::ExponentialDominated => "exponential",
            DispersionRegime::Crossover => "crossover",
        }
    }

    /// Classification with the default [`RegimeCheck`].
    pub fn classify(alpha: Complex64, p: &SystemParams, t: f64) -> Option<Self> {
        RegimeCheck::default().classify(alpha, p, t)
    }
}

/// How the regime inequalities are read numerically.
///
/// `a ≪ b` holds when `ratio · a ≤ b`; `≈ 1` holds inside
/// `[1/crossover_band, crossover_band]`. Approximations are refused only when
/// the inequalities fail by more than `slack` on top of that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeCheck {
    pub ratio: f64,
    pub slack: f64,
    pub crossover_band: f64,
}

impl Default for RegimeCheck {
    fn default() -> Self {
        RegimeCheck {
            ratio: 10.0,
            slack: 10.0,
            crossover_band: 2.0,
        }
    }
}

impl RegimeCheck {
    fn holds(&self, regime: DispersionRegime, alpha: Complex64, p: &SystemParams, t: f64, loosen: f64) -> bool {
        let r = self.ratio / loosen;
        let a2 = alpha.norm_sqr();
        let quad = p.mu * p.mu * p.hbar * t * t;
        let common = r * (p.mu * p.hbar * t).abs() <= 1.0 && a2 >= r * p.hbar;
        common
            && match regime {
                DispersionRegime::SmallCorrection => r * quad * a2.sqrt() <= 1.0,
                DispersionRegime::ExponentialDominated => quad * a2 >= r,
                DispersionRegime::Crossover => {
                    let x = 64.0 * quad * a2;
                    let band = self.crossover_band * loosen;
                    x >= 1.0 / band && x <= band
                }
            }
    }

    pub fn satisfied(&self, regime: DispersionRegime, alpha: Complex64, p: &SystemParams, t: f64) -> bool {
        self.holds(regime, alpha, p, t, 1.0)
    }

    /// First regime in [`DispersionRegime::ALL`] whose inequalities hold.
    pub fn classify(&self, alpha: Complex64, p: &SystemParams, t: f64) -> Option<DispersionRegime> {
        DispersionRegime::ALL
            .into_iter()
            .find(|r| self.satisfied(*r, alpha, p, t))
    }

    pub fn approx(&self, alpha: Complex64, p: &SystemParams, t: f64, regime: DispersionRegime) -> Result<Complex64> {
        if !self.holds(regime, alpha, p, t, self.slack) {
            return Err(Error::RegimeMismatch(format!(
                "{} regime does not hold at alpha = {alpha}, t = {t} (mu = {}, hbar = {})",
                regime.label(),
                p.mu,
                p.hbar
            )));
        }
        Ok(approx_formula(alpha, p, t, regime))
    }
}

/// Leading-order dispersion for `regime`, after checking its inequalities.
pub fn dispersion_approx(alpha: Complex64, p: &SystemParams, t: f64, regime: DispersionRegime) -> Result<Complex64> {
    RegimeCheck::default().approx(alpha, p, t, regime)
}

pub(crate) fn approx_formula(alpha: Complex64, p: &SystemParams, t: f64, regime: DispersionRegime) -> Complex64 {
    let i = Complex64::i();
    let ac = alpha.conj();
    let diff = alpha * alpha - ac * ac;
    let sum2 = (alpha + ac) * (alpha + ac);
    let a2 = alpha.norm_sqr();
    let (mu, hbar, om) = (p.mu, p.hbar, p.omega);
    match regime {
        DispersionRegime::SmallCorrection => {
            let pre = (4.0 * om * t - 8.0 * i * mu * hbar * t * diff).exp();
            pre * (0.5 * hbar + 4.0 * i * mu * hbar * t * diff + 16.0 * sum2 * mu * mu * hbar * t * t * a2)
        }
        DispersionRegime::ExponentialDominated | DispersionRegime::Crossover => {
            let pre = 0.5 * (4.0 * om * t + 8.0 * i * mu * t * diff).exp() * sum2;
            let x = mu * mu * hbar * t * t * a2;
            match regime {
                DispersionRegime::ExponentialDominated => pre * (64.0 * x).exp(),
                _ => pre * ((64.0 * x).exp() - (32.0 * x).exp()),
            }
        }
    }
}
