//! Domain types shared by the closed forms, the Fock oracle and the harness.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::ParamPoly;

/// Frequency, quartic coupling and effective Planck parameter (all dimensionless).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega: f64,
    pub mu: f64,
    pub hbar: f64,
}

impl SystemParams {
    /// Basic validation: finite fields and `hbar > 0`. No regime constraint.
    pub fn new(omega: f64, mu: f64, hbar: f64) -> Result<Self> {
        if !(omega.is_finite() && mu.is_finite() && hbar.is_finite()) {
            return Err(Error::domain("parameters must be finite"));
        }
        if hbar <= 0.0 {
            return Err(Error::domain(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { omega, mu, hbar })
    }

    /// Real Lyapunov exponents at the origin require `|mu| hbar < |omega|`.
    pub fn is_hyperbolic_capable(&self) -> bool {
        (self.mu * self.hbar).abs() < self.omega.abs()
    }

    pub fn require_hyperbolic(&self) -> Result<()> {
        if self.is_hyperbolic_capable() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "|mu| hbar = {} is not below |omega| = {}",
                (self.mu * self.hbar).abs(),
                self.omega.abs()
            )))
        }
    }

    pub fn with_hbar(self, hbar: f64) -> Self {
        Self { hbar, ..self }
    }
}

pub fn make_hyperbolic_params(omega: f64, mu: f64, hbar: f64) -> Result<SystemParams> {
    let p = SystemParams::new(omega, mu, hbar)?;
    p.require_hyperbolic()?;
    Ok(p)
}

/// `λ± = ±2 sqrt(ω² − μ²ħ²)`, returned as `(λ+, λ−)`.
pub fn lyapunov_exponents(p: &SystemParams) -> Result<(f64, f64)> {
    p.require_hyperbolic()?;
    let mh = p.mu * p.hbar;
    let lam = 2.0 * (p.omega * p.omega - mh * mh).sqrt();
    Ok((lam, -lam))
}

/// Coherent-state label together with its classical phase-space point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexAmplitude {
    pub alpha: Complex64,
}

impl ComplexAmplitude {
    pub fn new(alpha: Complex64) -> Self {
        Self { alpha }
    }

    pub fn from_phase_space(x0: f64, p0: f64) -> Self {
        Self {
            alpha: Complex64::new(x0, p0) / SQRT_2,
        }
    }

    pub fn x0(&self) -> f64 {
        SQRT_2 * self.alpha.re
    }

    pub fn p0(&self) -> f64 {
        SQRT_2 * self.alpha.im
    }
}

/// `(x0, p0) = (√2 Re α, √2 Im α)`.
pub fn phase_space_of(alpha: Complex64) -> (f64, f64) {
    let a = ComplexAmplitude::new(alpha);
    (a.x0(), a.p0())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObservableSpec {
    /// `x̂^n`, `n ≥ 1`.
    XPower(u32),
    /// Normal-ordered `a†^m a^q`.
    Monomial { m: u32, q: u32 },
}

impl ObservableSpec {
    pub fn x_power(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("XPower requires n >= 1"));
        }
        Ok(ObservableSpec::XPower(n))
    }

    pub fn monomial(m: u32, q: u32) -> Self {
        ObservableSpec::Monomial { m, q }
    }
}

pub const DEFAULT_MAX_DEGREE: u32 = 8;

/// One-mode Wick symbol `Σ H_{ℓs} α*^ℓ α^s`.
///
/// Coefficients are polynomials in `(ω, μ, ħ)` with exact Gaussian-rational
/// factors so that operator tables derived from a symbol compare exactly.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WickPolynomial {
    coeffs: BTreeMap<(u32, u32), ParamPoly>,
}

impl WickPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c · α*^ell α^s` to the symbol.
    pub fn add_term(&mut self, ell: u32, s: u32, c: ParamPoly) -> &mut Self {
        let entry = self.coeffs.entry((ell, s)).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.coeffs.remove(&(ell, s));
        }
        self
    }

    pub fn with_term(mut self, ell: u32, s: u32, c: ParamPoly) -> Self {
        self.add_term(ell, s, c);
        self
    }

    pub fn coeff(&self, ell: u32, s: u32) -> Option<&ParamPoly> {
        self.coeffs.get(&(ell, s))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ParamPoly)> {
        self.coeffs.iter()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|(l, s)| l + s).max().unwrap_or(0)
    }

    /// `H_{ℓs} = conj(H_{sℓ})` for every stored pair (parameters are real).
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_violations().is_empty()
    }

    pub fn hermitian_violations(&self) -> Vec<(u32, u32)> {
        let zero = ParamPoly::zero();
        let mut bad = Vec::new();
        for (&(l, s), c) in &self.coeffs {
            let partner = self.coeffs.get(&(s, l)).unwrap_or(&zero);
            if *c != partner.conj() {
                bad.push((l, s));
            }
        }
        bad
    }

    pub fn check(&self, max_degree: u32) -> Result<()> {
        let d = self.degree();
        if d > max_degree {
            return Err(Error::Degree {
                degree: d,
                cap: max_degree,
            });
        }
        let bad = self.hermitian_violations();
        if !bad.is_empty() {
            return Err(Error::domain(format!(
                "symbol is not Hermitian-symmetric at {bad:?}"
            )));
        }
        Ok(())
    }

    pub fn eval(&self, p: &SystemParams, alpha: Complex64) -> Complex64 {
        let ac = alpha.conj();
        self.coeffs
            .iter()
            .map(|(&(l, s), c)| c.eval(p) * ac.powu(l) * alpha.powu(s))
            .sum()
    }

    /// Drops every term carrying a positive power of ħ.
    pub fn classical_part(&self) -> Self {
        let mut out = Self::new();
        for (&(l, s), c) in &self.coeffs {
            let cl = c.without_hbar();
            if !cl.is_zero() {
                out.add_term(l, s, cl);
            }
        }
        out
    }

    /// `ω|α|² + μ|α|⁴`, the elliptic-point symbol.
    pub fn elliptic() -> Self {
        Self::new()
            .with_term(1, 1, ParamPoly::omega())
            .with_term(2, 2, ParamPoly::mu())
    }

    /// Wick symbol of `iω(a†² − a²) + μ(a†² − a²)²`:
    /// `iω(α*² − α²) + μ(α*² − α²)² − 4μħ α*α − 2μħ²`.
    pub fn hyperbolic() -> Self {
        let i = ParamPoly::i();
        let w = ParamPoly::omega();
        let m = ParamPoly::mu();
        let h = ParamPoly::hbar();
        Self::new()
            .with_term(2, 0, &i * &w)
            .with_term(0, 2, -&(&i * &w))
            .with_term(4, 0, m.clone())
            .with_term(2, 2, m.scale_int(-2))
            .with_term(0, 4, m.clone())
            .with_term(1, 1, (&m * &h).scale_int(-4))
            .with_term(0, 0, (&(&m * &h) * &h).scale_int(-2))
    }

    pub fn harmonic() -> Self {
        Self::new().with_term(1, 1, ParamPoly::omega())
    }
}

impl std::ops::Add for &WickPolynomial {
    type Output = WickPolynomial;

    fn add(self, rhs: &WickPolynomial) -> WickPolynomial {
        let mut out = self.clone();
        for (&(l, s), c) in &rhs.coeffs {
            out.add_term(l, s, c.clone());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    ClosedForm,
    FockOracle,
    Classical,
}

impl Source {
    pub fn label(&self) -> &'static str {
        match self {
            Source::ClosedForm => "closed_form",
            Source::FockOracle => "fock_oracle",
            Source::Classical => "classical",
        }
    }
}

/// Time series of averages from one source.
///
/// `values[i]` is `None` when the point was flagged (collapse guard) or could
/// not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSeries {
    pub source: Source,
    pub times: Vec<f64>,
    pub values: Vec<Option<Complex64>>,
    pub collapse_flags: Vec<bool>,
}

impl EvolutionSeries {
    pub fn new(
        source: Source,
        times: Vec<f64>,
        values: Vec<Option<Complex64>>,
        collapse_flags: Vec<bool>,
    ) -> Result<Self> {
        if times.len() != values.len() || times.len() != collapse_flags.len() {
            return Err(Error::domain("series columns differ in length"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("series times must be strictly increasing"));
        }
        Ok(Self {
            source,
            times,
            values,
            collapse_flags,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}
