//! Moments of the complex Gaussian
//! `I_j = ∫ x^j exp(-(w x² - 2√2 b x)/(2ħ)) dx`, `Re w > 0`.
//!
//! Integration by parts gives `w I_{j+1} = ħ j I_{j-1} + √2 b I_j`, seeded by
//! `I_0 = sqrt(2πħ/w) e^{b²/(ħw)}` (principal root, valid for `Re w > 0`).

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `I_j = exp(exponent) * scaled[j]` for `j = 0..=jmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMoments {
    pub exponent: Complex64,
    pub scaled: Vec<Complex64>,
}

impl GaussianMoments {
    pub fn moment(&self, j: usize) -> Complex64 {
        self.scaled[j] * self.exponent.exp()
    }
}

pub fn gaussian_moments(
    w: Complex64,
    b: Complex64,
    hbar: f64,
    jmax: usize,
) -> Result<GaussianMoments> {
    if !(w.re > 0.0) {
        return Err(Error::domain(format!(
            "Gaussian moment needs Re w > 0, got w = {w}"
        )));
    }
    if !(hbar > 0.0) {
        return Err(Error::domain("hbar must be positive"));
    }
    let exponent = b * b / (w * hbar);
    let mut scaled = Vec::with_capacity(jmax + 1);
    scaled.push((Complex64::new(2.0 * PI * hbar, 0.0) / w).sqrt());
    if jmax >= 1 {
        scaled.push(SQRT_2 * b * scaled[0] / w);
    }
    for j in 1..jmax {
        let next = (hbar * j as f64 * scaled[j - 1] + SQRT_2 * b * scaled[j]) / w;
        scaled.push(next);
    }
    Ok(GaussianMoments { exponent, scaled })
}
