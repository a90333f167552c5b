use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncated coherent state `e^{-|α|²/(2ħ)} Σ_k α^k/sqrt(ħ^k k!) |k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentVector {
    pub alpha: Complex64,
    pub hbar: f64,
    pub coeffs: Vec<Complex64>,
    /// Poisson weight `Σ_{k ≥ dim} |c_k|²` left out by the truncation.
    pub tail_mass: f64,
}

/// `ln |c_k|` in log space so that large `|α|²/ħ` does not underflow `c_0`.
fn ln_weight(lambda: f64, ln_abs_alpha: f64, ln_hbar: f64, k: usize, ln_fact: f64) -> f64 {
    if k == 0 {
        return -0.5 * lambda;
    }
    -0.5 * lambda + k as f64 * (ln_abs_alpha - 0.5 * ln_hbar) - 0.5 * ln_fact
}

impl CoherentVector {
    pub fn new(alpha: Complex64, hbar: f64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension { dim, min: 1 });
        }
        if !(hbar > 0.0 && alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::domain("coherent state needs finite alpha and hbar > 0"));
        }
        let lambda = alpha.norm_sqr() / hbar;
        if alpha.norm() == 0.0 {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
            coeffs[0] = Complex64::new(1.0, 0.0);
            return Ok(Self { alpha, hbar, coeffs, tail_mass: 0.0 });
        }
        let (ln_a, arg) = (alpha.norm().ln(), alpha.arg());
        let ln_h = hbar.ln();
        let mut ln_fact = 0.0;
        let mut coeffs = Vec::with_capacity(dim);
        for k in 0..dim {
            if k > 0 {
                ln_fact += (k as f64).ln();
            }
            let l = ln_weight(lambda, ln_a, ln_h, k, ln_fact);
            coeffs.push(Complex64::from_polar(l.exp(), k as f64 * arg));
        }
        let kept: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let tail_mass = if 1.0 - kept > 1e-3 {
            1.0 - kept
        } else {
            // direct summation of the omitted Poisson weights
            let mut tail = 0.0;
            let mut k = dim;
            loop {
                ln_fact += (k as f64).ln();
                let w = (2.0 * ln_weight(lambda, ln_a, ln_h, k, ln_fact)).exp();
                tail += w;
                if (k as f64) > lambda && w <= 1e-20 * tail.max(1e-300) {
                    break;
                }
                if w == 0.0 && (k as f64) > lambda {
                    break;
                }
                k += 1;
            }
            tail
        };
        Ok(Self { alpha, hbar, coeffs, tail_mass })
    }

    /// Smallest doubling of `start` (up to `cap`) whose tail mass is within `tol`.
    pub fn adaptive(alpha: Complex64, hbar: f64, start: usize, cap: usize, tol: f64) -> Result<Self> {
        let mut dim = start.max(1);
        loop {
            let v = Self::new(alpha, hbar, dim)?;
            if v.tail_mass <= tol {
                return Ok(v);
            }
            if dim >= cap {
                return Err(Error::TailMass {
                    tail_mass: v.tail_mass,
                    tol,
                    dim,
                });
            }
            dim = (2 * dim).min(cap);
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Truncated coherent vector; see [`CoherentVector::new`].
pub fn coherent_vector(alpha: Complex64, hbar: f64, dim: usize) -> Result<CoherentVector> {
    CoherentVector::new(alpha, hbar, dim)
}
