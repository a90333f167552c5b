use num_complex::Complex64;

/// A complex number stored as `exp(ln_scale) * mantissa`.
///
/// Hyperbolic averages carry factors like `e^{2ωnt}` and
/// `e^{z²/(2ħ cos θ)}` that overflow `f64` long before the quantities
/// built from them (ratios, logs) do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub ln_scale: f64,
    pub mantissa: Complex64,
}

impl Scaled {
    pub fn new(ln_scale: f64, mantissa: Complex64) -> Self {
        Self { ln_scale, mantissa }.normalized()
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(0.0, z)
    }

    fn normalized(self) -> Self {
        let m = self.mantissa.norm();
        if m > 0.0 && m.is_finite() {
            let l = m.ln();
            Self {
                ln_scale: self.ln_scale + l,
                mantissa: self.mantissa / m,
            }
        } else {
            self
        }
    }

    /// May overflow to infinity or underflow to zero.
    pub fn to_complex(&self) -> Complex64 {
        self.mantissa * self.ln_scale.exp()
    }

    pub fn ln_abs(&self) -> f64 {
        self.ln_scale + self.mantissa.norm().ln()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    pub fn mul(&self, o: &Scaled) -> Scaled {
        Scaled::new(self.ln_scale + o.ln_scale, self.mantissa * o.mantissa)
    }

    pub fn div(&self, o: &Scaled) -> Scaled {
        Scaled::new(self.ln_scale - o.ln_scale, self.mantissa / o.mantissa)
    }

    pub fn sub(&self, o: &Scaled) -> Scaled {
        if self.is_zero() {
            return Scaled::new(o.ln_scale, -o.mantissa);
        }
        if o.is_zero() {
            return *self;
        }
        let l = self.ln_scale.max(o.ln_scale);
        let a = self.mantissa * (self.ln_scale - l).exp();
        let b = o.mantissa * (o.ln_scale - l).exp();
        Scaled::new(l, a - b)
    }

    pub fn powu(&self, n: u32) -> Scaled {
        Scaled::new(self.ln_scale * n as f64, self.mantissa.powu(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_arithmetic() {
        let a = Scaled::from_complex(Complex64::new(3.0, -4.0));
        assert!((a.ln_abs() - 5f64.ln()).abs() < 1e-15);
        let z = a.to_complex();
        assert!((z - Complex64::new(3.0, -4.0)).norm() < 1e-14);
        let b = Scaled::new(1000.0, Complex64::new(1.0, 0.0));
        let q = b.div(&b.mul(&a));
        assert!((q.to_complex() - Complex64::new(3.0, 4.0) / 25.0).norm() < 1e-14);
        let d = b.sub(&b);
        assert!(d.is_zero());
    }
}
