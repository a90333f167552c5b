use std::f64::consts::PI;

use num_complex::Complex64;

use super::collapse::Guard;
use crate::error::Result;
use crate::model::SystemParams;

/// The factor `e^{4iμħnt} / sqrt(1 + e^{16iμħnt})` with its branch fixed by
/// `Re sqrt(...) > 0`: `(2|cos θ|)^{-1/2} · i^{[1/2 + θ/π]}`, `θ = 8μnħt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedValue {
    pub magnitude: f64,
    /// Number of quarter turns, the entire part `[1/2 + θ/π]`.
    pub phase_index: i64,
    pub value: Complex64,
}

impl BranchedValue {
    pub(crate) fn at_angle(theta: f64) -> Self {
        let magnitude = (2.0 * theta.cos().abs()).powf(-0.5);
        let phase_index = (0.5 + theta / PI).floor() as i64;
        BranchedValue {
            magnitude,
            phase_index,
            value: magnitude * i_pow(phase_index),
        }
    }

    /// `(value)²`, which equals `1/(2 cos θ)` exactly.
    pub fn squared(&self) -> Complex64 {
        self.value * self.value
    }
}

pub(crate) fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

pub fn branch_factor(n: u32, p: &SystemParams, t: f64) -> Result<BranchedValue> {
    branch_factor_guarded(n, p, t, Guard::default())
}

pub(crate) fn branch_factor_guarded(
    n: u32,
    p: &SystemParams,
    t: f64,
    guard: Guard,
) -> Result<BranchedValue> {
    guard.check(n, p, t)?;
    Ok(BranchedValue::at_angle(angle(n, p, t)))
}

/// `θ = 8μnħt`.
pub(crate) fn angle(n: u32, p: &SystemParams, t: f64) -> f64 {
    8.0 * p.mu * n as f64 * p.hbar * t
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn origin_and_quadratic_limit() {
        let p = SystemParams::new(1.0, 0.2, 0.1).unwrap();
        let b = branch_factor(1, &p, 0.0).unwrap();
        assert_eq!(b.phase_index, 0);
        assert!((b.value - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let q = SystemParams::new(1.0, 0.0, 0.1).unwrap();
        for t in [-5.0, 0.3, 17.0, 1e4] {
            let b = branch_factor(3, &q, t).unwrap();
            assert!((b.value - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn three_quarter_turn() {
        // 8μħt = 3π/4 with n = 1
        let p = SystemParams::new(1.0, 0.5, 0.25).unwrap();
        let t = 3.0 * PI / 4.0 / (8.0 * 0.5 * 0.25);
        let b = branch_factor(1, &p, t).unwrap();
        assert_eq!(b.phase_index, 1);
        assert!((b.magnitude - 2f64.powf(-0.25)).abs() < 1e-14);
        assert!((b.value - Complex64::new(0.0, 2f64.powf(-0.25))).norm() < 1e-14);
    }

    #[test]
    fn guarded_near_collapse() {
        let p = SystemParams::new(1.0, 0.5, 0.25).unwrap();
        let tc = PI / 2.0 / (8.0 * 0.5 * 0.25);
        assert!(branch_factor(1, &p, tc).is_err());
    }

    proptest! {
        // Agrees with the principal-branch expression e^{iθ/2}/sqrt(1+e^{2iθ})
        // whose square root has positive real part.
        #[test]
        fn matches_positive_real_part_root(theta in -40.0f64..40.0) {
            let c = theta.cos();
            prop_assume!(c.abs() > 1e-6);
            let b = BranchedValue::at_angle(theta);
            let w = Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, 2.0 * theta);
            let root = w.sqrt();
            prop_assert!(root.re > 0.0);
            let reference = Complex64::from_polar(1.0, theta / 2.0) / root;
            prop_assert!((b.value - reference).norm() <= 1e-9 * b.magnitude);
            // squared value is 1/(2 cos θ); unit modulus against the principal square
            prop_assert!((b.squared() * 2.0 * c - 1.0).norm() < 1e-12);
            prop_assert!(((b.squared() / (reference * reference)).norm() - 1.0).abs() < 1e-9);
        }
    }
}
