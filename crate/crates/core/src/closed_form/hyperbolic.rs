//! `⟨α| X(t)^n |α⟩` for `H = iω(a†² − a²) + μ(a†² − a²)²`.
//!
//! Two evaluation routes:
//!
//! * series form: the finite sum over `k ≤ n/2` with every half-integer power
//!   of `cos θ` realised through the branch factor, `(cos θ)^{-1/2} = √2 B`;
//! * integral form: the complex Gaussian moment
//!   `∫ x^n exp(-[(1 + e^{2iθ})x² − 2√2(α* + α e^{iθ})x]/(2ħ)) dx`
//!   with the principal square root (`Re(1 + e^{2iθ}) ≥ 0`).
//!
//! Here `θ = 8μnħt`. The routes agree wherever `cos θ > 0`; the integral form
//! is used on `cos θ < 0`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::branch::{angle, BranchedValue};
use super::collapse::Guard;
use super::gaussian::gaussian_moments;
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::scaled::Scaled;

/// Largest `n` accepted; the integer coefficients stay exact up to here.
pub const MAX_POWER: u32 = 20;

fn check_power(n: u32) -> Result<()> {
    if n == 0 || n > MAX_POWER {
        return Err(Error::domain(format!(
            "observable power n = {n} outside 1..={MAX_POWER}"
        )));
    }
    Ok(())
}

/// `n! / (2^k k! (n − 2k)!)`, the number of ways to choose `k` disjoint pairs.
fn pairing_count(n: u32, k: u32) -> u128 {
    let fact = |m: u32| (1..=m as u128).product::<u128>();
    fact(n) / ((1u128 << k) * fact(k) * fact(n - 2 * k))
}

pub(crate) fn series_form_guarded(
    n: u32,
    alpha: Complex64,
    p: &SystemParams,
    t: f64,
    guard: Guard,
) -> Result<Scaled> {
    check_power(n)?;
    p.require_hyperbolic()?;
    guard.check(n, p, t)?;

    let theta = angle(n, p, t);
    let root = BranchedValue::at_angle(theta).value * SQRT_2;
    let (u, v) = (alpha.re, alpha.im);
    let (sh, ch) = (0.5 * theta).sin_cos();
    // α* e^{-iθ/2} + α e^{iθ/2}, real
    let z = 2.0 * (u * ch - v * sh);
    // −(α+α*)²/(2ħ) + z²/(2ħ cos θ), rearranged to avoid cancellation
    let gauss = 2.0 * (sh * sh * alpha.norm_sqr() - u * v * theta.sin()) / (p.hbar * theta.cos());
    let ln_scale = 2.0 * p.omega * n as f64 * t + gauss;

    let zr = Complex64::new(z, 0.0) * root;
    let sum: Complex64 = (0..=n / 2)
        .map(|k| pairing_count(n, k) as f64 * p.hbar.powi(k as i32) * zr.powu(n - 2 * k))
        .sum();
    let mantissa = root.powu(n + 1) * 2f64.powf(-(n as f64) / 2.0) * sum;
    Ok(Scaled::new(ln_scale, mantissa))
}

pub(crate) fn integral_form_guarded(
    n: u32,
    alpha: Complex64,
    p: &SystemParams,
    t: f64,
    guard: Guard,
) -> Result<Scaled> {
    check_power(n)?;
    p.require_hyperbolic()?;
    guard.check(n, p, t)?;

    let theta = angle(n, p, t);
    let rot = Complex64::from_polar(1.0, theta);
    // 1 + e^{2iθ}, written without cancellation near cos θ = 0
    let w = 2.0 * theta.cos() * rot;
    let b = alpha.conj() + alpha * rot;
    let moments = gaussian_moments(w, b, p.hbar, n as usize)?;
    let x0 = 2.0 * alpha.re;
    let ln_scale = -x0 * x0 / (2.0 * p.hbar)
        + 2.0 * p.omega * n as f64 * t
        + moments.exponent.re;
    // e^{4iμħn(n+1)t} = e^{iθ(n+1)/2}
    let phase = Complex64::from_polar(1.0, 0.5 * theta * (n + 1) as f64 + moments.exponent.im);
    let mantissa = phase * moments.scaled[n as usize] / (PI * p.hbar).sqrt();
    Ok(Scaled::new(ln_scale, mantissa))
}

pub(crate) fn xn_scaled(
    n: u32,
    alpha: Complex64,
    p: &SystemParams,
    t: f64,
    guard: Guard,
) -> Result<Scaled> {
    if angle(n, p, t).cos() > 0.0 {
        series_form_guarded(n, alpha, p, t, guard)
    } else {
        integral_form_guarded(n, alpha, p, t, guard)
    }
}

/// `⟨α| X(t)^n |α⟩` with the default collapse guard.
pub fn hyperbolic_xn_average(n: u32, alpha: Complex64, p: &SystemParams, t: f64) -> Result<Complex64> {
    Ok(xn_scaled(n, alpha, p, t, Guard::default())?.to_complex())
}

pub fn hyperbolic_xn_series_form(n: u32, alpha: Complex64, p: &SystemParams, t: f64) -> Result<Scaled> {
    series_form_guarded(n, alpha, p, t, Guard::default())
}

pub fn hyperbolic_xn_integral_form(n: u32, alpha: Complex64, p: &SystemParams, t: f64) -> Result<Scaled> {
    integral_form_guarded(n, alpha, p, t, Guard::default())
}

pub(crate) fn classical_scaled(n: u32, alpha: Complex64, p: &SystemParams, t: f64) -> Scaled {
    let ac = alpha.conj();
    let x0 = (alpha + ac).re / SQRT_2;
    let e = n as f64 * (2.0 * p.omega + 4.0 * Complex64::i() * p.mu * (alpha * alpha - ac * ac)) * t;
    Scaled::new(e.re, Complex64::from_polar(1.0, e.im) * x0.powi(n as i32))
}

/// Liouville solution for `x^n`: `((α+α*)/√2)^n e^{n(2ω + 4iμ(α² − α*²))t}`.
pub fn hyperbolic_classical_xn(n: u32, alpha: Complex64, p: &SystemParams, t: f64) -> Complex64 {
    classical_scaled(n, alpha, p, t).to_complex()
}

/// Evaluates both sides of the scaling identity
/// `f(n, √s α; ω, μ/s, sħ; t) = s^{n/2} f(n, α; ω, μ, ħ; t)`.
pub fn scaling_transform_check(
    n: u32,
    alpha: Complex64,
    p: &SystemParams,
    t: f64,
    s: f64,
) -> Result<(Complex64, Complex64)> {
    let (lhs, rhs) = scaling_sides(n, alpha, p, t, s, Guard::default())?;
    Ok((lhs.to_complex(), rhs.to_complex()))
}

pub(crate) fn scaling_sides(
    n: u32,
    alpha: Complex64,
    p: &SystemParams,
    t: f64,
    s: f64,
    guard: Guard,
) -> Result<(Scaled, Scaled)> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("scale factor must be positive, got {s}")));
    }
    let scaled_params = SystemParams::new(p.omega, p.mu / s, s * p.hbar)?;
    let lhs = xn_scaled(n, alpha * s.sqrt(), &scaled_params, t, guard)?;
    let base = xn_scaled(n, alpha, p, t, guard)?;
    let rhs = Scaled::new(base.ln_scale + 0.5 * n as f64 * s.ln(), base.mantissa);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn pairing_counts() {
        assert_eq!(pairing_count(4, 2), 3);
        assert_eq!(pairing_count(6, 3), 15);
        assert_eq!(pairing_count(5, 1), 10);
        assert_eq!(pairing_count(20, 10), 654_729_075);
    }

    #[test]
    fn initial_moments() {
        let p = SystemParams::new(1.0, 0.1, 0.05).unwrap();
        for a in [Complex64::new(0.5, 0.3), Complex64::new(-1.0, 2.0), Complex64::new(0.0, 1.0)] {
            let x0 = (a + a.conj()) / SQRT_2;
            let f1 = hyperbolic_xn_average(1, a, &p, 0.0).unwrap();
            assert!(close(f1, x0, 1e-14) || (f1 - x0).norm() < 1e-15);
            let f2 = hyperbolic_xn_average(2, a, &p, 0.0).unwrap();
            let want = ((a + a.conj()).powu(2) + p.hbar) / 2.0;
            assert!(close(f2, want, 1e-13), "{f2} vs {want}");
        }
    }

    #[test]
    fn quadratic_limit_is_pure_stretch() {
        let p = SystemParams::new(0.7, 0.0, 0.2).unwrap();
        let a = Complex64::new(0.4, -1.1);
        for t in [0.0, 0.5, 3.0, 11.0] {
            let f = hyperbolic_xn_average(1, a, &p, t).unwrap();
            let want = (2.0 * p.omega * t).exp() * (a + a.conj()) / SQRT_2;
            assert!(close(f, want, 1e-13));
            assert!(close(f, hyperbolic_classical_xn(1, a, &p, t), 1e-13));
        }
    }

    #[test]
    fn classical_matches_displayed_n1_formula() {
        let p = SystemParams::new(1.0, 0.3, 0.1).unwrap();
        let a = Complex64::new(0.6, 0.8);
        for t in [0.0, 0.2, 1.7] {
            let ac = a.conj();
            let want = (ac + a) / SQRT_2
                * (2.0 * p.omega * t + 4.0 * Complex64::i() * p.mu * t * (a * a - ac * ac)).exp();
            assert!(close(hyperbolic_classical_xn(1, a, &p, t), want, 1e-14));
        }
    }

    fn rk4_flow(p: &SystemParams, x: f64, pm: f64, t: f64, steps: usize) -> (f64, f64) {
        let rhs = |x: f64, q: f64| {
            let g = 2.0 * p.omega - 8.0 * p.mu * x * q;
            (g * x, -g * q)
        };
        let h = t / steps as f64;
        let (mut x, mut q) = (x, pm);
        for _ in 0..steps {
            let k1 = rhs(x, q);
            let k2 = rhs(x + 0.5 * h * k1.0, q + 0.5 * h * k1.1);
            let k3 = rhs(x + 0.5 * h * k2.0, q + 0.5 * h * k2.1);
            let k4 = rhs(x + h * k3.0, q + h * k3.1);
            x += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            q += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        (x, q)
    }

    #[test]
    fn classical_cube_matches_ode_flow() {
        let p = SystemParams::new(1.0, 0.3, 0.1).unwrap();
        let a = Complex64::new(0.6, 0.45);
        let (x0, p0) = (SQRT_2 * a.re, SQRT_2 * a.im);
        let t = 1.3;
        // step-doubling until the ODE answer is stable far below the tolerance
        let mut steps = 1000;
        let mut prev = rk4_flow(&p, x0, p0, t, steps).0;
        loop {
            steps *= 2;
            let next = rk4_flow(&p, x0, p0, t, steps).0;
            if (next - prev).abs() < 1e-13 * next.abs() {
                prev = next;
                break;
            }
            prev = next;
        }
        let got = hyperbolic_classical_xn(3, a, &p, t);
        assert!(got.im.abs() < 1e-12 * got.norm());
        assert!((got.re - prev.powi(3)).abs() <= 1e-9 * prev.powi(3).abs());
    }

    #[test]
    fn displayed_form_agrees_with_rearranged_exponent() {
        // direct transcription, principal powers valid for cos θ > 0
        let p = SystemParams::new(1.0, 0.1, 0.2).unwrap();
        let a = Complex64::new(0.7, -0.4);
        for n in 1..=4u32 {
            for t in [0.1, 0.5, 1.0] {
                let theta = 8.0 * p.mu * n as f64 * p.hbar * t;
                let c = theta.cos();
                assert!(c > 0.0);
                let ac = a.conj();
                let zc = ac * Complex64::from_polar(1.0, -theta / 2.0) + a * Complex64::from_polar(1.0, theta / 2.0);
                let mut sum = Complex64::new(0.0, 0.0);
                for k in 0..=n / 2 {
                    sum += pairing_count(n, k) as f64 * p.hbar.powi(k as i32) * zc.powu(n - 2 * k)
                        / c.powf(n as f64 / 2.0 - k as f64);
                }
                let want = (-(a + ac).powu(2) / (2.0 * p.hbar)).exp()
                    * (2.0 * p.omega * n as f64 * t).exp()
                    / c.powf((n + 1) as f64 / 2.0)
                    * (zc * zc / (2.0 * p.hbar * c)).exp()
                    * 2f64.powf(-(n as f64) / 2.0)
                    * sum;
                let got = hyperbolic_xn_average(n, a, &p, t).unwrap();
                assert!(close(got, want, 1e-12), "n={n} t={t}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn collapse_divergence_for_x_squared() {
        let p = SystemParams::new(1.0, 0.1, 0.1).unwrap();
        let a = Complex64::i();
        let t0 = PI / (32.0 * p.mu * p.hbar);
        let cf = super::super::ClosedForm::new(p).with_guard(Guard::relative(1e-12));
        let mut last = f64::NEG_INFINITY;
        for k in 2..=6 {
            let t = t0 * (1.0 - 10f64.powi(-k));
            let l = cf.xn_scaled(2, a, t).unwrap().ln_abs();
            assert!(l > last);
            last = l;
            // (α* e^{-8iμħt} + α e^{8iμħt})² → 2
            let th = 8.0 * p.mu * p.hbar * t;
            let z = a.conj() * Complex64::from_polar(1.0, -th) + a * Complex64::from_polar(1.0, th);
            assert!((z * z - 2.0).norm() < 10f64.powi(-k + 1));
        }
        assert!(last > 1e6f64.ln());
        assert!(hyperbolic_xn_average(2, a, &p, t0).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = SystemParams::new(1.0, 0.1, 0.1).unwrap();
        let a = Complex64::new(0.3, 0.1);
        assert!(hyperbolic_xn_average(0, a, &p, 0.1).is_err());
        assert!(hyperbolic_xn_average(21, a, &p, 0.1).is_err());
        assert!(hyperbolic_xn_average(20, a, &p, 0.1).is_ok());
        let elliptic_only = SystemParams::new(0.1, 5.0, 0.1).unwrap();
        assert!(matches!(
            hyperbolic_xn_average(1, a, &elliptic_only, 0.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn scaling_identity_unit_scale() {
        let p = SystemParams::new(1.0, 0.2, 0.1).unwrap();
        let (l, r) = scaling_transform_check(2, Complex64::new(0.3, 0.9), &p, 0.8, 1.0).unwrap();
        assert_eq!(l, r);
    }

    fn before_first_collapse(n: u32, p: &SystemParams, frac: f64) -> f64 {
        frac * PI / (16.0 * p.mu.abs() * n as f64 * p.hbar)
    }

    proptest! {
        #[test]
        fn routes_agree_where_cos_positive(
            re in -1.5f64..1.5, im in -1.5f64..1.5,
            n in 1u32..5, frac in -0.95f64..0.95,
            mu in 0.05f64..0.4, hbar in 0.05f64..0.5,
        ) {
            let p = SystemParams::new(1.0, mu, hbar).unwrap();
            let a = Complex64::new(re, im);
            let t = before_first_collapse(n, &p, frac);
            let s = hyperbolic_xn_series_form(n, a, &p, t).unwrap();
            let i = hyperbolic_xn_integral_form(n, a, &p, t).unwrap();
            let rel = s.sub(&i).ln_abs() - s.ln_abs();
            prop_assert!(s.is_zero() && i.to_complex().norm() < 1e-14 || rel < (1e-12f64).ln(), "rel gap e^{rel}");
        }

        #[test]
        fn real_and_even_powers_nonnegative_before_collapse(
            re in -1.5f64..1.5, im in -1.5f64..1.5,
            n in 1u32..7, frac in -0.99f64..0.99,
            mu in 0.05f64..0.4, hbar in 0.05f64..0.5,
        ) {
            let p = SystemParams::new(1.0, mu, hbar).unwrap();
            let a = Complex64::new(re, im);
            let t = before_first_collapse(n, &p, frac);
            let f = super::super::ClosedForm::new(p).xn_scaled(n, a, t).unwrap();
            prop_assert!(f.mantissa.im.abs() <= 1e-10 * f.mantissa.norm());
            if n % 2 == 0 {
                prop_assert!(f.mantissa.re > 0.0);
            }
        }

        #[test]
        fn scaling_law_holds(
            re in -1.0f64..1.0, im in -1.0f64..1.0,
            n in 1u32..4, frac in 0.0f64..0.9, s in 0.2f64..5.0,
        ) {
            let p = SystemParams::new(1.0, 0.2, 0.1).unwrap();
            let t = before_first_collapse(n, &p, frac);
            let (l, r) = scaling_sides(n, Complex64::new(re, im), &p, t, s, Guard::default()).unwrap();
            let ratio = l.div(&r).to_complex();
            prop_assert!((ratio - 1.0).norm() < 1e-10);
        }
    }
}
