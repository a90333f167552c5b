//! Averages of `a†^m a^q` for `H = ω a†a + μ a†²a²`.

use num_complex::Complex64;

use crate::model::SystemParams;

/// `α*^m α^q e^{iωt(m−q) + iμħt(m(m−1) − q(q−1))} exp((e^{2iμħ(m−q)t} − 1)|α|²/ħ)`.
pub fn elliptic_quantum_average(m: u32, q: u32, alpha: Complex64, p: &SystemParams, t: f64) -> Complex64 {
    let (mf, qf) = (m as f64, q as f64);
    let d = mf - qf;
    let x = 2.0 * p.mu * p.hbar * d * t;
    // e^{ix} − 1 = −2 sin²(x/2) + i sin x, kept accurate for small x
    let s = (0.5 * x).sin();
    let em1 = Complex64::new(-2.0 * s * s, x.sin());
    let phase = p.omega * t * d + p.mu * p.hbar * t * (mf * (mf - 1.0) - qf * (qf - 1.0));
    let exponent = Complex64::new(0.0, phase) + em1 * alpha.norm_sqr() / p.hbar;
    alpha.conj().powu(m) * alpha.powu(q) * exponent.exp()
}

/// `α*^m α^q e^{i(ω + 2μ|α|²)(m−q)t}`.
pub fn elliptic_classical_average(m: u32, q: u32, alpha: Complex64, p: &SystemParams, t: f64) -> Complex64 {
    let d = m as f64 - q as f64;
    let phase = (p.omega + 2.0 * p.mu * alpha.norm_sqr()) * d * t;
    alpha.conj().powu(m) * alpha.powu(q) * Complex64::from_polar(1.0, phase)
}
