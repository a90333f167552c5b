use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Collapse guard, as a fraction of the collapse-time spacing `π/(8|μ|nħ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guard {
    pub relative: f64,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { relative: 1e-6 }
    }
}

impl Guard {
    pub fn relative(relative: f64) -> Self {
        Guard { relative }
    }

    /// Guard width `ε_t` in time units; zero when `μ = 0`.
    pub fn width(&self, n: u32, p: &SystemParams) -> f64 {
        match spacing(n, p) {
            Some(s) => self.relative * s.abs(),
            None => 0.0,
        }
    }

    pub fn check(&self, n: u32, p: &SystemParams, t: f64) -> Result<()> {
        if let Some(tc) = nearest_collapse(n, p, t) {
            let eps = self.width(n, p);
            if (t - tc).abs() <= eps {
                return Err(Error::CollapseProximity {
                    t,
                    collapse: tc,
                    guard: eps,
                    n,
                });
            }
        }
        Ok(())
    }

    pub fn is_flagged(&self, n: u32, p: &SystemParams, t: f64) -> bool {
        self.check(n, p, t).is_err()
    }
}

/// Signed spacing `π/(8μnħ)` between consecutive collapse times.
fn spacing(n: u32, p: &SystemParams) -> Option<f64> {
    if p.mu == 0.0 || n == 0 {
        None
    } else {
        Some(PI / (8.0 * p.mu * n as f64 * p.hbar))
    }
}

/// Collapse time `π/(16μnħ) + ℓπ/(8μnħ)` closest to `t`.
pub fn nearest_collapse(n: u32, p: &SystemParams, t: f64) -> Option<f64> {
    let s = spacing(n, p)?;
    let ell = (t / s - 0.5).round();
    Some((ell + 0.5) * s)
}

/// All collapse times of `x̂^n` inside `[t_min, t_max]`, ascending.
/// Empty when `μ = 0`.
pub fn collapse_times(n: u32, p: &SystemParams, window: (f64, f64)) -> Vec<f64> {
    let Some(s) = spacing(n, p) else {
        return Vec::new();
    };
    let (lo, hi) = window;
    if !(lo <= hi) {
        return Vec::new();
    }
    let a = lo / s - 0.5;
    let b = hi / s - 0.5;
    let (lmin, lmax) = (a.min(b).ceil() as i64, a.max(b).floor() as i64);
    let mut out: Vec<f64> = (lmin..=lmax)
        .map(|l| (l as f64 + 0.5) * s)
        .filter(|t| *t >= lo && *t <= hi)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// `t_ℓ` for a given `ℓ`.
pub fn collapse_time(n: u32, p: &SystemParams, ell: i64) -> Option<f64> {
    spacing(n, p).map(|s| (ell as f64 + 0.5) * s)
}
