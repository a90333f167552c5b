use num_complex::Complex64;

use super::config::{BreakdownMode, RunConfig, TimeGrid};
use super::table::{Cell, Table};
use super::{base_metadata, Report, RowStatus};
use crate::closed_form::{ClosedForm, Guard};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::HamiltonianKind;
use crate::model::SystemParams;

/// Bisection stops once the bracket is this fraction of the grid spacing.
pub const BISECTION_REL: f64 = 1e-4;

/// Ordinary least squares `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub r2: f64,
}

impl LinearFit {
    pub fn fit(xs: &[f64], ys: &[f64]) -> Option<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return None;
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        if sxx == 0.0 {
            return None;
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss_res: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        let r2 = if syy == 0.0 {
            if ss_res == 0.0 {
                1.0
            } else {
                f64::NAN
            }
        } else {
            1.0 - ss_res / syy
        };
        Some(Self { intercept, slope, r2 })
    }
}

/// Breakdown times per `ħ` with the log fit `t* = a + b·ln(1/ħ)` and the
/// power fit `ln t* = ln C + k·ln ħ`. Fits need at least four found times.
#[derive(Debug, Clone, PartialEq)]
pub struct EhrenfestFit {
    pub hbar_values: Vec<f64>,
    pub breakdown_times: Vec<Result<f64>>,
    pub log_fit: Option<LinearFit>,
    pub power_fit: Option<LinearFit>,
}

impl EhrenfestFit {
    pub fn found(&self) -> Vec<(f64, f64)> {
        self.hbar_values
            .iter()
            .zip(&self.breakdown_times)
            .filter_map(|(h, t)| t.as_ref().ok().map(|t| (*h, *t)))
            .collect()
    }

    fn from_times(hbar_values: Vec<f64>, breakdown_times: Vec<Result<f64>>) -> Self {
        let mut fit = Self {
            hbar_values,
            breakdown_times,
            log_fit: None,
            power_fit: None,
        };
        let pts = fit.found();
        if pts.len() >= 4 {
            let xs: Vec<f64> = pts.iter().map(|(h, _)| (1.0 / h).ln()).collect();
            let ys: Vec<f64> = pts.iter().map(|(_, t)| *t).collect();
            fit.log_fit = LinearFit::fit(&xs, &ys);
            if pts.iter().all(|(_, t)| *t > 0.0) {
                let lx: Vec<f64> = pts.iter().map(|(h, _)| h.ln()).collect();
                let ly: Vec<f64> = ys.iter().map(|t| t.ln()).collect();
                fit.power_fit = LinearFit::fit(&lx, &ly);
            }
        }
        fit
    }
}

/// Breakdown indicator at `t`; `None` inside a collapse guard.
fn indicator(mode: BreakdownMode, cf: &ClosedForm, alpha: Complex64, t: f64) -> Option<f64> {
    match mode {
        BreakdownMode::Deviation => {
            let f = cf.xn_scaled(1, alpha, t).ok()?;
            let cl = cf.classical_xn_scaled(1, alpha, t);
            Some((f.div(&cl).to_complex() - 1.0).norm())
        }
        BreakdownMode::Dispersion => cf.dispersion_scaled(alpha, t).ok().map(|d| d.ln_abs().exp()),
    }
}

/// Smallest time on `grid`, refined by bisection, where the indicator
/// reaches `threshold`.
pub fn breakdown_time(
    mode: BreakdownMode,
    p: &SystemParams,
    alpha: Complex64,
    grid: &TimeGrid,
    threshold: f64,
    guard: Guard,
) -> Result<f64> {
    let cf = ClosedForm::new(*p).with_guard(guard);
    let reached = |t: f64| indicator(mode, &cf, alpha, t).is_some_and(|d| d >= threshold);
    let times = grid.times();
    let Some(k) = times.iter().position(|&t| reached(t)) else {
        return Err(Error::BreakdownNotFound {
            hbar: p.hbar,
            t_max: grid.t_max,
        });
    };
    if k == 0 {
        return Ok(times[0]);
    }
    let (mut lo, mut hi) = (times[k - 1], times[k]);
    let width = BISECTION_REL * (hi - lo);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if reached(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Breakdown time for every `ħ` in `c.hbar_list` and the two fits.
pub fn cmd_ehrenfest(c: &RunConfig) -> Result<(EhrenfestFit, Report)> {
    if c.kind != HamiltonianKind::Hyperbolic {
        return Err(Error::domain("ehrenfest needs the hyperbolic Hamiltonian"));
    }
    let times = Execution::default().map(&c.hbar_list, |&h| {
        let p = SystemParams::new(c.params.omega, c.params.mu, h)?;
        p.require_hyperbolic()?;
        breakdown_time(c.breakdown, &p, c.alpha, &c.grid, c.threshold, c.guard)
    });
    let fit = EhrenfestFit::from_times(c.hbar_list.clone(), times);

    let mut table = Table::new(&["hbar", "t_star", "status"]);
    base_metadata(&mut table, "ehrenfest", c);
    let mode = match c.breakdown {
        BreakdownMode::Deviation => "deviation",
        BreakdownMode::Dispersion => "dispersion",
    };
    table
        .meta("breakdown", Cell::str(mode))
        .meta("threshold", Cell::Float(c.threshold))
        .meta("t_max", Cell::Float(c.grid.t_max))
        .meta("points", Cell::Int(c.grid.points as i64));
    let lf = fit.log_fit;
    let pf = fit.power_fit;
    table
        .meta("log_fit_a", Cell::opt(lf.map(|f| f.intercept)))
        .meta("log_fit_b", Cell::opt(lf.map(|f| f.slope)))
        .meta("log_fit_r2", Cell::opt(lf.map(|f| f.r2)))
        .meta("power_fit_prefactor", Cell::opt(pf.map(|f| f.intercept.exp())))
        .meta("power_fit_exponent", Cell::opt(pf.map(|f| f.slope)))
        .meta("power_fit_r2", Cell::opt(pf.map(|f| f.r2)));
    let mut worst = RowStatus::Ok;
    for (h, t) in fit.hbar_values.iter().zip(&fit.breakdown_times) {
        let (cell, status) = match t {
            Ok(t) => (Cell::Float(*t), RowStatus::Ok),
            Err(e) => (Cell::Null, RowStatus::of_error(e)),
        };
        worst = worst.max(status);
        table.push(vec![Cell::Float(*h), cell, Cell::str(status.label())]);
    }
    Ok((fit, Report { table, worst }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = LinearFit::fit(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert_eq!(f.r2, 1.0);
        assert!(LinearFit::fit(&[1.0, 1.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn dispersion_mode_matches_linear_growth() {
        // μ = 0: D = (ħ/2) e^{4ωt}, so D = 1 at t = ln(2/ħ)/4
        let p = SystemParams::new(1.0, 0.0, 1e-3).unwrap();
        let grid = TimeGrid::new(0.0, 5.0, 51).unwrap();
        let t = breakdown_time(BreakdownMode::Dispersion, &p, Complex64::new(1.0, 0.0), &grid, 1.0, Guard::default())
            .unwrap();
        let want = (2.0f64 / 1e-3).ln() / 4.0;
        assert!((t - want).abs() <= 1e-4 * 0.1 + 1e-12, "{t} vs {want}");
    }
}
