use std::f64::consts::PI;

use super::config::RunConfig;
use super::table::{Cell, Table};
use super::{base_metadata, Report, RowStatus};
use crate::closed_form::{collapse_time, ClosedForm};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::HamiltonianKind;
use crate::model::ObservableSpec;

/// Approach exponents `k`: samples at `t_ℓ − |t_ℓ|·10^{−k}`.
pub const APPROACH: std::ops::RangeInclusive<i32> = 2..=6;

/// `increasing`, `decreasing` or `mixed` for a sequence of `ln |f|`.
fn trend(lns: &[Option<f64>]) -> &'static str {
    let Some(v) = lns.iter().copied().collect::<Option<Vec<f64>>>() else {
        return "mixed";
    };
    if v.windows(2).all(|w| w[1] > w[0]) {
        "increasing"
    } else if v.windows(2).all(|w| w[1] < w[0]) {
        "decreasing"
    } else {
        "mixed"
    }
}

/// `|f|` on the left approach to each collapse time `t_ℓ`, `ℓ` in
/// `c.ell_range`. Uses `c.scan_guard`, which must be narrower than the
/// closest approach for the samples to be evaluated.
///
/// Where `cos 8μnħt` changes sign from + to − at `t_ℓ` (even `ℓ` for
/// `μħ > 0`) the left approach blows up; otherwise it decays to zero.
pub fn cmd_collapse_scan(c: &RunConfig) -> Result<Report> {
    if c.kind != HamiltonianKind::Hyperbolic {
        return Err(Error::domain("collapse-scan needs the hyperbolic Hamiltonian"));
    }
    if c.params.mu == 0.0 {
        return Err(Error::domain("no collapse times when mu = 0"));
    }
    let ObservableSpec::XPower(n) = c.observable else {
        return Err(Error::domain("collapse-scan needs observable = xpower"));
    };
    let cf = ClosedForm::new(c.params).with_guard(c.scan_guard);
    let ells: Vec<i64> = (c.ell_range.0..=c.ell_range.1).collect();
    let per_ell = Execution::default().map(&ells, |&ell| {
        let t_ell = collapse_time(n, &c.params, ell).expect("mu != 0");
        let samples: Vec<(i32, f64, Result<f64>)> = APPROACH
            .map(|k| {
                let t = t_ell - t_ell.abs() * 10f64.powi(-k);
                (k, t, cf.xn_scaled(n, c.alpha, t).map(|v| v.ln_abs()))
            })
            .collect();
        (ell, t_ell, samples)
    });

    let mut table = Table::new(&["ell", "t_ell", "k", "t", "abs_f", "ln_abs_f", "trend", "status"]);
    base_metadata(&mut table, "collapse-scan", c);
    table
        .meta("n", Cell::Int(n as i64))
        .meta("spacing", Cell::Float(PI / (8.0 * c.params.mu * n as f64 * c.params.hbar)))
        .meta("scan_guard", Cell::Float(c.scan_guard.relative));
    let mut worst = RowStatus::Ok;
    for (ell, t_ell, samples) in per_ell {
        let lns: Vec<Option<f64>> = samples.iter().map(|s| s.2.as_ref().ok().copied()).collect();
        let trend = trend(&lns);
        for ((k, t, r), ln) in samples.iter().zip(&lns) {
            let status = match r {
                Ok(_) => RowStatus::Ok,
                Err(e) => RowStatus::of_error(e),
            };
            worst = worst.max(status);
            table.push(vec![
                Cell::Int(ell),
                Cell::Float(t_ell),
                Cell::Int(*k as i64),
                Cell::Float(*t),
                Cell::opt(ln.map(f64::exp)),
                Cell::opt(*ln),
                Cell::str(trend),
                Cell::str(status.label()),
            ]);
        }
    }
    Ok(Report { table, worst })
}
