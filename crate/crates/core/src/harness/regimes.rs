use super::config::RunConfig;
use super::table::{Cell, Table};
use super::{base_metadata, Report, RowStatus};
use crate::closed_form::ClosedForm;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::HamiltonianKind;

/// Regime label, exact and leading-order dispersion at each grid time.
/// Rows outside every regime are labelled `none`; rows inside a collapse
/// guard keep their label and carry no exact value.
pub fn cmd_dispersion_regimes(c: &RunConfig) -> Result<Report> {
    if c.kind != HamiltonianKind::Hyperbolic {
        return Err(Error::domain("dispersion-regimes needs the hyperbolic Hamiltonian"));
    }
    let cf = ClosedForm::new(c.params).with_guard(c.guard);
    let times = c.grid.times();
    let rows = Execution::default().map(&times, |&t| {
        let regime = c.regime.classify(c.alpha, &c.params, t);
        let exact = cf.dispersion(c.alpha, t).ok();
        let approx = regime.and_then(|r| c.regime.approx(c.alpha, &c.params, t, r).ok());
        (t, regime, exact, approx)
    });

    let mut table = Table::new(&[
        "t",
        "regime",
        "re(D_exact)",
        "im(D_exact)",
        "re(D_approx)",
        "im(D_approx)",
        "rel_gap",
        "collapse_flag",
        "status",
    ]);
    base_metadata(&mut table, "dispersion-regimes", c);
    table
        .meta("regime_ratio", Cell::Float(c.regime.ratio))
        .meta("regime_slack", Cell::Float(c.regime.slack))
        .meta("crossover_band", Cell::Float(c.regime.crossover_band));
    for (t, regime, exact, approx) in rows {
        let gap = match (exact, approx) {
            (Some(e), Some(a)) => Some((a - e).norm() / e.norm()),
            _ => None,
        };
        let status = if exact.is_some() { RowStatus::Ok } else { RowStatus::Flagged };
        table.push(vec![
            Cell::Float(t),
            Cell::str(regime.map_or("none", |r| r.label())),
            Cell::opt(exact.map(|z| z.re)),
            Cell::opt(exact.map(|z| z.im)),
            Cell::opt(approx.map(|z| z.re)),
            Cell::opt(approx.map(|z| z.im)),
            Cell::opt(gap),
            Cell::Bool(exact.is_none()),
            Cell::str(status.label()),
        ]);
    }
    Ok(Report {
        table,
        worst: RowStatus::Ok,
    })
}
