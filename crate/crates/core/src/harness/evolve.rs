use num_complex::Complex64;

use super::config::RunConfig;
use super::table::{Cell, Table};
use super::{base_metadata, Report, RowStatus};
use crate::closed_form::{elliptic_classical_average, elliptic_quantum_average, ClosedForm};
use crate::error::Result;
use crate::exec::Execution;
use crate::fock::Oracle;
use crate::model::{EvolutionSeries, ObservableSpec, Source};

/// Series from one `evolve`/`compare` run, aligned on the config grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveRun {
    pub series: Vec<EvolutionSeries>,
    /// Oracle rows only: `|closed_form − oracle| / (|oracle| + 1e−30)`.
    pub rel_dev: Vec<Option<f64>>,
    pub oracle_dims: Vec<Option<usize>>,
    pub oracle_status: Vec<RowStatus>,
    pub report: Report,
}

impl EvolveRun {
    pub fn source(&self, source: Source) -> Option<&EvolutionSeries> {
        self.series.iter().find(|s| s.source == source)
    }

    pub fn max_rel_dev(&self) -> Option<f64> {
        self.rel_dev.iter().flatten().copied().reduce(f64::max)
    }
}

fn closed_form_point(c: &RunConfig, cf: &ClosedForm, t: f64) -> (Option<Complex64>, bool) {
    match c.observable {
        ObservableSpec::XPower(n) => match cf.xn(n, c.alpha, t) {
            Ok(v) => (Some(v), false),
            Err(_) => (None, true),
        },
        ObservableSpec::Monomial { m, q } => (Some(elliptic_quantum_average(m, q, c.alpha, &c.params, t)), false),
    }
}

fn classical_point(c: &RunConfig, cf: &ClosedForm, t: f64) -> Complex64 {
    match c.observable {
        ObservableSpec::XPower(n) => cf.classical_xn_scaled(n, c.alpha, t).to_complex(),
        ObservableSpec::Monomial { m, q } => elliptic_classical_average(m, q, c.alpha, &c.params, t),
    }
}

fn run(c: &RunConfig, command: &str, classical: bool, oracle: bool) -> Result<EvolveRun> {
    let exec = Execution::default();
    let times = c.grid.times();
    let cf = ClosedForm::new(c.params).with_guard(c.guard);
    let closed: Vec<(Option<Complex64>, bool)> = exec.map(&times, |&t| closed_form_point(c, &cf, t));
    let flags: Vec<bool> = closed.iter().map(|x| x.1).collect();

    let mut series = vec![EvolutionSeries::new(
        Source::ClosedForm,
        times.clone(),
        closed.iter().map(|x| x.0).collect(),
        flags.clone(),
    )?];
    if classical {
        let values = exec.map(&times, |&t| Some(classical_point(c, &cf, t)));
        series.push(EvolutionSeries::new(Source::Classical, times.clone(), values, flags.clone())?);
    }

    let (mut rel_dev, mut oracle_dims, mut oracle_status) = (Vec::new(), Vec::new(), Vec::new());
    if oracle {
        let o = Oracle::new(c.kind, c.params, c.oracle_settings).with_execution(exec);
        let idx: Vec<usize> = (0..times.len()).filter(|&i| !flags[i]).collect();
        let ts: Vec<f64> = idx.iter().map(|&i| times[i]).collect();
        let results = o.evaluate(c.alpha, c.observable, &ts);
        let mut values = vec![None; times.len()];
        oracle_dims = vec![None; times.len()];
        rel_dev = vec![None; times.len()];
        oracle_status = flags
            .iter()
            .map(|&f| if f { RowStatus::Flagged } else { RowStatus::Ok })
            .collect();
        for (&i, r) in idx.iter().zip(results) {
            match r {
                Ok(v) => {
                    values[i] = Some(v.value);
                    oracle_dims[i] = Some(v.dim);
                    if let Some(f) = closed[i].0 {
                        rel_dev[i] = Some((f - v.value).norm() / (v.value.norm() + 1e-30));
                    }
                }
                Err(e) => oracle_status[i] = RowStatus::of_error(&e),
            }
        }
        series.push(EvolutionSeries::new(Source::FockOracle, times.clone(), values, flags.clone())?);
    }

    let mut table = Table::new(&[
        "t",
        "re(f)",
        "im(f)",
        "source",
        "collapse_flag",
        "status",
        "rel_dev",
        "oracle_dim",
    ]);
    base_metadata(&mut table, command, c);
    table.meta("observable", Cell::Str(observable_label(c.observable)));
    table.meta("guard", Cell::Float(c.guard.relative));
    if oracle {
        table
            .meta("oracle_tol", Cell::Float(c.oracle_settings.tol))
            .meta("oracle_dim_cap", Cell::Int(c.oracle_settings.dim_cap as i64));
        let max = rel_dev.iter().flatten().copied().reduce(f64::max);
        table.meta("max_rel_dev", Cell::opt(max));
    }
    let mut worst = RowStatus::Ok;
    for s in &series {
        for i in 0..s.len() {
            let status = match s.source {
                Source::FockOracle => oracle_status[i],
                _ if s.values[i].is_none() => RowStatus::Flagged,
                _ => RowStatus::Ok,
            };
            worst = worst.max(status);
            let (dev, dim) = match s.source {
                Source::FockOracle => (Cell::opt(rel_dev[i]), oracle_dims[i].map_or(Cell::Null, |d| Cell::Int(d as i64))),
                _ => (Cell::Null, Cell::Null),
            };
            table.push(vec![
                Cell::Float(s.times[i]),
                Cell::opt(s.values[i].map(|v| v.re)),
                Cell::opt(s.values[i].map(|v| v.im)),
                Cell::str(s.source.label()),
                Cell::Bool(s.collapse_flags[i]),
                Cell::str(status.label()),
                dev,
                dim,
            ]);
        }
    }
    Ok(EvolveRun {
        series,
        rel_dev,
        oracle_dims,
        oracle_status,
        report: Report { table, worst },
    })
}

pub(crate) fn observable_label(obs: ObservableSpec) -> String {
    match obs {
        ObservableSpec::XPower(n) => format!("x^{n}"),
        ObservableSpec::Monomial { m, q } => format!("a*^{m} a^{q}"),
    }
}

/// Closed-form and classical series, plus the oracle when `c.oracle` is set.
pub fn cmd_evolve(c: &RunConfig) -> Result<EvolveRun> {
    run(c, "evolve", true, c.oracle)
}

/// Closed form against the oracle on the config grid.
pub fn cmd_compare(c: &RunConfig) -> Result<EvolveRun> {
    run(c, "compare", false, true)
}
