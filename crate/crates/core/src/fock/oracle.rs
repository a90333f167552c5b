use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::coherent::CoherentVector;
use super::representation::{FockRepresentation, HamiltonianKind, MIN_DIM};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{ObservableSpec, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    /// Relative change allowed under one dimension doubling.
    pub tol: f64,
    /// Largest coherent-state tail mass accepted at a dimension.
    pub tail_tol: f64,
    pub start_dim: usize,
    pub dim_cap: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            tol: 1e-8,
            tail_tol: 1e-14,
            start_dim: 64,
            dim_cap: 8192,
        }
    }
}

/// A converged oracle value: `value` at `dim`, which differed from the value
/// at `dim / 2` by the relative amount `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    pub dim: usize,
    pub delta: f64,
}

fn relative_change(new: Complex64, old: Complex64) -> f64 {
    let d = (new - old).norm();
    if d == 0.0 {
        0.0
    } else {
        d / (new.norm() + 1e-30)
    }
}

/// Truncated-basis ground truth with dimension doubling. Representations are
/// built once per dimension and shared.
#[derive(Debug)]
pub struct Oracle {
    pub kind: HamiltonianKind,
    pub params: SystemParams,
    pub settings: OracleSettings,
    exec: Execution,
    reps: Mutex<BTreeMap<usize, Arc<FockRepresentation>>>,
}

impl Oracle {
    pub fn new(kind: HamiltonianKind, params: SystemParams, settings: OracleSettings) -> Self {
        Self {
            kind,
            params,
            settings,
            exec: Execution::default(),
            reps: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn representation(&self, dim: usize) -> Result<Arc<FockRepresentation>> {
        if let Some(r) = self.reps.lock().expect("representation cache poisoned").get(&dim) {
            return Ok(Arc::clone(r));
        }
        let rep = Arc::new(FockRepresentation::new(self.kind, self.params, dim, self.exec)?);
        let mut cache = self.reps.lock().expect("representation cache poisoned");
        Ok(Arc::clone(cache.entry(dim).or_insert(rep)))
    }

    /// Values at one fixed dimension, without any convergence check.
    pub fn at_dimension(&self, alpha: Complex64, obs: ObservableSpec, times: &[f64], dim: usize) -> Result<Vec<Complex64>> {
        let rep = self.representation(dim)?;
        let v = CoherentVector::new(alpha, self.params.hbar, dim)?;
        self.exec
            .map(times, |&t| rep.expectation(&v, obs, t))
            .into_iter()
            .collect()
    }

    /// First dimension of the doubling schedule whose coherent tail is small enough.
    fn first_dimension(&self, alpha: Complex64) -> Result<usize> {
        let s = &self.settings;
        let v = CoherentVector::adaptive(alpha, self.params.hbar, s.start_dim.max(MIN_DIM), s.dim_cap, s.tail_tol)?;
        Ok(v.dim())
    }

    /// Doubles the dimension until each time's value changes by at most
    /// `tol` (relative). Times that never settle before the cap report
    /// [`Error::Convergence`] with the last change seen.
    pub fn evaluate(&self, alpha: Complex64, obs: ObservableSpec, times: &[f64]) -> Vec<Result<OracleValue>> {
        let mut out: Vec<Option<Result<OracleValue>>> = vec![None; times.len()];
        let mut dim = match self.first_dimension(alpha) {
            Ok(d) => d,
            Err(e) => return times.iter().map(|_| Err(e.clone())).collect(),
        };
        let mut pending: Vec<usize> = (0..times.len()).collect();
        let mut previous = match self.at_dimension(alpha, obs, times, dim) {
            Ok(v) => v,
            Err(e) => return times.iter().map(|_| Err(e.clone())).collect(),
        };
        let mut last_delta = vec![f64::INFINITY; times.len()];
        while !pending.is_empty() {
            let next = 2 * dim;
            if next > self.settings.dim_cap {
                break;
            }
            let ts: Vec<f64> = pending.iter().map(|&i| times[i]).collect();
            let values = match self.at_dimension(alpha, obs, &ts, next) {
                Ok(v) => v,
                Err(e) => {
                    for &i in &pending {
                        out[i] = Some(Err(e.clone()));
                    }
                    pending.clear();
                    break;
                }
            };
            let mut still = Vec::new();
            let mut carried = Vec::new();
            for (slot, &i) in pending.iter().enumerate() {
                let delta = relative_change(values[slot], previous[slot]);
                last_delta[i] = delta;
                if delta <= self.settings.tol {
                    out[i] = Some(Ok(OracleValue {
                        value: values[slot],
                        dim: next,
                        delta,
                    }));
                } else {
                    still.push(i);
                    carried.push(values[slot]);
                }
            }
            pending = still;
            previous = carried;
            dim = next;
        }
        for i in pending {
            out[i] = Some(Err(Error::Convergence {
                dim,
                delta: last_delta[i],
                tol: self.settings.tol,
            }));
        }
        out.into_iter().map(|r| r.expect("every time resolved")).collect()
    }

    pub fn evaluate_one(&self, alpha: Complex64, obs: ObservableSpec, t: f64) -> Result<OracleValue> {
        self.evaluate(alpha, obs, &[t]).remove(0)
    }
}

/// Smallest dimension of the schedule `64, 128, …, 8192` at which `⟨x̂⟩` for
/// the hyperbolic Hamiltonian changes by less than `tol` under one more
/// doubling, on five probe times spanning `[0, t_max]`.
pub fn adaptive_dimension(alpha: Complex64, p: &SystemParams, t_max: f64, tol: f64) -> Result<usize> {
    let settings = OracleSettings {
        tol,
        ..OracleSettings::default()
    };
    adaptive_dimension_with(HamiltonianKind::Hyperbolic, ObservableSpec::XPower(1), alpha, p, t_max, settings)
}

/// [`adaptive_dimension`] for any Hamiltonian, observable and schedule.
pub fn adaptive_dimension_with(
    kind: HamiltonianKind,
    obs: ObservableSpec,
    alpha: Complex64,
    p: &SystemParams,
    t_max: f64,
    settings: OracleSettings,
) -> Result<usize> {
    if !(settings.tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let probes: Vec<f64> = (0..5).map(|k| t_max * k as f64 / 4.0).collect();
    let oracle = Oracle::new(kind, *p, settings);
    let results = oracle.evaluate(alpha, obs, &probes);
    let mut dim = 0;
    for r in results {
        dim = dim.max(r?.dim / 2);
    }
    Ok(dim.max(settings.start_dim.max(MIN_DIM)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_converges_at_first_dimension() {
        let p = SystemParams::new(1.0, 0.0, 0.1).unwrap();
        let d = adaptive_dimension(Complex64::new(0.0, 0.0), &p, 0.5, 1e-10).unwrap();
        assert_eq!(d, 64);
    }

    #[test]
    fn collapse_defeats_truncation() {
        let p = SystemParams::new(1.0, 0.1, 0.1).unwrap();
        let settings = OracleSettings {
            dim_cap: 256,
            ..OracleSettings::default()
        };
        let r = adaptive_dimension_with(
            HamiltonianKind::Hyperbolic,
            ObservableSpec::XPower(2),
            Complex64::new(0.0, 1.0),
            &p,
            25.0 * std::f64::consts::PI / 8.0 * 0.99,
            settings,
        );
        assert!(matches!(r, Err(Error::Convergence { .. })));
    }

    #[test]
    fn cache_reuses_representations() {
        let p = SystemParams::new(1.0, 0.1, 0.05).unwrap();
        let o = Oracle::new(HamiltonianKind::Hyperbolic, p, OracleSettings::default());
        let a = o.representation(64).unwrap();
        let b = o.representation(64).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
