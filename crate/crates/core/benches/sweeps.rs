use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use qavg_core::closed_form::{ClosedForm, Guard};
use qavg_core::exec::Execution;
use qavg_core::fock::{HamiltonianKind, Oracle, OracleSettings};
use qavg_core::harness::{breakdown_time, BreakdownMode, TimeGrid};
use qavg_core::{ObservableSpec, SystemParams};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn time_grid(c: &mut Criterion) {
    let p = SystemParams::new(1.0, 0.1, 0.05).unwrap();
    let cf = ClosedForm::new(p);
    let alpha = Complex64::new(0.5, 0.3);
    let times: Vec<f64> = (0..4096).map(|k| 30.0 * k as f64 / 4096.0).collect();
    let mut g = c.benchmark_group("closed_form_grid_x4");
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| exec.map(&times, |&t| cf.xn(4, black_box(alpha), t).ok()))
        });
    }
    g.finish();
}

fn oracle_dimension(c: &mut Criterion) {
    let p = SystemParams::new(1.0, 0.1, 0.05).unwrap();
    let alpha = Complex64::new(0.5, 0.3);
    let times = [0.1, 0.2, 0.3, 0.4];
    let mut g = c.benchmark_group("oracle_at_dimension");
    g.sample_size(10);
    for dim in [256, 512] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, dim), &dim, |b, &dim| {
                b.iter(|| {
                    // fresh oracle: the spectral decomposition is part of the cost
                    let o = Oracle::new(HamiltonianKind::Hyperbolic, p, OracleSettings::default()).with_execution(exec);
                    o.at_dimension(alpha, ObservableSpec::XPower(1), &times, dim).unwrap()
                })
            });
        }
    }
    g.finish();
}

fn hbar_sweep(c: &mut Criterion) {
    let hbars = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 1e-6];
    let grid = TimeGrid::new(0.0, 5000.0, 5001).unwrap();
    let alpha = Complex64::new(1.0, 0.0);
    let mut g = c.benchmark_group("ehrenfest_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                exec.map(&hbars, |&h| {
                    let p = SystemParams::new(1.0, 0.05, h).unwrap();
                    breakdown_time(BreakdownMode::Deviation, &p, alpha, &grid, 1.0, Guard::default()).ok()
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, time_grid, oracle_dimension, hbar_sweep);
criterion_main!(benches);
