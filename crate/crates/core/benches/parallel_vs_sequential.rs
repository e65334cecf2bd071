use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quadric_clutch::par::Execution;
use quadric_clutch::suite::{run_suite_with, Suite};
use quadric_clutch::suslin::{alpha_on_quadric, suslin_alpha};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn determinants(c: &mut Criterion) {
    let mut group = c.benchmark_group("det");
    group.sample_size(10);
    for n in [3, 4] {
        let alpha = alpha_on_quadric(n).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, format!("alpha{n}")), &alpha, |b, m| {
                b.iter(|| m.det_with(exec).unwrap())
            });
        }
    }
    group.finish();
}

fn adjugates(c: &mut Criterion) {
    let mut group = c.benchmark_group("adjugate");
    group.sample_size(10);
    let alpha = alpha_on_quadric(3).unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| alpha.adjugate_with(exec).unwrap()));
    }
    group.finish();
}

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul_alpha5");
    let alpha = suslin_alpha(5).unwrap();
    let t = alpha.transpose();
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| alpha.mul_with(&t, exec).unwrap()));
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for suite in [Suite::Poly, Suite::All] {
        for (name, exec) in MODES {
            group.bench_function(BenchmarkId::new(name, suite), |b| {
                b.iter(|| run_suite_with(suite, 7, exec))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, determinants, adjugates, products, suites);
criterion_main!(benches);
