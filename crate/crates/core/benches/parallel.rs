//! Parallel batch runner against its sequential fallback, plus frame
//! solver scaling. Build with `--no-default-features` to measure the
//! all-sequential configuration of `run_batch` itself.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dcswitch::combinat::solve_t_disjoint_max_weight;
use dcswitch::matrix::SquareMatrix;
use dcswitch::rational::rational;
use dcswitch::schedulers::PolicyKind;
use dcswitch::sim::{num_derived_target, run_batch, run_batch_serial, RunSpec};
use dcswitch::switch::SwitchConfig;

fn batch_specs(runs: u64) -> Vec<RunSpec> {
    let config = SwitchConfig::new(4, 2).unwrap();
    (0..runs)
        .map(|seed| {
            let (_, target) = num_derived_target(&config, seed).unwrap();
            RunSpec {
                config,
                target,
                policy: PolicyKind::Tmwm,
                seed,
                horizon_slots: 2_000,
                checkpoint_interval: 500,
            }
        })
        .collect()
}

fn bench_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch_runs");
    for runs in [4u64, 16] {
        let specs = batch_specs(runs);
        group.bench_with_input(BenchmarkId::new("parallel", runs), &specs, |b, specs| {
            b.iter(|| run_batch(specs).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("serial", runs), &specs, |b, specs| {
            b.iter(|| run_batch_serial(specs).unwrap())
        });
    }
    group.finish();
}

fn bench_frame_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("frame_solver");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [4usize, 8, 16] {
        let weights = SquareMatrix::from_fn(n, |_, _| rational(rng.gen_range(0..=100), 1));
        group.bench_with_input(BenchmarkId::from_parameter(n), &weights, |b, w| {
            b.iter(|| solve_t_disjoint_max_weight(w, 4).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_batch, bench_frame_solver);
criterion_main!(benches);
