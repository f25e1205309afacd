use std::hint::black_box;

use axicorr::correlations::{lqfi_oracle, lqu_oracle};
use axicorr::{
    build_model_hamiltonian, correlations, gibbs_state, run_sweep, AState, ModelParams, SpinLength, SweepConfig,
    Temperature,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn closed_form_vs_dense(c: &mut Criterion) {
    let mut group = c.benchmark_group("measures");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for two_s in [1, 3, 6] {
        let rho = AState::random(SpinLength::from_two_s(two_s).unwrap(), &mut rng);
        group.bench_with_input(BenchmarkId::new("closed_form", two_s), &rho, |b, rho| {
            b.iter(|| correlations(black_box(rho)))
        });
        group.bench_with_input(BenchmarkId::new("dense", two_s), &rho, |b, rho| {
            b.iter(|| (lqu_oracle(black_box(rho)), lqfi_oracle(black_box(rho))))
        });
    }
    group.finish();
}

fn gibbs(c: &mut Criterion) {
    let p = ModelParams {
        b1: -0.65,
        b2: 0.9,
        j: -1.3,
        jz: -1.0,
        k1: 0.4,
        k2: -1.02,
        dz: -0.3,
    };
    let mut group = c.benchmark_group("gibbs_state");
    for two_s in [2, 5, 10] {
        let (_, h) = build_model_hamiltonian(&p, SpinLength::from_two_s(two_s).unwrap());
        group.bench_with_input(BenchmarkId::from_parameter(two_s), &h, |b, h| {
            b.iter(|| gibbs_state(black_box(h), Temperature::Finite(0.7)))
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let config = SweepConfig {
        s: SpinLength::from_two_s(3).unwrap(),
        params: ModelParams {
            b2: -0.8,
            j: 1.0,
            jz: 0.3,
            ..Default::default()
        },
        t_min: 0.01,
        t_max: 3.0,
        n_points: 600,
        grid: axicorr::sweep::Grid::Linear,
        renormalize: false,
    };
    c.bench_function("sweep_600", |b| b.iter(|| run_sweep(black_box(&config))));
}

criterion_group!(benches, closed_form_vs_dense, gibbs, sweep);
criterion_main!(benches);
