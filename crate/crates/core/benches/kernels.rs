//! Sequential against rayon execution on the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use glcm_core::gen::random_symmetric;
use glcm_core::sl2::grid_cocycle_violation;
use glcm_core::subset::power_filtration_with;
use glcm_core::suites::{nonstd_suite, quasihom_suite};
use glcm_core::{Exec, FiniteGroup};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn subset_kernels(c: &mut Criterion) {
    let g = FiniteGroup::direct_product(&FiniteGroup::symmetric(4), &FiniteGroup::cyclic(10));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = random_symmetric(&mut rng, &g, 40);
    let b = random_symmetric(&mut rng, &g, 40);
    let x = random_symmetric(&mut rng, &g, 2);
    let mut group = c.benchmark_group("subsets");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("product", name), &exec, |bch, &e| bch.iter(|| a.product_with(&b, e).unwrap()));
        group.bench_with_input(BenchmarkId::new("power_filtration_34", name), &exec, |bch, &e| bch.iter(|| power_filtration_with(&x, 34, e).unwrap()));
    }
    group.finish();
}

fn sl2_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("sl2");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("grid_cocycle", name), &exec, |bch, &e| bch.iter(|| grid_cocycle_violation(e)));
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("quasihom_8", name), &exec, |bch, &e| bch.iter(|| quasihom_suite(1, 8, e).unwrap()));
        group.bench_with_input(BenchmarkId::new("nonstd_200", name), &exec, |bch, &e| bch.iter(|| nonstd_suite(1, 200, e).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, subset_kernels, sl2_grid, suites);
criterion_main!(benches);
