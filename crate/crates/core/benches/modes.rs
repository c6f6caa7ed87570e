//! Parallel-vs-sequential benchmarks.
//!
//! Group names carry the active execution mode, so running
//! `cargo bench` (parallel, the default) and
//! `cargo bench --no-default-features` (sequential) produces directly
//! comparable reports for the same workloads.

use criterion::{criterion_group, criterion_main, Criterion};

use wtc_core::exec;
use wtc_core::sample::{random_matrix, rng};
use wtc_core::scenarios::{genus_one_instance, theta_instance};
use wtc_core::witten::{ke_class, n0_bound, total_complex};

fn bench_linalg(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("{}/linalg", exec::mode()));
    let mut r = rng(7);
    let m = random_matrix(&mut r, 120, 120, 3);
    group.bench_function("rank-120", |b| b.iter(|| std::hint::black_box(m.rank())));
    let wide = random_matrix(&mut r, 60, 180, 3);
    group.bench_function("kernel-60x180", |b| {
        b.iter(|| std::hint::black_box(wide.kernel_basis().len()))
    });
    group.finish();
}

fn bench_euler(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("{}/euler", exec::mode()));
    group.sample_size(10);
    let theta2 = theta_instance(2);
    group.bench_function("ke-theta-2", |b| {
        b.iter(|| std::hint::black_box(ke_class(&theta2).unwrap().virtual_rank))
    });
    let theta3 = theta_instance(3);
    group.bench_function("ke-theta-3", |b| {
        b.iter(|| std::hint::black_box(ke_class(&theta3).unwrap().virtual_rank))
    });
    let g5 = genus_one_instance(5);
    group.bench_function("ke-genus-one-5", |b| {
        b.iter(|| std::hint::black_box(ke_class(&g5).unwrap().virtual_rank))
    });
    group.finish();
}

fn bench_total_slices(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("{}/total-complex", exec::mode()));
    group.sample_size(10);
    let inst = theta_instance(3);
    let n0 = n0_bound(inst.complex(), inst.m());
    group.bench_function("slices-theta-3", |b| {
        b.iter(|| {
            let t = total_complex(&inst, 1, n0 + 3).unwrap();
            std::hint::black_box(t.dims.len())
        })
    });
    group.finish();
}

criterion_group!(benches, bench_linalg, bench_euler, bench_total_slices);
criterion_main!(benches);
