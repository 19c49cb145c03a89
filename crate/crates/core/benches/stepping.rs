//! Stepping-kernel benchmarks. Benchmark IDs carry the build mode, so
//! comparing the data-parallel core against the sequential fallback is two
//! runs of the same suite:
//!
//! ```text
//! cargo bench -p singshock-core                          # parallel (default)
//! cargo bench -p singshock-core --no-default-features    # sequential
//! ```

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use singshock_core::{
    discretize_initial, full_step, run_simulation, GridSpec, InitialData, RiemannData,
    SchemeParams, StateField, SystemDefinition,
};

const MODE: &str = if cfg!(feature = "parallel") {
    "parallel"
} else {
    "sequential"
};

/// Colliding pressureless data: a developing delta shock keeps the
/// velocity field non-trivial across the whole domain.
fn delta_state(n_cells: usize) -> StateField {
    let grid = GridSpec::with_cell_count(-1.0, 1.0, n_cells).unwrap();
    let data = InitialData::Riemann(RiemannData::new(1.0, 1.0, -1.0, 1.0));
    discretize_initial(&data, &grid).unwrap()
}

/// Singular-shock cubic-system data, the more expensive flux evaluation.
fn singular_state(n_cells: usize) -> StateField {
    let grid = GridSpec::with_cell_count(-4.0, 4.0, n_cells).unwrap();
    let data = InitialData::Riemann(RiemannData::new(1.5, 0.0, -2.065426, 1.410639));
    discretize_initial(&data, &grid).unwrap()
}

fn bench_full_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_step");
    for &n in &[1_024usize, 16_384, 131_072] {
        group.throughput(Throughput::Elements(n as u64));

        let state = delta_state(n);
        let system = SystemDefinition::korchinski();
        let params = SchemeParams::fixed(0.45, 1.0);
        group.bench_with_input(
            BenchmarkId::new(format!("korchinski/{MODE}"), n),
            &n,
            |b, _| b.iter(|| full_step(&state, &system, &params).unwrap()),
        );

        let state = singular_state(n);
        let system = SystemDefinition::keyfitz_kranzer();
        let params = SchemeParams::fixed(0.2, 1.0).with_alpha(0.2);
        group.bench_with_input(
            BenchmarkId::new(format!("keyfitz-kranzer/{MODE}"), n),
            &n,
            |b, _| b.iter(|| full_step(&state, &system, &params).unwrap()),
        );
    }
    group.finish();
}

fn bench_short_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_200_steps");
    group.sample_size(20);
    let n = 8_192usize;
    group.throughput(Throughput::Elements(200 * n as u64));

    let ic = delta_state(n);
    let system = SystemDefinition::korchinski();
    // 200 steps of size dt = r * h.
    let dt = 0.45 * ic.grid().h();
    let params = SchemeParams::fixed(0.45, 200.0 * dt);
    group.bench_function(BenchmarkId::new(format!("korchinski/{MODE}"), n), |b| {
        b.iter(|| {
            let mut observers = [];
            run_simulation(&ic, &system, &params, &mut observers).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_full_step, bench_short_run);
criterion_main!(benches);
