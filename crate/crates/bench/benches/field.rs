use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use vortfront_bench::region_waves;
use vortfront_core::mobius::flatten;
use vortfront_core::reduced_ode::integrate_reduced;
use vortfront_core::wave::field_grid;

fn pointwise(c: &mut Criterion) {
    let waves = region_waves(1e-3);
    let w = &waves[0].1;
    let x = 0.7 * w.length_scale();
    c.bench_function("velocity", |b| {
        b.iter(|| w.velocity(black_box(x), black_box(0.63)))
    });
    c.bench_function("velocity_via_flat", |b| {
        b.iter(|| w.velocity_via_flat(black_box(x), black_box(0.63)))
    });
    c.bench_function("stream", |b| b.iter(|| w.stream(black_box(x), black_box(0.63))));
    c.bench_function("flatten", |b| {
        b.iter(|| flatten(black_box(x), black_box(0.63), w.eta(x), w.eta_x(x), 0.5))
    });
}

fn grids(c: &mut Criterion) {
    let waves = region_waves(1e-3);
    let w = &waves[0].1;
    let mut g = c.benchmark_group("field_grid");
    for n in [51usize, 201] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| field_grid(w, n, n, 10.0).unwrap())
        });
    }
    g.finish();
}

fn reduced(c: &mut Criterion) {
    c.bench_function("integrate_reduced_homoclinic", |b| {
        b.iter(|| integrate_reduced(black_box(-1.5), 0.0, 20.0, 1e-3).unwrap())
    });
}

criterion_group!(benches, pointwise, grids, reduced);
criterion_main!(benches);
