use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hemisystem::charsum::{gauss_sum, MultChar};
use hemisystem::construct::build_point_set;
use hemisystem::geometry::{enumerate_lines, quadric_points};
use hemisystem::verify::{character_values, check_line_intersections};
use hemisystem::{build_field, Level};
use hemisystem_bench::fixture;

fn field_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("field_build");
    g.sample_size(10);
    for q in [3u64, 7, 11] {
        g.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, &q| {
            b.iter(|| build_field(q, 1).unwrap())
        });
    }
    g.finish();
}

fn lines(c: &mut Criterion) {
    let mut g = c.benchmark_group("lines");
    g.sample_size(10);
    for q in [3u64, 7] {
        let (ctx, desc) = fixture(q);
        let points = quadric_points(&ctx);
        g.bench_with_input(BenchmarkId::new("enumerate", q), &q, |b, _| {
            b.iter(|| enumerate_lines(&ctx, &points))
        });
        let lines = enumerate_lines(&ctx, &points);
        let m = build_point_set(&ctx, &desc).unwrap();
        g.bench_with_input(BenchmarkId::new("intersections", q), &q, |b, _| {
            b.iter(|| check_line_intersections(&m, &points, &lines, desc.m() as usize))
        });
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("character_spectrum");
    g.sample_size(10);
    for q in [3u64, 7, 11] {
        let (ctx, desc) = fixture(q);
        g.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, _| {
            b.iter(|| character_values(&ctx, &desc).unwrap())
        });
    }
    g.finish();
}

fn gauss(c: &mut Criterion) {
    let mut g = c.benchmark_group("gauss_sum_top");
    g.sample_size(10);
    for q in [7u64, 11] {
        let ctx = build_field(q, 1).unwrap();
        let chi = MultChar::new(&ctx, Level::Top, 4, 1).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, _| {
            b.iter(|| gauss_sum(&ctx, &chi).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, field_build, lines, spectrum, gauss);
criterion_main!(benches);
