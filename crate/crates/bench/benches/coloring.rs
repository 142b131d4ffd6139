use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nicolor::base::{edge_color_2delta_minus_1, linial_coloring};
use nicolor::harness::{bipartite, random_gnd};
use nicolor::{build_line_graph, defective_color, edge_color_direct, legal_color};
use nicolor::{DefectiveParams, LegalParams, MsgMode, PhiMode, SimConfig, Simulator};
use std::hint::black_box;

fn line_of_kdd(d: usize) -> nicolor::Graph {
    build_line_graph(&bipartite(d, d).unwrap()).lg
}

fn bench_linial(c: &mut Criterion) {
    let sim = Simulator::new(SimConfig::default());
    let mut group = c.benchmark_group("linial");
    for d in [8, 32] {
        let g = random_gnd(2000, d, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &g, |b, g| {
            b.iter(|| black_box(linial_coloring(g, &sim).unwrap()))
        });
    }
    group.finish();
}

fn bench_defective(c: &mut Criterion) {
    let sim = Simulator::new(SimConfig::default());
    let g = line_of_kdd(17);
    let params = DefectiveParams { b: 2, p: 8, big_lambda: 32, c: 2 };
    c.bench_function("defective/L(K17,17)", |b| {
        b.iter(|| black_box(defective_color(&g, &params, PhiMode::Fast, &sim).unwrap()))
    });
}

fn bench_legal(c: &mut Criterion) {
    let sim = Simulator::new(SimConfig::default());
    let mut group = c.benchmark_group("legal");
    group.sample_size(10);
    for d in [17, 33] {
        let g = line_of_kdd(d);
        let params = LegalParams::custom(2, 9, 8, g.delta() as u64, 2).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &g, |b, g| {
            b.iter(|| black_box(legal_color(g, &params, PhiMode::Fast, &sim).unwrap()))
        });
    }
    group.finish();
}

fn bench_edges(c: &mut Criterion) {
    let sim = Simulator::new(SimConfig::default());
    let g = random_gnd(400, 17, 3).unwrap();
    let line_deg = build_line_graph(&g).lg.delta() as u64;
    let params = LegalParams::custom(2, 9, 8, line_deg, 2).unwrap();
    let mut group = c.benchmark_group("edges");
    group.sample_size(10);
    group.bench_function("2delta-1", |b| b.iter(|| black_box(edge_color_2delta_minus_1(&g, &sim).unwrap())));
    group.bench_function("direct/short", |b| {
        b.iter(|| black_box(edge_color_direct(&g, &params, MsgMode::Short, &sim).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_linial, bench_defective, bench_legal, bench_edges);
criterion_main!(benches);
