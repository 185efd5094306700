use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use wsobolev::admissible::{Grid, RadiusField, Sampler};
use wsobolev::manifold::{builtin, BuiltinKind};
use wsobolev::norms::{lp_norm, Numerics, Weight};
use wsobolev::region::{BoxRegion, Region};
use wsobolev::verify::suites::window_suite;
use wsobolev::Exec;

fn policies() -> Vec<(&'static str, Exec)> {
    vec![("sequential", Exec::Sequential), ("parallel", Exec::default())]
}

fn radius_field(c: &mut Criterion) {
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.3, 0.0], &[0.2, 0.2]).unwrap();
    let grid = Grid::uniform(m.window(), 12);
    let sampler = Sampler::standard(2);
    let mut group = c.benchmark_group("radius_field");
    group.sample_size(10);
    for (name, exec) in policies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| RadiusField::on_grid(&m, &grid, 1, 0.1, &sampler, exec).unwrap())
        });
    }
    group.finish();
}

fn weighted_norm(c: &mut Criterion) {
    let m = builtin(BuiltinKind::PoincareBall, 3, &[], &[0.2, 0.0, 0.0], &[0.2, 0.2, 0.2]).unwrap();
    let field =
        RadiusField::on_grid(&m, &Grid::uniform(m.window(), 4), 0, 0.1, &Sampler::standard(3), Exec::default()).unwrap();
    let u = window_suite(&m, 1, 1, 0.6, 0).unwrap().remove(0);
    let region = Region::Box(BoxRegion::new(m.window().lo(), m.window().hi()));
    let mut group = c.benchmark_group("lp_norm");
    group.sample_size(10);
    for (name, exec) in policies() {
        let num = Numerics::with_nodes(32, exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &num, |b, num| {
            b.iter(|| lp_norm(&m, &u, &region, 2.0, &Weight::power(1.5, &field), num).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, radius_field, weighted_norm);
criterion_main!(benches);
