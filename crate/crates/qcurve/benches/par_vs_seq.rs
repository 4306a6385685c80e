use criterion::{criterion_group, criterion_main, Criterion};
use qcurve::par::Exec;
use qcurve::toprec::{build_table, param_curve};

fn tables(c: &mut Criterion) {
    for (name, level) in [("airy", 5), ("catalan", 4)] {
        let curve = param_curve(name).unwrap();
        let mut group = c.benchmark_group(format!("{name} level {level}"));
        group.sample_size(10);
        for exec in [Exec::Sequential, Exec::Parallel] {
            group.bench_function(format!("{exec:?}"), |b| {
                b.iter(|| build_table(&curve, level, exec).unwrap())
            });
        }
        group.finish();
    }
}

criterion_group!(benches, tables);
criterion_main!(benches);
