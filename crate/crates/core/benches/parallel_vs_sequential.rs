use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use packlab_core::blowup::blow_up;
use packlab_core::exceptional::enumerate_exceptional_cp2_classes;
use packlab_core::invariants::{search_d_omega, SearchBudget};
use packlab_core::model::make_cp2;
use packlab_core::{Exec, Rational};

fn exec_modes() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)]
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_exceptional");
    group.sample_size(10);
    for n in [7usize, 8] {
        for (name, exec) in exec_modes() {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| enumerate_exceptional_cp2_classes(n, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_box_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_d_omega");
    group.sample_size(10);
    let model = blow_up(&make_cp2(Rational::frac(7, 3)).unwrap(), 2).unwrap().model;
    for k in [6i64, 10] {
        let budget = SearchBudget::new(20, k).unwrap();
        for (name, exec) in exec_modes() {
            group.bench_with_input(BenchmarkId::new(name, k), &budget, |b, &budget| {
                b.iter(|| search_d_omega(&model, budget, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_enumeration, bench_box_search);
criterion_main!(benches);
