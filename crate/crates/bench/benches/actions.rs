use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use equisym_core::equivalence::topological_classes;
use equisym_core::restriction::induced_action;
use equisym_core::ske::enumerate;
use equisym_core::strata::{detect, scan_genus, Catalog};
use equisym_core::{Budget, FiniteGroup, Signature, Subgroup};

fn group(spec: &str) -> Arc<FiniteGroup> {
    FiniteGroup::from_spec_arc(spec, 512).unwrap()
}

fn sig(s: &str) -> Signature {
    s.parse().unwrap()
}

fn bench_enumerate(c: &mut Criterion) {
    let budget = Budget::default();
    let d4 = group("D4");
    let klein = group("C2xC2");
    c.bench_function("enumerate D4 (0;2^5)", |b| b.iter(|| enumerate(&d4, black_box(&sig("0;2^5")), &budget).unwrap()));
    c.bench_function("enumerate C2xC2 (0;2^6)", |b| b.iter(|| enumerate(&klein, black_box(&sig("0;2^6")), &budget).unwrap()));
}

fn bench_classes(c: &mut Criterion) {
    let budget = Budget::default();
    let g = group("C4xC2");
    let d6 = group("D6");
    c.bench_function("classes C4xC2 (0;2,2,4,4)", |b| b.iter(|| topological_classes(&g, black_box(&sig("0;2,2,4,4")), &budget).unwrap()));
    c.bench_function("classes D6 (0;2^5)", |b| b.iter(|| topological_classes(&d6, black_box(&sig("0;2^5")), &budget).unwrap()));
}

fn bench_restrict(c: &mut Criterion) {
    let budget = Budget::default();
    let g = group("D4");
    let v = enumerate(&g, &sig("0;2^5"), &budget).unwrap().remove(0);
    let h = Subgroup::generated_by(&g, &[v.elliptic()[0], v.elliptic()[1]]);
    c.bench_function("restrict D4 (0;2^5)", |b| b.iter(|| induced_action(black_box(&v), &h, &budget).unwrap()));
}

fn bench_detect(c: &mut Criterion) {
    let budget = Budget::default();
    let g = group("C2xC2xC2");
    let v = enumerate(&g, &sig("0;2^5"), &budget).unwrap().remove(0);
    c.bench_function("detect C2^3 (0;2^5)", |b| b.iter(|| detect(black_box(&v), None, &budget).unwrap()));
    let catalog = Catalog::builtin();
    c.bench_function("scan genus 2", |b| b.iter(|| scan_genus(&catalog, black_box(2), &budget).unwrap()));
}

criterion_group!(benches, bench_enumerate, bench_classes, bench_restrict, bench_detect);
criterion_main!(benches);
