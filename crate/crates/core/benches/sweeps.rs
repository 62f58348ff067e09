use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use crnscope::atlas::{audit, AuditConfig, TheoremId};
use crnscope::families::{family, FamilyId};
use crnscope::massaction::{build_system, RateAssignment};
use crnscope::par::Exec;
use crnscope::steady::{anchors_f64, default_anchors, solve_anchors, SolveOptions};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn anchor_sweep(c: &mut Criterion) {
    let net = family(FamilyId::GnConserved, 4, None).unwrap();
    let sys = build_system(&net, &RateAssignment::ones(&net)).unwrap();
    let anchors = anchors_f64(&default_anchors(&net));
    let mut group = c.benchmark_group("solve_anchors");
    for (name, exec) in MODES {
        let opts = SolveOptions {
            budget: 64,
            seed: 0,
            exec,
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| black_box(solve_anchors(&sys, &anchors, *opts)))
        });
    }
    group.finish();
}

fn audit_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("audit_a6");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mut cfg = AuditConfig::default_for(TheoremId::A6);
        cfg.max_networks = Some(150);
        cfg.exec = exec;
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| black_box(audit(TheoremId::A6, cfg).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, anchor_sweep, audit_sweep);
criterion_main!(benches);
