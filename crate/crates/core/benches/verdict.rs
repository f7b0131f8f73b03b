use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use padic_resolvent::criteria::{hyp_verdict, CheckConfig};
use padic_resolvent::instances::{generate_instance, InstanceKind};
use padic_resolvent::{Exec, Prime};

fn verdict(c: &mut Criterion) {
    let mut group = c.benchmark_group("hyp_verdict");
    group.sample_size(10);
    for (dim, p) in [(2, 2), (3, 3), (4, 5)] {
        let kind = InstanceKind::RandomBounded { dim, prime: Prime::new(p).unwrap(), seed: 7 };
        let system = generate_instance(&kind, 200).unwrap();
        let config = CheckConfig::for_system(&system);
        for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, format!("d{dim}_p{p}")), &exec, |b, &exec| {
                b.iter(|| hyp_verdict(black_box(&system), &config, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, verdict);
criterion_main!(benches);
