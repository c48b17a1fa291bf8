//! Sequential against rayon kernels on the three hot loops.
//!
//! Run with `cargo bench -p asymlab-core`; without the `parallel` feature
//! both arms take the sequential path.

use asymlab::clustering::verify_cluster_property_with;
use asymlab::quantum::gates::cnot;
use asymlab::quantum::random::random_statevector;
use asymlab::quantum::QuantumState;
use asymlab::u1::charge_distribution_with;
use asymlab::{Exec, LatticeGeometry};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn gate_application(c: &mut Criterion) {
    let mut group = c.benchmark_group("two-site gate");
    let gate = cnot();
    for n in [16usize, 20] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut psi = random_statevector(n, &mut rng);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| psi.apply_local(&[n / 2, n / 2 + 1], &gate, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn charge_sectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("charge distribution");
    for n in [16usize, 20] {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let state: QuantumState = random_statevector(n, &mut rng).into();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &state, |b, s| {
                b.iter(|| charge_distribution_with(s, exec))
            });
        }
    }
    group.finish();
}

fn pair_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("cluster pair scan");
    group.sample_size(10);
    let n = 12;
    let g = LatticeGeometry::chain(n);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let state: QuantumState = random_statevector(n, &mut rng).into();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, n), &state, |b, s| {
            b.iter(|| verify_cluster_property_with(s, 2, &g, 1e-10, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, gate_application, charge_sectors, pair_scan);
criterion_main!(benches);
