use std::hint::black_box;

use circstab::apolarity::{run_campaign, CampaignConfig, CampaignKind};
use circstab::domains::{CircularDomain, DomainProduct};
use circstab::oracle::{find_zero, OracleConfig};
use circstab::par::ExecMode;
use circstab::statmech::{partition_fugacity_with, SpinSystem};
use circstab::{ExponentVector, MultiPoly, C64};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, ExecMode); 2] = [("parallel", ExecMode::Parallel), ("sequential", ExecMode::Sequential)];

fn stable_poly(n: usize) -> MultiPoly {
    // ∏ (z_i + z_{i+1} + i) is stable on the upper half-plane, so the oracle runs its full budget
    let mut f = MultiPoly::one(n);
    for i in 0..n {
        let terms = [
            (ExponentVector::unit(n, i), C64::new(1.0, 0.0)),
            (ExponentVector::unit(n, (i + 1) % n), C64::new(1.0, 0.0)),
            (ExponentVector::zeros(n), C64::new(0.0, 1.0)),
        ];
        f = f.mul(&MultiPoly::from_terms(n, terms).unwrap()).unwrap();
    }
    f
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_zero");
    group.sample_size(10);
    for n in [2, 4] {
        let f = stable_poly(n);
        let omega = DomainProduct::uniform(CircularDomain::half_plane(0.0), n);
        for (name, exec) in MODES {
            let cfg = OracleConfig { exec, ..OracleConfig::default() };
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| find_zero(black_box(&f), &omega, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn partition(c: &mut Criterion) {
    let mut group = c.benchmark_group("partition_fugacity");
    group.sample_size(10);
    for n in [12, 16] {
        let s = SpinSystem::random_ferromagnet(n, 2.0, &mut ChaCha8Rng::seed_from_u64(1));
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| partition_fugacity_with(black_box(&s), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn campaign(c: &mut Criterion) {
    let mut group = c.benchmark_group("grace_campaign");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = CampaignConfig { kind: CampaignKind::Disc, pairs: 50, exec, ..CampaignConfig::default() };
        group.bench_function(name, |b| b.iter(|| run_campaign(black_box(&cfg)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, oracle, partition, campaign);
criterion_main!(benches);
