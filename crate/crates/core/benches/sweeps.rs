use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fibercap_core::mathkit::QuadratureSpec;
use fibercap_core::mnc::{cond_entropies, MncPdfParams};
use fibercap_core::params::dbm_to_watt;
use fibercap_core::{par, rpc, DiscreteChannelParams};
use num_complex::Complex64;

fn table1() -> DiscreteChannelParams {
    DiscreteChannelParams::new(6350.0, 7.368e-6).unwrap()
}

fn rpc_sweep(c: &mut Criterion) {
    let d = table1();
    let spec = QuadratureSpec::default();
    let powers: Vec<f64> = (-35..=50)
        .step_by(5)
        .map(|p| dbm_to_watt(p as f64))
        .collect();
    let point = |&p: &f64| rpc::upper_bound(p, &d, &spec).unwrap().bits;

    let mut g = c.benchmark_group("rpc_upper_sweep");
    g.sample_size(10);
    g.bench_function("sequential", |b| {
        b.iter(|| par::map_seq(black_box(&powers), point))
    });
    #[cfg(feature = "parallel")]
    g.bench_function("parallel", |b| {
        b.iter(|| par::map_par(black_box(&powers), point))
    });
    g.finish();
}

fn entropy_grid(c: &mut Criterion) {
    let d = table1();
    let spec = QuadratureSpec::default();
    let p = MncPdfParams::new(0.0, &d).unwrap();
    let s = (dbm_to_watt(0.0) + d.noise_power_w).sqrt();
    let radii: Vec<f64> = (0..8)
        .map(|i| s * 10f64.powf(-1.5 + 0.25 * i as f64))
        .collect();
    let point = |&r0: &f64| cond_entropies(r0, &p, &spec).unwrap().h_theta;

    let mut g = c.benchmark_group("mnc_cond_entropies");
    g.sample_size(10);
    g.bench_function("sequential", |b| {
        b.iter(|| par::map_seq(black_box(&radii), point))
    });
    #[cfg(feature = "parallel")]
    g.bench_function("parallel", |b| {
        b.iter(|| par::map_par(black_box(&radii), point))
    });
    g.finish();
}

fn channel_sampling(c: &mut Criterion) {
    let d = table1();
    let step = d.eta / 100.0;
    let rotate = |rng: &mut _, x: &Complex64| {
        let mut a = *x;
        for _ in 0..100 {
            a *= Complex64::from_polar(1.0, step * a.norm_sqr());
            a += par::complex_gaussian(rng, d.noise_power_w / 100.0);
        }
        a
    };

    let mut g = c.benchmark_group("split_step_samples");
    g.sample_size(10);
    for n in [1usize << 14, 1 << 17] {
        let x = vec![Complex64::new(d.noise_power_w.sqrt(), 0.0); n];
        g.bench_with_input(BenchmarkId::new("sequential", n), &x, |b, x| {
            b.iter(|| par::map_seeded_seq(x, 7, rotate))
        });
        #[cfg(feature = "parallel")]
        g.bench_with_input(BenchmarkId::new("parallel", n), &x, |b, x| {
            b.iter(|| par::map_seeded_par(x, 7, rotate))
        });
    }
    g.finish();
}

criterion_group!(benches, rpc_sweep, entropy_grid, channel_sampling);
criterion_main!(benches);
