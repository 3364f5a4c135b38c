use fibercap_core::lpc::{awgn_capacity_nats, capacity, simulate};
use fibercap_core::params::{dbm_to_watt, nats_to_bits};
use fibercap_core::DiscreteChannelParams;
use num_complex::Complex64;
use proptest::prelude::*;

fn table1() -> DiscreteChannelParams {
    DiscreteChannelParams::new(6350.0, 7.368e-6).unwrap()
}

#[test]
fn deterministic_part_is_a_rotation() {
    let d = table1();
    let x: Vec<Complex64> = (0..10_000)
        .map(|i| Complex64::from_polar(1e-3 * (1 + i % 97) as f64, 0.01 * i as f64))
        .collect();
    let y = simulate(&x, &d, 17);
    // Same seed and positions give the same noise draws.
    let n = simulate(&vec![Complex64::new(0.0, 0.0); x.len()], &d, 17);
    for ((xi, yi), ni) in x.iter().zip(&y).zip(&n) {
        assert!(((yi - ni).norm() - xi.norm()).abs() <= 1e-12 * xi.norm());
    }
}

proptest! {
    #[test]
    fn capacity_is_awgn(dbm in -40.0f64..60.0) {
        let d = table1();
        let p = dbm_to_watt(dbm);
        prop_assert_eq!(capacity(p, &d).unwrap(), nats_to_bits(awgn_capacity_nats(p, d.noise_power_w)));
    }

    #[test]
    fn prelog_one(dbm in 30.0f64..60.0) {
        let d = table1();
        let p = dbm_to_watt(dbm);
        let slope = (capacity(10.0 * p, &d).unwrap() - capacity(p, &d).unwrap()) / 10f64.log2();
        prop_assert!((slope - 1.0).abs() < 1e-3);
    }
}
