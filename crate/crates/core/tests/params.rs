use fibercap_core::params::*;
use fibercap_core::{derive_discrete, PhysicalParams};
use proptest::prelude::*;

#[test]
fn reference_link_constants() {
    let d = derive_discrete(&PhysicalParams::reference()).unwrap();
    assert_eq!(d.eta, 1.27 * 5000.0);
    assert!((watt_to_dbm(d.noise_power_w).unwrap() + 21.3).abs() < 0.05);
}

#[test]
fn linear_link_has_zero_eta() {
    let d = derive_discrete(&PhysicalParams::reference().linear()).unwrap();
    assert!(d.is_linear());
}

fn link() -> impl Strategy<Value = PhysicalParams> {
    (
        0.05f64..1.0,
        0.0f64..5.0,
        10.0f64..2e4,
        1e9f64..1e12,
        1.0f64..3.0,
        1e-19f64..3e-19,
    )
        .prop_map(|(a, g, l, w, n, h)| PhysicalParams {
            attenuation_db_per_km: a,
            nonlinearity: g,
            length_km: l,
            noise_bandwidth_hz: w,
            emission_factor: n,
            photon_energy_j: h,
        })
}

proptest! {
    #[test]
    fn derivation_is_homogeneous_in_length(phys in link()) {
        let one = derive_discrete(&phys).unwrap();
        let two = derive_discrete(&PhysicalParams { length_km: 2.0 * phys.length_km, ..phys }).unwrap();
        prop_assert!((two.eta - 2.0 * one.eta).abs() <= 1e-12 * two.eta.max(1e-300));
        prop_assert!((two.noise_power_w - 2.0 * one.noise_power_w).abs() <= 1e-12 * two.noise_power_w);
    }

    #[test]
    fn power_round_trip(w in 1e-12f64..1e3) {
        let back = dbm_to_watt(watt_to_dbm(w).unwrap());
        prop_assert!(((back - w) / w).abs() < 1e-12);
    }

    #[test]
    fn attenuation_round_trip(a in 1e-3f64..10.0) {
        let back = per_m_to_db_per_km(db_per_km_to_per_m(a));
        prop_assert!(((back - a) / a).abs() < 1e-12);
    }

    #[test]
    fn information_units_round_trip(x in -1e3f64..1e3) {
        prop_assert!((bits_to_nats(nats_to_bits(x)) - x).abs() <= 1e-12 * x.abs().max(1.0));
    }
}
