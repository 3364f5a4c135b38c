use fibercap_core::mathkit::optimize::minimize_scalar;
use fibercap_core::mathkit::quad::{integrate, Domain, QuadratureSpec};
use fibercap_core::params::dbm_to_watt;
use fibercap_core::rpc::*;
use fibercap_core::DiscreteChannelParams;
use proptest::prelude::*;

fn table1() -> DiscreteChannelParams {
    DiscreteChannelParams::new(6350.0, 7.368e-6).unwrap()
}

fn grid(lo: i32, hi: i32, step: usize) -> Vec<f64> {
    (lo..=hi)
        .step_by(step)
        .map(|d| dbm_to_watt(d as f64))
        .collect()
}

#[test]
fn bounds_monotone_in_power() {
    let d = table1();
    let spec = QuadratureSpec::default();
    let mut prev: Option<RpcBounds> = None;
    for p in grid(-35, 50, 5) {
        let b = bounds(p, &d, &spec).unwrap();
        assert!(b.consistent());
        if let Some(q) = prev {
            assert!(b.lower_bits >= q.lower_bits);
            assert!(b.upper_bits >= q.upper_bits - 1e-9);
            assert!(b.upper_simple_bits >= q.upper_simple_bits);
        }
        prev = Some(b);
    }
}

#[test]
fn sandwich_on_coarse_grid() {
    let d = table1();
    let spec = QuadratureSpec::default();
    for p in grid(-35, 50, 17) {
        let b = bounds(p, &d, &spec).unwrap();
        let mi = exact_mi(p, &d, &spec).unwrap();
        assert!(b.lower_bits <= mi.bits + 1e-6 && mi.bits <= b.upper_bits + 1e-6);
        assert!(b.upper_bits - b.lower_bits <= 2.0);
    }
}

#[test]
fn prelog_three() {
    let d = table1();
    for p in grid(40, 50, 5) {
        let slope =
            (lower_bound(10.0 * p, &d).unwrap().0 - lower_bound(p, &d).unwrap().0) / 10f64.log2();
        assert!((2.9..=3.1).contains(&slope), "slope {slope}");
    }
}

#[test]
fn input_law_mass_and_mean() {
    let d = table1();
    let spec = QuadratureSpec::default();
    for p in grid(-30, 30, 15) {
        let (_, law) = lower_bound(p, &d).unwrap();
        let dom = Domain::SemiInfinite {
            start: 0.0,
            scale: 1.0 / law.lambda,
        };
        let mass = integrate(|s| law.density(s), dom, &spec).unwrap().value;
        let mean = integrate(|s| s * law.density(s), dom, &spec).unwrap().value;
        assert!((mass - 1.0).abs() < 1e-8);
        assert!(((mean - p) / p).abs() < 1e-8);
    }
}

#[test]
fn entropy_closed_form_matches_quadrature() {
    let d = table1();
    let spec = QuadratureSpec::default();
    for p in grid(-30, 50, 20) {
        let (_, law) = lower_bound(p, &d).unwrap();
        let closed = law.t_entropy();
        let quad = t_entropy_quadrature(&law, &spec).unwrap();
        assert!(
            ((closed - quad) / closed).abs() < 1e-6,
            "{closed} vs {quad}"
        );
    }
}

#[test]
fn cubic_root_matches_direct_minimization() {
    let d = table1();
    for p in grid(-30, 50, 10) {
        let s = upper_bound_simple(p, &d).unwrap();
        let dd = p + s.b;
        let direct = minimize_scalar(
            |u| mu_objective(u.exp(), dd, &d),
            (0.01 * s.mu_star).ln(),
            (100.0 * s.mu_star).ln(),
            1e-12,
        );
        let mu = direct.x.exp();
        assert!(
            ((mu - s.mu_star) / s.mu_star).abs() < 1e-6,
            "{mu} vs {}",
            s.mu_star
        );
    }
}

#[test]
fn sampled_input_has_the_right_power() {
    let d = table1();
    let p = dbm_to_watt(0.0);
    let (_, law) = lower_bound(p, &d).unwrap();
    let s = sample_input(&law, 400_000, 3);
    let n = s.len() as f64;
    let mean = s.iter().sum::<f64>() / n;
    let var = s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean - p).abs() < 4.0 * (var / n).sqrt());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_constraint_tight(dbm in -40.0f64..60.0) {
        let d = table1();
        let p = dbm_to_watt(dbm);
        let (_, law) = lower_bound(p, &d).unwrap();
        prop_assert!(((law.mean_power() - p) / p).abs() <= 1e-9);
    }

    #[test]
    fn simple_bound_dominates_lower(dbm in -40.0f64..60.0) {
        let d = table1();
        let p = dbm_to_watt(dbm);
        prop_assert!(upper_bound_simple(p, &d).unwrap().bits >= lower_bound(p, &d).unwrap().0);
    }
}
