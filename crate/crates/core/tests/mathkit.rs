use fibercap_core::mathkit::bessel::{log_bessel_i, log_bessel_i_real};
use fibercap_core::mathkit::cubic::{
    q_inverse, q_inverse_derivative, unique_positive_root, CubicCoeffs,
};
use num_complex::Complex64;
use proptest::prelude::*;

const ETA: f64 = 6350.0;

fn g(x: f64, eta: f64) -> f64 {
    x + eta * eta * x * x * x
}

#[test]
fn q_slope_at_most_one_on_log_grid() {
    let mut v = 1e-12;
    while v < 1e6 {
        let h = 1e-6 * v;
        let fd = (q_inverse(v + h, ETA).unwrap() - q_inverse(v - h, ETA).unwrap()) / (2.0 * h);
        assert!(fd <= 1.0 + 1e-6, "q'({v}) = {fd}");
        assert!(q_inverse_derivative(v, ETA) <= 1.0);
        v *= 1.5;
    }
}

#[test]
fn real_bessel_path_never_overflows() {
    let mut x = 1e-3;
    while x <= 1e6 {
        for m in [0u32, 1, 5, 40] {
            let l = log_bessel_i_real(m, x);
            assert!(l.is_finite(), "I_{m}({x})");
        }
        x *= 3.0;
    }
    assert!(log_bessel_i_real(0, 1e6).is_finite());
}

proptest! {
    #[test]
    fn cubic_root_residual(p in 1e-8f64..1e3, eta in 0.0f64..1e4) {
        let c = CubicCoeffs::rate_equation(p, eta).unwrap();
        let x = unique_positive_root(&c).unwrap();
        prop_assert!(c.relative_residual(x) <= 1e-10);
    }

    #[test]
    fn q_inverts_g(v in 0.0f64..1e4) {
        let x = q_inverse(v, ETA).unwrap();
        prop_assert!((g(x, ETA) - v).abs() <= 1e-12 * v.max(1e-300));
    }

    #[test]
    fn q_is_monotone(a in 0.0f64..1e3, b in 0.0f64..1e3) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(q_inverse(lo, ETA).unwrap() < q_inverse(hi, ETA).unwrap());
    }

    #[test]
    fn q_is_concave(x in 0.0f64..10.0, y in 0.0f64..10.0) {
        let mid = q_inverse(0.5 * (x + y), ETA).unwrap();
        let avg = 0.5 * (q_inverse(x, ETA).unwrap() + q_inverse(y, ETA).unwrap());
        prop_assert!(mid >= avg - 1e-12);
    }

    #[test]
    fn bessel_regimes_agree_in_overlap(m in 0u32..8, r in 28.0f64..34.0, phase in -1.2f64..1.2) {
        // Around |z| = 30 the series and the large-argument expansion meet;
        // the two-term recurrence ties neighbouring orders across the seam.
        let z = Complex64::from_polar(r, phase);
        let a = log_bessel_i(m, z).unwrap().exp();
        let b = log_bessel_i(m + 2, z).unwrap().exp();
        let mid = log_bessel_i(m + 1, z).unwrap().exp();
        let rhs = mid * (2.0 * (m + 1) as f64) / z;
        prop_assert!((a - b - rhs).norm() <= 1e-8 * a.norm());
    }
}
