//! Split-step reference simulator for the zero-dispersion channel with
//! distributed amplification: the fiber is cut into segments, each applying
//! the Kerr rotation and then its share of the noise.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;
use crate::params::DiscreteChannelParams;

pub fn simulate_ssf(
    x: &[Complex64],
    segments: usize,
    params: &DiscreteChannelParams,
    seed: u64,
) -> Result<Vec<Complex64>> {
    if segments == 0 {
        return Err(Error::InvalidParameter {
            name: "segments",
            value: 0.0,
            reason: "at least one segment is required",
        });
    }
    let step = params.eta / segments as f64;
    let pn = params.noise_power_w / segments as f64;
    Ok(par::map_seeded(x, seed, |rng, &x0| {
        let mut a = x0;
        for _ in 0..segments {
            a = a * Complex64::from_polar(1.0, step * a.norm_sqr())
                + par::complex_gaussian(rng, pn);
        }
        a
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpc;

    #[test]
    fn single_linear_segment_is_awgn() {
        let d = DiscreteChannelParams::new(0.0, 1e-3).unwrap();
        let x: Vec<Complex64> = (0..100)
            .map(|i| Complex64::new(i as f64 * 0.01, -0.02))
            .collect();
        assert_eq!(
            simulate_ssf(&x, 1, &d, 5).unwrap(),
            lpc::simulate(&x, &d, 5)
        );
    }

    #[test]
    fn zero_segments_rejected() {
        let d = DiscreteChannelParams::new(6350.0, 7.368e-6).unwrap();
        assert!(simulate_ssf(&[Complex64::new(0.0, 0.0)], 0, &d, 1).is_err());
    }
}
