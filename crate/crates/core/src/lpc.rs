//! Logarithmic perturbative channel `y = x·exp(jη|x|²) + n`. The rotation is
//! invertible, so its capacity is that of the AWGN channel.

use num_complex::Complex64;

use crate::error::{check_non_negative, Result};
use crate::par;
use crate::params::{nats_to_bits, DiscreteChannelParams};

/// `ln(1 + P/P_N)`.
pub fn awgn_capacity_nats(p: f64, noise_power_w: f64) -> f64 {
    (p / noise_power_w).ln_1p()
}

/// Capacity in bits per channel use.
pub fn capacity(p: f64, params: &DiscreteChannelParams) -> Result<f64> {
    check_non_negative("power_w", p)?;
    Ok(nats_to_bits(awgn_capacity_nats(p, params.noise_power_w)))
}

pub fn simulate(x: &[Complex64], params: &DiscreteChannelParams, seed: u64) -> Vec<Complex64> {
    let eta = params.eta;
    let pn = params.noise_power_w;
    par::map_seeded(x, seed, |rng, &xi| {
        xi * Complex64::from_polar(1.0, eta * xi.norm_sqr()) + par::complex_gaussian(rng, pn)
    })
}
