//! Expectations under the noncentral chi-squared law of the received power,
//! evaluated through the Rician amplitude density.

use crate::error::{check_non_negative, Result};
use crate::mathkit::bessel::log_bessel_i0_scaled;
use crate::mathkit::quad::{integrate_breaks, QuadratureSpec};
use crate::params::DiscreteChannelParams;

/// `ln` of the Rician density of an amplitude `a` around `nu` with per-
/// component variance `sigma2`.
pub fn rician_log_pdf(a: f64, nu: f64, sigma2: f64) -> f64 {
    if a <= 0.0 {
        return f64::NEG_INFINITY;
    }
    a.ln() - sigma2.ln() - (a - nu).powi(2) / (2.0 * sigma2) + log_bessel_i0_scaled(a * nu / sigma2)
}

/// Same density parameterized by the offset `u = a − nu`. Quadrature nodes
/// placed in `u` keep full precision when `nu ≫ sigma`.
pub fn rician_log_pdf_offset(u: f64, nu: f64, sigma2: f64) -> f64 {
    let a = nu + u;
    if a <= 0.0 {
        return f64::NEG_INFINITY;
    }
    a.ln() - sigma2.ln() - u * u / (2.0 * sigma2) + log_bessel_i0_scaled(a * nu / sigma2)
}

/// Offset break points covering `[-k·sigma, k·sigma]` clipped at `a = 0`,
/// every ~3 sigma and at `u = 0`.
pub fn rician_offset_breaks(nu: f64, sigma: f64, k: f64) -> Vec<f64> {
    let lo = (-k * sigma).max(-nu);
    let hi = k * sigma;
    let panels = ((hi - lo) / (3.0 * sigma)).ceil().max(1.0) as usize;
    let mut b: Vec<f64> = (0..=panels)
        .map(|i| lo + (hi - lo) * i as f64 / panels as f64)
        .collect();
    if lo < 0.0 {
        b.push(0.0);
        b.sort_by(f64::total_cmp);
        b.dedup();
    }
    b
}

/// `E[f(|y|²) | |x|² = s]` where `y = x + jη|x|²x + n`.
pub fn noncentral_expectation<F: FnMut(f64) -> f64>(
    mut f: F,
    s: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_non_negative("s", s)?;
    let sigma2 = 0.5 * params.noise_power_w;
    let sigma = sigma2.sqrt();
    let g = s + params.eta * params.eta * s * s * s;
    let nu = g.sqrt();
    let breaks = rician_offset_breaks(nu, sigma, spec.tail_cutoff_sigmas);
    let q = integrate_breaks(
        |u| {
            let lp = rician_log_pdf_offset(u, nu, sigma2);
            if lp == f64::NEG_INFINITY {
                0.0
            } else {
                let a = nu + u;
                f(a * a) * lp.exp()
            }
        },
        &breaks,
        spec,
    )?;
    Ok(q.value)
}
