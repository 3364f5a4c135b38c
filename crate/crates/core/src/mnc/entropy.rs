//! Conditional entropies of the MNC output given the input amplitude.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mathkit::bessel::{log_bessel_i0_scaled, one_minus_bessel_ratio};
use crate::mathkit::noncentral::rician_offset_breaks;
use crate::mathkit::quad::{adaptive_vec, QuadratureSpec};
use crate::mnc::pdf::{amplitude_log_pdf, phase_series, MncPdfParams};

pub const PHASE_GRID_MIN: usize = 512;
pub const PHASE_GRID_MAX: usize = 8192;
const PHASE_GRID_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondEntropies {
    /// `E[ln r | r₀]`.
    pub e_log_r: f64,
    /// `h(r | r₀)`.
    pub h_r: f64,
    /// `h(θ | r, r₀, θ₀ = 0)`.
    pub h_theta: f64,
    /// Largest number of Fourier terms used at any quadrature node.
    pub max_terms: usize,
    /// Some node hit `m_max` or the phase grid cap.
    pub flagged: bool,
}

thread_local! {
    static PLANNER: RefCell<(FftPlanner<f64>, HashMap<usize, Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn fft_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if let Some(f) = p.1.get(&n) {
            return f.clone();
        }
        let f = p.0.plan_fft_forward(n);
        p.1.insert(n, f.clone());
        f
    })
}

/// Trapezoid entropy of `(1/2π)[1 + 2Re Σ c_m e^{-jmθ}]` on an `n`-point grid.
fn phase_entropy_on_grid(coeffs: &[Complex64], n: usize) -> f64 {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    // Alias higher harmonics onto the grid rather than dropping them.
    for (i, c) in coeffs.iter().enumerate() {
        buf[(i + 1) % n] += c;
    }
    fft_plan(n).process(&mut buf);
    let h = 2.0 * PI / n as f64;
    let mut acc = 0.0;
    for v in &buf {
        let g = (1.0 + 2.0 * v.re) / (2.0 * PI);
        if g > 0.0 {
            acc -= g * g.ln();
        }
    }
    acc * h
}

/// Entropy of the conditional phase density with the normalized
/// coefficients `coeffs`; returns the entropy and whether the grid cap was
/// hit.
pub fn phase_entropy(coeffs: &[Complex64]) -> (f64, bool) {
    if coeffs.is_empty() {
        return ((2.0 * PI).ln(), false);
    }
    let mut n = PHASE_GRID_MIN.max((4 * coeffs.len()).next_power_of_two());
    let mut h = phase_entropy_on_grid(coeffs, n);
    while n < PHASE_GRID_MAX {
        n *= 2;
        let h2 = phase_entropy_on_grid(coeffs, n);
        let done = (h2 - h).abs() < PHASE_GRID_TOL;
        h = h2;
        if done {
            return (h, false);
        }
    }
    (h, true)
}

/// Entropy of the von Mises law with concentration `kappa`.
pub fn von_mises_entropy(kappa: f64) -> f64 {
    if kappa == 0.0 {
        return (2.0 * PI).ln();
    }
    (2.0 * PI).ln() + log_bessel_i0_scaled(kappa) + kappa * one_minus_bessel_ratio(kappa)
}

/// `H_θ(r)`: entropy of `f(θ | r, r₀)`, with the number of terms used and the
/// flag status.
pub fn conditional_phase_entropy(r: f64, p: &MncPdfParams) -> Result<(f64, usize, bool)> {
    if p.is_effectively_linear(r) {
        return Ok((
            von_mises_entropy(2.0 * r * p.r0 / p.noise_power_w),
            0,
            false,
        ));
    }
    let s = phase_series(r, p)?;
    let (h, grid_capped) = phase_entropy(&s.coeffs);
    Ok((h, s.terms(), s.capped || grid_capped))
}

/// `E[ln r | r₀]`, `h(r | r₀)` and `h(θ | r, r₀, θ₀=0)` by adaptive quadrature
/// over `r ∈ r₀ ± k·σ` (in the offset variable).
pub fn cond_entropies(r0: f64, p: &MncPdfParams, spec: &QuadratureSpec) -> Result<CondEntropies> {
    let p = MncPdfParams { r0, ..*p };
    let pn = p.noise_power_w;
    let sigma = (0.5 * pn).sqrt();
    let breaks = rician_offset_breaks(r0, sigma, spec.tail_cutoff_sigmas);

    let mut failure: Option<Error> = None;
    let mut max_terms = 0usize;
    let mut flagged = false;
    let out = adaptive_vec(
        |u| {
            let r = r0 + u;
            if r <= 0.0 {
                return [0.0; 4];
            }
            let lf = amplitude_log_pdf(r, r0, pn);
            if lf == f64::NEG_INFINITY {
                return [0.0; 4];
            }
            let f = lf.exp();
            let ht = match conditional_phase_entropy(r, &p) {
                Ok((h, m, fl)) => {
                    max_terms = max_terms.max(m);
                    flagged |= fl;
                    h
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    (2.0 * PI).ln()
                }
            };
            [f, f * r.ln(), -f * lf, f * ht]
        },
        &breaks,
        spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !out.converged {
        return Err(Error::Quadrature {
            estimate: out.value[3],
            error: out.error[3],
            evals: out.evals,
        });
    }
    let [mass, e_log_r, h_r, h_theta] = out.value;
    // Renormalize the tiny truncation loss of the ±kσ window.
    Ok(CondEntropies {
        e_log_r: e_log_r / mass,
        h_r: h_r / mass,
        h_theta: h_theta / mass,
        max_terms,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkit::bessel::bessel_ratio_i1_i0;
    use crate::params::DiscreteChannelParams;

    #[test]
    fn uniform_phase_entropy() {
        assert!((phase_entropy(&[]).0 - (2.0 * PI).ln()).abs() < 1e-15);
        let (h, capped) = phase_entropy(&[Complex64::new(1e-14, 0.0)]);
        assert!(!capped);
        assert!((h - (2.0 * PI).ln()).abs() < 1e-12);
    }

    #[test]
    fn von_mises_series_matches_closed_form() {
        // von Mises coefficients: c_m = I_m(κ)/I_0(κ).
        for kappa in [0.5f64, 3.0, 40.0] {
            let coeffs: Vec<Complex64> = (1..200u32)
                .map(|m| {
                    let l = crate::mathkit::bessel::log_bessel_i_real(m, kappa)
                        - crate::mathkit::bessel::log_bessel_i_real(0, kappa);
                    Complex64::new(l.exp(), 0.0)
                })
                .take_while(|c| c.re > 1e-17)
                .collect();
            let (h, _) = phase_entropy(&coeffs);
            assert!((h - von_mises_entropy(kappa)).abs() < 1e-9, "kappa={kappa}");
        }
    }

    #[test]
    fn von_mises_entropy_large_kappa() {
        // Wrapped-normal limit: ½ ln(2πe/κ).
        for kappa in [1e4f64, 1e7, 1e10] {
            let h = von_mises_entropy(kappa);
            let g = 0.5 * (2.0 * PI * std::f64::consts::E / kappa).ln();
            assert!((h - g).abs() < 2.0 / kappa, "kappa={kappa}");
        }
        let below = 999.999 * (1.0 - bessel_ratio_i1_i0(999.999));
        let above = 1000.0 * one_minus_bessel_ratio(1000.0);
        assert!((below - above).abs() < 1e-9);
    }

    #[test]
    fn linear_limit_statistics() {
        let d = DiscreteChannelParams::new(1e-30, 7.368e-6).unwrap();
        let p = MncPdfParams::new(0.0, &d).unwrap();
        let c = cond_entropies(0.0, &p, &QuadratureSpec::default()).unwrap();
        let pn = d.noise_power_w;
        let euler = 0.577_215_664_901_532_9;
        assert!((c.h_theta - (2.0 * PI).ln()).abs() < 1e-8);
        assert!((c.e_log_r - 0.5 * (pn.ln() - euler)).abs() < 1e-6);
        // Rayleigh entropy with σ² = P_N/2: 1 + ln(σ/√2) + γ/2.
        let s = (0.5 * pn).sqrt();
        let rayleigh = 1.0 + (s / 2f64.sqrt()).ln() + 0.5 * euler;
        assert!((c.h_r - rayleigh).abs() < 1e-6);
    }
}
