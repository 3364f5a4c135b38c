//! Conditional density of the memoryless NLS channel in polar coordinates,
//! as a Fourier series in `θ − θ₀` whose coefficients are Bessel functions
//! of complex argument. All coefficients are produced as logarithms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{check_non_negative, Error, Result};
use crate::mathkit::bessel::{log_bessel_i_limited, ComplexLog};
use crate::mathkit::noncentral::rician_log_pdf;
use crate::params::DiscreteChannelParams;

pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;
pub const DEFAULT_M_MAX: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MncPdfParams {
    pub r0: f64,
    /// `γL`, equal to `η`.
    pub gamma_l: f64,
    pub noise_power_w: f64,
    pub truncation_tol: f64,
    pub m_max: usize,
}

impl MncPdfParams {
    pub fn new(r0: f64, params: &DiscreteChannelParams) -> Result<Self> {
        check_non_negative("r0", r0)?;
        Ok(Self {
            r0,
            gamma_l: params.eta,
            noise_power_w: params.noise_power_w,
            truncation_tol: DEFAULT_TRUNCATION_TOL,
            m_max: DEFAULT_M_MAX,
        })
    }

    /// `2γL·r₀²P_N / (2r₀² + P_N)`, so that `x_m² = j·m·c`.
    fn c(&self) -> f64 {
        let t = self.r0 * self.r0;
        2.0 * self.gamma_l * t * self.noise_power_w / (2.0 * t + self.noise_power_w)
    }

    /// Phase rotations are negligible; the density is the polar Gaussian.
    pub fn is_effectively_linear(&self, r: f64) -> bool {
        self.gamma_l * (r * r + self.r0 * self.r0) < 1e-9
    }
}

/// `x_m` on the principal branch, or its negative.
pub fn x_m(m: u32, p: &MncPdfParams, other_branch: bool) -> Complex64 {
    let x = Complex64::new(0.0, m as f64 * p.c()).sqrt();
    if other_branch {
        -x
    } else {
        x
    }
}

/// `(ln(x/sin x), x·cot x)`, both even in `x`.
fn x_over_sin_and_x_cot(x: Complex64) -> (Complex64, Complex64) {
    let x2 = x * x;
    if x.norm() < 0.05 {
        let x4 = x2 * x2;
        let x6 = x4 * x2;
        let ratio = 1.0 + x2 / 6.0 + x4 * (7.0 / 360.0) + x6 * (31.0 / 15120.0);
        let cot = 1.0 - x2 / 3.0 - x4 / 45.0 - x6 * (2.0 / 945.0);
        return (ratio.ln(), cot);
    }
    // Work with the representative in the upper half plane; both functions
    // are even.
    let x = if x.im < 0.0 { -x } else { x };
    if x.im > 20.0 {
        // sin x ≈ (j/2)e^{-jx}, cot x ≈ −j.
        let ln_sin = Complex64::new((0.5f64).ln(), PI / 2.0) - Complex64::new(0.0, 1.0) * x;
        return (x.ln() - ln_sin, x * Complex64::new(0.0, -1.0));
    }
    ((x / x.sin()).ln(), x * x.cos() / x.sin())
}

/// `ln C_m(r)` with `C_m(r) = 2rν_m·exp(−(r² + r₀²)ν_m cos x_m)·I_m(2rr₀ν_m)`.
pub fn fourier_coeff(m: u32, r: f64, p: &MncPdfParams) -> Result<ComplexLog> {
    fourier_coeff_branch(m, r, p, false)
}

pub fn fourier_coeff_branch(
    m: u32,
    r: f64,
    p: &MncPdfParams,
    other_branch: bool,
) -> Result<ComplexLog> {
    check_non_negative("r", r)?;
    if r == 0.0 {
        return Ok(ComplexLog::LOG_ZERO);
    }
    let pn = p.noise_power_w;
    let x = x_m(m, p, other_branch);
    let (ln_ratio, xcot) = x_over_sin_and_x_cot(x);
    let ln_nu = ln_ratio - pn.ln();
    let nu = ln_nu.exp();
    let z = 2.0 * r * p.r0 * nu;
    let lb = log_bessel_i_limited(m, z, p.m_max.max(1) as u32)?;
    if lb.is_log_zero() {
        return Ok(ComplexLog::LOG_ZERO);
    }
    let l = (2.0 * r).ln() + ln_nu - (r * r + p.r0 * p.r0) * xcot / pn;
    Ok(lb.add_complex(l))
}

/// `ln f_{r|r₀}(r | r₀)`, the Rician amplitude law.
pub fn amplitude_log_pdf(r: f64, r0: f64, noise_power_w: f64) -> f64 {
    rician_log_pdf(r, r0, 0.5 * noise_power_w)
}

pub fn amplitude_pdf(r: f64, r0: f64, params: &DiscreteChannelParams) -> f64 {
    amplitude_log_pdf(r, r0, params.noise_power_w).exp()
}

/// Fourier coefficients of the conditional phase density at fixed `r`,
/// normalized by `f_{r|r₀}(r)`: `f(θ | r, r₀) = (1/2π)[1 + 2Re Σ c_m e^{-jmΔ}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSeries {
    pub ln_amplitude_pdf: f64,
    pub coeffs: Vec<Complex64>,
    /// The series hit `m_max` before the truncation rule fired.
    pub capped: bool,
}

impl PhaseSeries {
    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// `f(θ | r, r₀, θ₀)` as a density on `[0, 2π)`, evaluated directly.
    pub fn phase_density(&self, delta: f64) -> f64 {
        let mut s = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = (i + 1) as f64;
            s += (c * Complex64::from_polar(1.0, -m * delta)).re;
        }
        (1.0 + 2.0 * s) / (2.0 * PI)
    }
}

/// Normalized coefficients `c_m = C_m / f_{r|r₀}` up to the truncation point.
pub fn phase_series(r: f64, p: &MncPdfParams) -> Result<PhaseSeries> {
    let ln_f = amplitude_log_pdf(r, p.r0, p.noise_power_w);
    let mut coeffs = Vec::new();
    if r == 0.0 || p.r0 == 0.0 || ln_f == f64::NEG_INFINITY {
        return Ok(PhaseSeries {
            ln_amplitude_pdf: ln_f,
            coeffs,
            capped: false,
        });
    }
    // Terms are compared on the scale of the density: the constant 1/(2π)
    // against |c_m|/π, i.e. 1/2 against |c_m| after normalization.
    let mut largest = 0.5f64;
    for m in 1..=p.m_max as u32 {
        let l = fourier_coeff(m, r, p)?;
        if l.is_log_zero() {
            break;
        }
        let c = l.add_complex(Complex64::new(-ln_f, 0.0)).exp();
        let mag = c.norm();
        if !mag.is_finite() {
            return Err(Error::SeriesTruncation { m_max: m as usize });
        }
        if mag < p.truncation_tol * largest {
            return Ok(PhaseSeries {
                ln_amplitude_pdf: ln_f,
                coeffs,
                capped: false,
            });
        }
        largest = largest.max(mag);
        coeffs.push(c);
    }
    Ok(PhaseSeries {
        ln_amplitude_pdf: ln_f,
        coeffs,
        capped: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdfValue {
    pub value: f64,
    pub terms: usize,
    /// `m_max` was reached before the truncation tolerance.
    pub capped: bool,
}

/// `f(r, θ | r₀, θ₀)` in 1/(√W·rad).
pub fn conditional_pdf(
    r: f64,
    theta: f64,
    r0: f64,
    theta0: f64,
    p: &MncPdfParams,
) -> Result<PdfValue> {
    check_non_negative("r", r)?;
    let p = MncPdfParams { r0, ..*p };
    let s = phase_series(r, &p)?;
    let f_r = s.ln_amplitude_pdf.exp();
    let mut v = f_r * s.phase_density(theta - theta0);
    // Dropped terms perturb the density by about tol·max|c_m|·f_r/π.
    let scale = s.coeffs.iter().map(|c| c.norm()).fold(0.5, f64::max);
    let floor = 10.0 * p.truncation_tol * scale * f_r / PI;
    if v < 0.0 && v > -floor {
        v = 0.0;
    }
    Ok(PdfValue {
        value: v,
        terms: s.terms(),
        capped: s.capped,
    })
}
