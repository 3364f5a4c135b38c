//! Physical fiber constants and the per-sample discrete-model parameters
//! derived from them.
//!
//! Powers are carried in watts and information in nats everywhere inside the
//! crate; dBm and bits only appear through the conversion helpers below.

use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_10, LN_2};

use crate::error::{check_non_negative, check_positive, Error, Result};

/// Fiber and amplifier constants for an ideally distributed-amplified link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Fiber loss in dB/km.
    pub attenuation_db_per_km: f64,
    /// Kerr nonlinear coefficient in 1/(W·km). Zero gives the linear channel.
    pub nonlinearity: f64,
    /// Fiber length in km.
    pub length_km: f64,
    /// Noise bandwidth in Hz.
    pub noise_bandwidth_hz: f64,
    /// Spontaneous emission factor.
    pub emission_factor: f64,
    /// Photon energy in J.
    pub photon_energy_j: f64,
}

impl PhysicalParams {
    /// Reference link: 5000 km, 0.2 dB/km, 1.27 /(W·km), 125 GHz.
    pub const fn reference() -> Self {
        Self {
            attenuation_db_per_km: 0.2,
            nonlinearity: 1.27,
            length_km: 5000.0,
            noise_bandwidth_hz: 125e9,
            emission_factor: 1.0,
            photon_energy_j: 1.28e-19,
        }
    }

    /// Same link with the Kerr nonlinearity switched off.
    pub fn linear(self) -> Self {
        Self {
            nonlinearity: 0.0,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("attenuation_db_per_km", self.attenuation_db_per_km)?;
        check_non_negative("nonlinearity", self.nonlinearity)?;
        check_positive("length_km", self.length_km)?;
        check_positive("noise_bandwidth_hz", self.noise_bandwidth_hz)?;
        check_positive("emission_factor", self.emission_factor)?;
        check_positive("photon_energy_j", self.photon_energy_j)?;
        Ok(())
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::reference()
    }
}

/// Constants of the per-sample channel models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteChannelParams {
    /// Nonlinear strength η = γL in 1/W.
    pub eta: f64,
    /// Total accumulated noise power P_N in W.
    pub noise_power_w: f64,
}

impl DiscreteChannelParams {
    pub fn new(eta: f64, noise_power_w: f64) -> Result<Self> {
        check_non_negative("eta", eta)?;
        check_positive("noise_power_w", noise_power_w)?;
        Ok(Self { eta, noise_power_w })
    }

    pub fn is_linear(&self) -> bool {
        self.eta == 0.0
    }
}

/// Derives η and P_N from the physical link description.
pub fn derive_discrete(phys: &PhysicalParams) -> Result<DiscreteChannelParams> {
    phys.validate()?;
    // (W·km)^-1 · km = W^-1
    let eta = phys.nonlinearity * phys.length_km;
    let alpha_per_m = db_per_km_to_per_m(phys.attenuation_db_per_km);
    let length_m = phys.length_km * 1e3;
    let noise_power_w = 2.0
        * alpha_per_m
        * phys.emission_factor
        * phys.photon_energy_j
        * length_m
        * phys.noise_bandwidth_hz;
    DiscreteChannelParams::new(eta, noise_power_w)
}

/// Power attenuation coefficient: dB/km to 1/m.
pub fn db_per_km_to_per_m(alpha_db_per_km: f64) -> f64 {
    alpha_db_per_km * LN_10 / (10.0 * 1000.0)
}

pub fn per_m_to_db_per_km(alpha_per_m: f64) -> f64 {
    alpha_per_m * 10.0 * 1000.0 / LN_10
}

pub fn dbm_to_watt(p_dbm: f64) -> f64 {
    10f64.powf(p_dbm / 10.0) * 1e-3
}

pub fn watt_to_dbm(p_w: f64) -> Result<f64> {
    if !(p_w > 0.0) || !p_w.is_finite() {
        return Err(Error::InvalidParameter {
            name: "power_w",
            value: p_w,
            reason: "dBm needs a finite positive power",
        });
    }
    Ok(10.0 * (p_w * 1e3).log10())
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / LN_2
}

pub fn bits_to_nats(bits: f64) -> f64 {
    bits * LN_2
}
