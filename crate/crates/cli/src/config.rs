//! TOML configuration and the sweep description.
//!
//! A config file holds the six physical fields at the top level, plus
//! optional `[sweep]` and `[tolerances]` tables:
//!
//! ```toml
//! attenuation_db_per_km = 0.2
//! nonlinearity = 1.27
//! length_km = 5000.0
//! noise_bandwidth_hz = 125e9
//! emission_factor = 1.0
//! photon_energy_j = 1.28e-19
//!
//! [sweep]
//! pmin = -30.0
//! pmax = 30.0
//! step = 5.0
//! models = "rpc-lb,rpc-ub,lpc"
//!
//! [tolerances]
//! rel_tol = 1e-9
//! ```

use std::path::Path;

use anyhow::{bail, Context};
use fibercap_core::mathkit::QuadratureSpec;
use fibercap_core::PhysicalParams;
use serde::Deserialize;

use crate::model::{parse_models, Model};

pub const DEFAULT_MODELS: &str = "rpc-lb,rpc-ub,rpc-ub-simple,lpc";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub pmin: Option<f64>,
    pub pmax: Option<f64>,
    pub step: Option<f64>,
    pub models: Option<String>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_nodes: Option<usize>,
    pub tail_cutoff_sigmas: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: QuadratureSpec) -> anyhow::Result<QuadratureSpec> {
        let spec = QuadratureSpec {
            abs_tol: self.abs_tol.unwrap_or(base.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(base.rel_tol),
            max_nodes: self.max_nodes.unwrap_or(base.max_nodes),
            tail_cutoff_sigmas: self.tail_cutoff_sigmas.unwrap_or(base.tail_cutoff_sigmas),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub physical: PhysicalParams,
    pub sweep: SweepSection,
    pub tolerances: ToleranceOverrides,
}

impl ConfigFile {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut table: toml::Table = toml::from_str(text)?;
        let sweep = match table.remove("sweep") {
            Some(v) => v.try_into().context("in [sweep]")?,
            None => SweepSection::default(),
        };
        let tolerances = match table.remove("tolerances") {
            Some(v) => v.try_into().context("in [tolerances]")?,
            None => ToleranceOverrides::default(),
        };
        let physical: PhysicalParams = toml::Value::Table(table)
            .try_into()
            .context("physical parameters")?;
        physical.validate()?;
        Ok(Self {
            physical,
            sweep,
            tolerances,
        })
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub p_min_dbm: f64,
    pub p_max_dbm: f64,
    pub step_db: f64,
    pub models: Vec<Model>,
    pub threads: usize,
    pub seed: u64,
    pub physical: PhysicalParams,
    pub tolerances: QuadratureSpec,
}

impl SweepConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.p_min_dbm.is_finite() && self.p_max_dbm.is_finite()) {
            bail!("power range must be finite");
        }
        if !(self.p_min_dbm < self.p_max_dbm) {
            bail!(
                "pmin ({}) must be below pmax ({})",
                self.p_min_dbm,
                self.p_max_dbm
            );
        }
        if !(self.step_db > 0.0 && self.step_db.is_finite()) {
            bail!("step must be positive");
        }
        if self.models.is_empty() {
            bail!("no models requested");
        }
        if self.threads == 0 {
            bail!("threads must be at least 1");
        }
        self.physical.validate()?;
        self.tolerances.validate()?;
        Ok(())
    }

    /// Grid `p_min, p_min + step, …` up to `p_max` inclusive, rounded to a
    /// micro-dB so decimal steps print cleanly.
    pub fn powers_dbm(&self) -> Vec<f64> {
        let n = ((self.p_max_dbm - self.p_min_dbm) / self.step_db + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| ((self.p_min_dbm + i as f64 * self.step_db) * 1e6).round() / 1e6)
            .collect()
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            p_min_dbm: -35.0,
            p_max_dbm: 50.0,
            step_db: 1.0,
            models: parse_models(DEFAULT_MODELS).expect("default model list"),
            threads: 1,
            seed: 1,
            physical: PhysicalParams::reference(),
            tolerances: QuadratureSpec::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_physical_fields_and_sections() {
        let c = ConfigFile::parse(
            "attenuation_db_per_km = 0.2\nnonlinearity = 0.0\nlength_km = 5000.0\n\
             noise_bandwidth_hz = 125e9\nemission_factor = 1.0\nphoton_energy_j = 1.28e-19\n\
             [sweep]\npmin = -10.0\nmodels = \"lpc\"\n[tolerances]\nrel_tol = 1e-8\n",
        )
        .unwrap();
        assert_eq!(c.physical, PhysicalParams::reference().linear());
        assert_eq!(c.sweep.pmin, Some(-10.0));
        assert_eq!(c.tolerances.rel_tol, Some(1e-8));
    }

    #[test]
    fn rejects_unknown_and_invalid_fields() {
        let base = "attenuation_db_per_km = 0.2\nnonlinearity = 1.27\nlength_km = 5000.0\n\
                    noise_bandwidth_hz = 125e9\nemission_factor = 1.0\nphoton_energy_j = 1.28e-19\n";
        assert!(ConfigFile::parse(&format!("{base}gamma = 1.0\n")).is_err());
        assert!(ConfigFile::parse(&base.replace("5000.0", "-1.0")).is_err());
        assert!(ConfigFile::parse("nonlinearity = 1.0\n").is_err());
    }

    #[test]
    fn grid_is_inclusive() {
        let c = SweepConfig {
            p_min_dbm: -35.0,
            p_max_dbm: 50.0,
            step_db: 5.0,
            ..SweepConfig::default()
        };
        let g = c.powers_dbm();
        assert_eq!(g.len(), 18);
        assert_eq!(g[17], 50.0);
        let c = SweepConfig {
            p_min_dbm: 0.0,
            p_max_dbm: 1.0,
            step_db: 0.1,
            ..SweepConfig::default()
        };
        assert_eq!(c.powers_dbm()[3], 0.3);
        assert_eq!(c.powers_dbm().len(), 11);
    }
}
