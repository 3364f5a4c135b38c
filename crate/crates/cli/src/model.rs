//! Model column identifiers.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    RpcLower,
    RpcUpper,
    RpcUpperSimple,
    RpcExactMi,
    Lpc,
    MncUpper,
    MncChi(f64),
    MncMaxChi,
}

impl Model {
    /// Results are expensive enough to be worth caching.
    pub fn is_mnc(&self) -> bool {
        matches!(self, Model::MncUpper | Model::MncChi(_) | Model::MncMaxChi)
    }

    pub fn uses_chi_table(&self) -> bool {
        matches!(self, Model::MncChi(_) | Model::MncMaxChi)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::RpcLower => f.write_str("rpc-lb"),
            Model::RpcUpper => f.write_str("rpc-ub"),
            Model::RpcUpperSimple => f.write_str("rpc-ub-simple"),
            Model::RpcExactMi => f.write_str("rpc-exact-mi"),
            Model::Lpc => f.write_str("lpc"),
            Model::MncUpper => f.write_str("mnc-ub"),
            Model::MncChi(k) => write!(f, "mnc-chi:{k}"),
            Model::MncMaxChi => f.write_str("mnc-max-chi"),
        }
    }
}

impl FromStr for Model {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        Ok(match s {
            "rpc-lb" => Model::RpcLower,
            "rpc-ub" => Model::RpcUpper,
            "rpc-ub-simple" => Model::RpcUpperSimple,
            "rpc-exact-mi" => Model::RpcExactMi,
            "lpc" => Model::Lpc,
            "mnc-ub" => Model::MncUpper,
            "mnc-max-chi" => Model::MncMaxChi,
            _ => {
                let k = s
                    .strip_prefix("mnc-chi:")
                    .ok_or_else(|| anyhow!("unknown model `{s}`"))?;
                let k: f64 = k.parse().map_err(|_| anyhow!("bad chi order in `{s}`"))?;
                if !(k > 0.0 && k.is_finite()) {
                    bail!("chi order must be positive in `{s}`");
                }
                Model::MncChi(k)
            }
        })
    }
}

/// Parses a comma-separated model list, rejecting duplicates.
pub fn parse_models(list: &str) -> anyhow::Result<Vec<Model>> {
    let mut out: Vec<Model> = Vec::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let m: Model = item.parse()?;
        if out.contains(&m) {
            bail!("model `{m}` listed twice");
        }
        out.push(m);
    }
    if out.is_empty() {
        bail!("no models requested");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in [
            "rpc-lb",
            "rpc-ub",
            "rpc-ub-simple",
            "rpc-exact-mi",
            "lpc",
            "mnc-ub",
            "mnc-chi:0.5",
            "mnc-chi:2",
            "mnc-max-chi",
        ] {
            assert_eq!(name.parse::<Model>().unwrap().to_string(), name);
        }
    }

    #[test]
    fn rejects_bad_lists() {
        assert!(parse_models("").is_err());
        assert!(parse_models("lpc,lpc").is_err());
        assert!(parse_models("mnc-chi:-1").is_err());
        assert!(parse_models("awgn").is_err());
        assert_eq!(
            parse_models("lpc, rpc-lb").unwrap(),
            vec![Model::Lpc, Model::RpcLower]
        );
    }
}
