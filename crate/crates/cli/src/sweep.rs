//! Power sweeps over the requested models.

use fibercap_core::mathkit::QuadratureSpec;
use fibercap_core::mnc::{self, InputTable};
use fibercap_core::params::dbm_to_watt;
use fibercap_core::{derive_discrete, lpc, rpc, DiscreteChannelParams};

use crate::cache::{cache_key, Cache, Entry};
use crate::config::SweepConfig;
use crate::curve::{BoundCurve, CurveMeta, Row};
use crate::model::Model;

/// Value in bits plus flag reasons; failures are NaN with the error text.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub flags: Vec<String>,
}

impl Cell {
    fn ok(value: f64) -> Self {
        Self {
            value,
            flags: Vec::new(),
        }
    }

    fn failed(e: impl std::fmt::Display) -> Self {
        Self {
            value: f64::NAN,
            flags: vec![e.to_string()],
        }
    }

    fn from_result(r: fibercap_core::Result<f64>) -> Self {
        r.map(Self::ok).unwrap_or_else(Self::failed)
    }
}

/// Evaluates one model at one power. The chi table, when needed, is built
/// once per row by the caller and passed in.
fn evaluate(
    model: Model,
    p: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
    table: Option<&fibercap_core::Result<InputTable>>,
) -> Cell {
    match model {
        Model::RpcLower => Cell::from_result(rpc::lower_bound(p, params).map(|(b, _)| b)),
        Model::RpcUpper => Cell::from_result(rpc::upper_bound(p, params, spec).map(|u| u.bits)),
        Model::RpcUpperSimple => {
            if params.is_linear() {
                Cell::from_result(lpc::capacity(p, params))
            } else {
                Cell::from_result(rpc::upper_bound_simple(p, params).map(|u| u.bits))
            }
        }
        Model::RpcExactMi => match rpc::exact_mi(p, params, spec) {
            Ok(m) => {
                let mut c = Cell::ok(m.bits);
                if (m.mass - 1.0).abs() > 1e-6 {
                    c.flags.push(format!("output density mass {:.3e}", m.mass));
                }
                c
            }
            Err(e) => Cell::failed(e),
        },
        Model::Lpc => Cell::from_result(lpc::capacity(p, params)),
        Model::MncUpper => match mnc::upper_bound(p, params, spec) {
            Ok(u) => {
                let mut c = Cell::ok(u.bits);
                if !u.converged {
                    c.flags.push("simplex did not converge".into());
                }
                if u.tail_unverified {
                    c.flags.push("phase not uniform at the tail anchor".into());
                }
                if u.series_flagged {
                    c.flags.push("phase series hit its cap".into());
                }
                c
            }
            Err(e) => Cell::failed(e),
        },
        Model::MncChi(k) => match table.expect("chi table prepared") {
            Ok(t) => match mnc::chi_from_table(t, k, params, spec) {
                Ok(b) => chi_cell(b.total_bits, b.flagged),
                Err(e) => Cell::failed(e),
            },
            Err(e) => Cell::failed(e),
        },
        Model::MncMaxChi => match table.expect("chi table prepared") {
            Ok(t) => match mnc::max_chi_from_table(t, params, spec) {
                Ok(m) => chi_cell(m.bits, m.members.iter().any(|b| b.flagged)),
                Err(e) => Cell::failed(e),
            },
            Err(e) => Cell::failed(e),
        },
    }
}

/// One cell outside a sweep, building the chi table when the model needs it.
pub fn evaluate_cell(
    model: Model,
    power_dbm: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Cell {
    let p = dbm_to_watt(power_dbm);
    let table = model
        .uses_chi_table()
        .then(|| InputTable::new(p, params, spec));
    evaluate(model, p, params, spec, table.as_ref())
}

fn chi_cell(bits: f64, flagged: bool) -> Cell {
    let mut c = Cell::ok(bits);
    if flagged {
        c.flags.push("phase series hit its cap".into());
    }
    c
}

fn evaluate_row(
    power_dbm: f64,
    cfg: &SweepConfig,
    params: &DiscreteChannelParams,
    cache: &Cache,
) -> Row {
    let p = dbm_to_watt(power_dbm);
    let spec = &cfg.tolerances;
    let mut cells: Vec<Option<Cell>> = vec![None; cfg.models.len()];
    let mut keys: Vec<Option<String>> = vec![None; cfg.models.len()];

    for (j, &m) in cfg.models.iter().enumerate() {
        if m.is_mnc() {
            let key = cache_key(params, m, power_dbm, spec);
            if let Some(e) = cache.get(&key) {
                cells[j] = Some(Cell {
                    value: e.value(),
                    flags: e.flags,
                });
            }
            keys[j] = Some(key);
        }
    }

    let need_table = cfg
        .models
        .iter()
        .zip(&cells)
        .any(|(m, c)| m.uses_chi_table() && c.is_none());
    let table = need_table.then(|| InputTable::new(p, params, spec));

    let mut fresh = Vec::new();
    for (j, &m) in cfg.models.iter().enumerate() {
        if cells[j].is_none() {
            let c = evaluate(m, p, params, spec, table.as_ref());
            if let Some(key) = keys[j].take() {
                fresh.push((key, Entry::new(c.value, c.flags.clone())));
            }
            cells[j] = Some(c);
        }
    }
    if let Err(e) = cache.commit(fresh) {
        eprintln!("warning: cache not updated: {e:#}");
    }

    let mut values = Vec::with_capacity(cells.len());
    let mut flags = Vec::new();
    for (m, c) in cfg.models.iter().zip(cells) {
        let c = c.expect("every cell evaluated");
        values.push(c.value);
        flags.extend(c.flags.into_iter().map(|f| format!("{m}: {f}")));
    }
    Row {
        power_dbm,
        values,
        flags,
    }
}

/// Evaluates every model at every grid power, rows concurrently up to
/// `cfg.threads`. Per-cell failures become flags.
pub fn run_sweep(cfg: &SweepConfig, cache: &Cache) -> anyhow::Result<BoundCurve> {
    cfg.validate()?;
    let params = derive_discrete(&cfg.physical)?;
    let powers = cfg.powers_dbm();
    let row = |&pd: &f64| evaluate_row(pd, cfg, &params, cache);

    #[cfg(feature = "parallel")]
    let rows: Vec<Row> = {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()?;
        pool.install(|| powers.par_iter().map(row).collect())
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Row> = powers.iter().map(row).collect();

    Ok(BoundCurve {
        models: cfg.models.clone(),
        rows,
        meta: Some(CurveMeta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            physical: cfg.physical,
            discrete: params,
            tolerances: cfg.tolerances,
            seed: cfg.seed,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_models;

    #[test]
    fn lpc_column_is_awgn() {
        let cfg = SweepConfig {
            p_min_dbm: -35.0,
            p_max_dbm: 50.0,
            step_db: 5.0,
            models: parse_models("lpc").unwrap(),
            ..SweepConfig::default()
        };
        let c = run_sweep(&cfg, &Cache::disabled()).unwrap();
        let pn = derive_discrete(&cfg.physical).unwrap().noise_power_w;
        for r in &c.rows {
            let awgn = (1.0 + dbm_to_watt(r.power_dbm) / pn).log2();
            assert!((r.values[0] - awgn).abs() < 1e-12);
            assert!(r.flags.is_empty());
        }
    }

    #[test]
    fn failures_become_flags() {
        let d = DiscreteChannelParams::new(6350.0, 7.368e-6).unwrap();
        let c = evaluate(Model::RpcLower, -1.0, &d, &QuadratureSpec::default(), None);
        assert!(c.value.is_nan());
        assert_eq!(c.flags.len(), 1);
    }
}
