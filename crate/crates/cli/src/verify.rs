//! `fibercap verify`: invariant and cross-validation checks over all models.
//!
//! Checks that depend on the link use the configured parameters; the
//! parameter-reproduction and chi-family checks always use the reference
//! link, whose published values they compare against.

use fibercap_core::mathkit::QuadratureSpec;
use fibercap_core::{derive_discrete, PhysicalParams};

use crate::checks::*;
use crate::model::{parse_models, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Skips the split-step histogram oracle, the large Monte Carlo checks
    /// and the MNC power grid.
    Fast,
    Full,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

/// Every model column at γ = 0, including the quadrature-based MNC ones.
fn linear_models() -> Vec<(Model, f64)> {
    parse_models("rpc-lb,rpc-ub,rpc-ub-simple,rpc-exact-mi,lpc,mnc-ub,mnc-chi:2,mnc-max-chi")
        .expect("static list")
        .into_iter()
        .map(|m| (m, 1e-4))
        .collect()
}

pub const MNC_GRID_DBM: [f64; 14] = [
    -30.0, -20.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0, 45.0, 50.0,
];

pub fn verify(suite: Suite, phys: &PhysicalParams, mut progress: impl FnMut(&Check)) -> Report {
    let spec = QuadratureSpec::default();
    let mut report = Report::default();
    let mut push = |c: Check| {
        progress(&c);
        report.checks.push(c);
    };
    let params = match derive_discrete(phys) {
        Ok(d) => d,
        Err(e) => {
            push(Check::run("params: configured link", || Err(e.into())));
            return report;
        }
    };
    let full = suite == Suite::Full;
    let coarse = dbm_grid(-35, 50, 5);
    let fine = dbm_grid(-35, 50, 1);

    push(Check::run(
        "params: reference link reproduces eta and P_N",
        || parameter_reproduction(6350.0, -21.3, 0.05),
    ));
    push(Check::run("params: unit round trips", unit_round_trips));
    push(Check::run(
        "linear limit: every model collapses onto AWGN",
        || linear_collapse(phys, &coarse, &linear_models(), &spec),
    ));
    // At γ = 0 the collapse check already covers every model.
    if params.is_linear() {
        return report;
    }
    push(Check::run(
        "rpc: L <= exact MI <= U and U - L <= 2 bits",
        || rpc_sandwich(&params, if full { &fine } else { &coarse }, 2.0, &spec),
    ));
    push(Check::run("rpc: pre-log 3 constants", || {
        let (lower, upper) = fibercap_core::rpc::prelog_constants(&params)?;
        rpc_prelog(&params, 60.0, upper, lower, 0.2, &[40.0, 50.0])
    }));
    push(Check::run(
        "rpc: cubic, entropy and constraint cross-checks",
        || rpc_two_routes(&params, &dbm_grid(-30, 50, 10), &spec),
    ));
    push(Check::run("mnc: conditional density normalizes", || {
        mnc_normalization(&params, &[0.1, 1.0, 10.0], 1e-6)
    }));
    push(Check::run(
        "mnc: weak-nonlinearity limit is the polar Gaussian",
        || mnc_linear_limit(params.noise_power_w, 1e-6),
    ));
    push(Check::run("mnc: bounds bracket AWGN at -30 dBm", || {
        let q = mnc_point(-30.0, &params, &spec, true)?;
        let u = q.upper.as_ref().map(|u| u.bits).unwrap_or(f64::NAN);
        let ok = u >= q.chi.bits
            && (u - q.awgn_bits).abs() <= 0.1
            && (q.chi.bits - q.awgn_bits).abs() <= 0.1;
        Ok((
            ok,
            format!(
                "U = {u:.6}, max-chi = {:.6}, AWGN = {:.6}",
                q.chi.bits, q.awgn_bits
            ),
        ))
    }));
    push(Check::run(
        "sweep: cold runs identical and warm cache equal",
        || sweep_determinism(phys, "rpc-lb,rpc-ub,lpc,mnc-chi:2", (-30.0, -25.0, 5.0)),
    ));

    if full {
        push(Check::run(
            "monte carlo: LPC noise power (1e7 samples)",
            || lpc_noise_power(&params, 10_000_000, 11),
        ));
        push(Check::run(
            "monte carlo: RPC input power (1e7 samples)",
            || rpc_input_power(&params, 0.0, 10_000_000, 12),
        ));
        push(Check::run(
            "monte carlo: split-step energy (1e6 samples)",
            || ssf_energy(&params, 1_000_000, 13),
        ));
        push(Check::run("mnc: split-step histogram, TV <= 0.05", || {
            let tv = HistogramOracle::acceptance().tv_distance(&params)?;
            Ok((tv <= 0.05, format!("TV = {tv:.4}")))
        }));
        push(Check::run(
            "mnc: split-step rotation matches the series",
            || {
                let (sim, pred) = ssf_rotation(&params, 30.0, 100_000, 1000, 14)?;
                Ok((
                    (sim - pred).abs() < 0.05,
                    format!("simulated {sim:.4} rad, series {pred:.4} rad"),
                ))
            },
        ));
        let reference = derive_discrete(&PhysicalParams::reference());
        let points = reference.map_err(anyhow::Error::from).and_then(|d| {
            let upper: Vec<f64> = MNC_GRID_DBM
                .iter()
                .copied()
                .filter(|&p| p <= 40.0)
                .collect();
            mnc_points(&MNC_GRID_DBM, &upper, &d, &spec)
        });
        match points {
            Ok(points) => {
                push(Check::run(
                    "mnc: upper bound dominates max-chi on the grid",
                    || mnc_consistency(&points, -30.0, 0.0),
                ));
                push(Check::run("mnc: chi-family behaviour", || {
                    chi_behaviour(&points, &[(-30.0, 2.0), (25.0, 0.5)], 40.0, 45.0)
                }));
            }
            Err(e) => push(Check::run("mnc: bound grid", || Err(e))),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_config_collapses() {
        let r = verify(Suite::Fast, &PhysicalParams::reference().linear(), |_| {});
        assert!(r.passed(), "{:#?}", r.checks);
        assert_eq!(r.checks.len(), 3);
    }
}
