//! Cross-validation checks shared by `fibercap verify` and the acceptance
//! runner. Each check returns a verdict with a one-line explanation.

use std::f64::consts::PI;
use std::time::Instant;

use anyhow::{anyhow, Context};
use fibercap_core::mathkit::optimize::minimize_scalar;
use fibercap_core::mathkit::quad::{composite_gauss_legendre, integrate_breaks};
use fibercap_core::mathkit::QuadratureSpec;
use fibercap_core::mnc::{self, MaxChi, MncPdfParams, MncUpperBound};
use fibercap_core::params::{dbm_to_watt, watt_to_dbm};
use fibercap_core::{derive_discrete, lpc, par, rpc, DiscreteChannelParams, PhysicalParams};
use num_complex::Complex64;

use crate::cache::Cache;
use crate::config::SweepConfig;
use crate::curve::csv_string;
use crate::model::{parse_models, Model};
use crate::sweep::{evaluate_cell, run_sweep};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    /// Runs `f`; an error counts as a failure.
    pub fn run(
        name: impl Into<String>,
        f: impl FnOnce() -> anyhow::Result<(bool, String)>,
    ) -> Self {
        let t = Instant::now();
        let (passed, detail) = match f() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e:#}")),
        };
        Self {
            name: name.into(),
            passed,
            detail,
            seconds: t.elapsed().as_secs_f64(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {} ({:.1} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub fn dbm_grid(lo: i32, hi: i32, step: usize) -> Vec<f64> {
    (lo..=hi).step_by(step).map(f64::from).collect()
}

pub fn awgn_bits(p: f64, params: &DiscreteChannelParams) -> f64 {
    (p / params.noise_power_w).ln_1p() / std::f64::consts::LN_2
}

/// η = γL exactly and P_N within `tol_db` of `target_dbm`.
pub fn parameter_reproduction(
    target_eta: f64,
    target_dbm: f64,
    tol_db: f64,
) -> anyhow::Result<(bool, String)> {
    let d = derive_discrete(&PhysicalParams::reference())?;
    let pn_dbm = watt_to_dbm(d.noise_power_w)?;
    let ok = d.eta == target_eta && (pn_dbm - target_dbm).abs() <= tol_db;
    Ok((ok, format!("eta = {} 1/W, P_N = {pn_dbm:.4} dBm", d.eta)))
}

pub fn unit_round_trips() -> anyhow::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for i in -600..=600 {
        let dbm = i as f64 / 10.0;
        let back = watt_to_dbm(dbm_to_watt(dbm))?;
        worst = worst.max((back - dbm).abs() / dbm.abs().max(1.0));
    }
    Ok((
        worst <= 1e-12,
        format!("worst relative round-trip error {worst:.2e}"),
    ))
}

/// Every `(model, tolerance)` column within tolerance of the AWGN capacity on
/// the linear version of `phys`.
pub fn linear_collapse(
    phys: &PhysicalParams,
    powers_dbm: &[f64],
    models: &[(Model, f64)],
    spec: &QuadratureSpec,
) -> anyhow::Result<(bool, String)> {
    let d = derive_discrete(&phys.linear())?;
    let mut ok = true;
    let mut worst: Vec<(Model, f64, f64)> = Vec::new();
    for &(m, tol) in models {
        let mut w = (0.0f64, f64::NAN);
        for &pd in powers_dbm {
            let c = evaluate_cell(m, pd, &d, spec);
            let dev = (c.value - awgn_bits(dbm_to_watt(pd), &d)).abs();
            if !(dev <= tol) {
                ok = false;
            }
            if !(dev <= w.0) || w.1.is_nan() {
                w = (dev, pd);
            }
        }
        worst.push((m, w.0, w.1));
    }
    let detail = worst
        .iter()
        .map(|(m, dev, at)| format!("{m} {dev:.1e}@{at}"))
        .collect::<Vec<_>>()
        .join(", ");
    Ok((ok, format!("worst |Δ| bits: {detail}")))
}

/// `L ≤ exact_mi ≤ U` and `U − L ≤ max_gap` at every grid power.
pub fn rpc_sandwich(
    params: &DiscreteChannelParams,
    powers_dbm: &[f64],
    max_gap: f64,
    spec: &QuadratureSpec,
) -> anyhow::Result<(bool, String)> {
    let mut ok = true;
    let mut worst_gap = 0.0f64;
    let mut violations = Vec::new();
    for &pd in powers_dbm {
        let p = dbm_to_watt(pd);
        let b = rpc::bounds(p, params, spec)?;
        let mi = rpc::exact_mi(p, params, spec)?.bits;
        // Slack covers the quadrature tolerance only.
        let slack = 1e-9 * mi.abs().max(1.0);
        if b.lower_bits > mi + slack || mi > b.upper_bits + slack {
            ok = false;
            violations.push(format!(
                "{pd} dBm: {} / {mi} / {}",
                b.lower_bits, b.upper_bits
            ));
        }
        let gap = b.upper_bits - b.lower_bits;
        worst_gap = worst_gap.max(gap);
        if gap > max_gap {
            ok = false;
        }
    }
    let mut detail = format!(
        "{} points, largest U − L = {worst_gap:.4} bits",
        powers_dbm.len()
    );
    if !violations.is_empty() {
        detail.push_str(&format!("; order violated at {}", violations.join(", ")));
    }
    Ok((ok, detail))
}

/// Offsets from `3·log₂ P` at `p_dbm` against the given constants, and the
/// decade slope of `L` over `slope_from..` in 10 dB steps.
pub fn rpc_prelog(
    params: &DiscreteChannelParams,
    p_dbm: f64,
    upper_const: f64,
    lower_const: f64,
    margin: f64,
    slope_from: &[f64],
) -> anyhow::Result<(bool, String)> {
    let p = dbm_to_watt(p_dbm);
    let three_log = 3.0 * p.log2();
    let u = rpc::upper_bound_simple(p, params)?.bits - three_log;
    let l = rpc::lower_bound(p, params)?.0 - three_log;
    let mut ok = u <= upper_const + margin && l >= lower_const - margin;
    let mut slopes = Vec::new();
    for &pd in slope_from {
        let a = rpc::lower_bound(dbm_to_watt(pd), params)?.0;
        let b = rpc::lower_bound(dbm_to_watt(pd + 10.0), params)?.0;
        let s = (b - a) / 10f64.log2();
        ok &= (2.9..=3.1).contains(&s);
        slopes.push(format!("{s:.4}"));
    }
    Ok((
        ok,
        format!(
            "Ũ − 3log₂P = {u:.4}, L − 3log₂P = {l:.4}, decade slopes [{}]",
            slopes.join(", ")
        ),
    ))
}

/// Cubic root against direct minimization, closed-form output entropy against
/// quadrature, and tightness of the power constraint.
pub fn rpc_two_routes(
    params: &DiscreteChannelParams,
    powers_dbm: &[f64],
    spec: &QuadratureSpec,
) -> anyhow::Result<(bool, String)> {
    let (mut mu_err, mut h_err, mut pw_err) = (0.0f64, 0.0f64, 0.0f64);
    for &pd in powers_dbm {
        let p = dbm_to_watt(pd);
        let s = rpc::upper_bound_simple(p, params)?;
        let dd = p + s.b;
        let direct = minimize_scalar(
            |u| rpc::mu_objective(u.exp(), dd, params),
            (0.01 * s.mu_star).ln(),
            (100.0 * s.mu_star).ln(),
            1e-12,
        );
        mu_err = mu_err.max(((direct.x.exp() - s.mu_star) / s.mu_star).abs());

        let (_, law) = rpc::lower_bound(p, params)?;
        let closed = law.t_entropy();
        let quad = rpc::t_entropy_quadrature(&law, spec)?;
        h_err = h_err.max(((closed - quad) / closed).abs());
        pw_err = pw_err.max(((law.mean_power() - p) / p).abs());
    }
    let ok = mu_err <= 1e-6 && h_err <= 1e-6 && pw_err <= 1e-9;
    Ok((
        ok,
        format!("cubic vs minimizer {mu_err:.1e}, entropy closed form vs quadrature {h_err:.1e}, power residual {pw_err:.1e}"),
    ))
}

/// `∫∫ f(r, θ | r₀) dθ dr`: trapezoid in θ, exact for the truncated series.
pub fn mnc_total_mass(r0: f64, params: &DiscreteChannelParams) -> anyhow::Result<f64> {
    let p = MncPdfParams::new(r0, params)?;
    let sigma = (0.5 * params.noise_power_w).sqrt();
    let lo = (r0 - 13.0 * sigma).max(0.0);
    let hi = r0 + 13.0 * sigma;
    let breaks: Vec<f64> = (0..=12).map(|i| lo + (hi - lo) * i as f64 / 12.0).collect();
    let n = 256;
    let mut failure = None;
    let q = integrate_breaks(
        |r| match mnc::phase_series(r, &p) {
            Ok(s) => {
                let f_r = s.ln_amplitude_pdf.exp();
                (0..n)
                    .map(|j| s.phase_density(2.0 * PI * j as f64 / n as f64))
                    .sum::<f64>()
                    * 2.0
                    * PI
                    / n as f64
                    * f_r
            }
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        &breaks,
        &QuadratureSpec::default().with_tol(1e-12, 1e-9),
    )?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(q.value)
}

pub fn mnc_normalization(
    params: &DiscreteChannelParams,
    r0_sq_over_pn: &[f64],
    tol: f64,
) -> anyhow::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &t in r0_sq_over_pn {
        let mass = mnc_total_mass((t * params.noise_power_w).sqrt(), params)?;
        worst = worst.max((mass - 1.0).abs());
    }
    Ok((worst <= tol, format!("worst |mass − 1| = {worst:.2e}")))
}

/// Near-zero nonlinearity against the circular Gaussian in polar form.
pub fn mnc_linear_limit(noise_power_w: f64, tol: f64) -> anyhow::Result<(bool, String)> {
    let d = DiscreteChannelParams::new(1e-30, noise_power_w)?;
    let pn = noise_power_w;
    let (r0, theta0) = ((2.0 * pn).sqrt(), 0.7);
    let p = MncPdfParams::new(r0, &d)?;
    let mut worst = 0.0f64;
    for i in 0..40 {
        let r = (0.05 + 0.075 * i as f64) * pn.sqrt();
        for j in 0..40 {
            let theta = 2.0 * PI * j as f64 / 40.0;
            let got = mnc::conditional_pdf(r, theta, r0, theta0, &p)?.value;
            let diff = Complex64::from_polar(r, theta) - Complex64::from_polar(r0, theta0);
            let expect = r / (PI * pn) * (-diff.norm_sqr() / pn).exp();
            if expect > 1e-6 * r / pn {
                worst = worst.max(((got - expect) / expect).abs());
            }
        }
    }
    Ok((worst <= tol, format!("worst relative error {worst:.2e}")))
}

/// Histogram comparison of the split-step simulator with the series density.
#[derive(Debug, Clone, Copy)]
pub struct HistogramOracle {
    pub r0_sq_over_pn: f64,
    pub samples: usize,
    pub segments: usize,
    pub bins: usize,
    pub seed: u64,
}

impl HistogramOracle {
    pub fn acceptance() -> Self {
        Self {
            r0_sq_over_pn: 1.0,
            samples: 1_000_000,
            segments: 2000,
            bins: 64,
            seed: 2024,
        }
    }

    /// Total-variation distance between the empirical and predicted bin
    /// probabilities over `r ∈ [0, r₀ + 7σ]` × `θ ∈ [0, 2π)`, the mass beyond
    /// the radial range forming one extra bin.
    pub fn tv_distance(&self, params: &DiscreteChannelParams) -> anyhow::Result<f64> {
        let pn = params.noise_power_w;
        let r0 = (self.r0_sq_over_pn * pn).sqrt();
        let sigma = (0.5 * pn).sqrt();
        let r_hi = r0 + 7.0 * sigma;
        let nb = self.bins;
        let dr = r_hi / nb as f64;
        let dt = 2.0 * PI / nb as f64;

        let x = vec![Complex64::new(r0, 0.0); self.samples];
        let y = mnc::simulate_ssf(&x, self.segments, params, self.seed)?;
        let mut counts = vec![0usize; nb * nb + 1];
        for v in &y {
            let (r, t) = v.to_polar();
            let i = (r / dr) as usize;
            let j = ((t.rem_euclid(2.0 * PI) / dt) as usize).min(nb - 1);
            counts[if i < nb { i * nb + j } else { nb * nb }] += 1;
        }

        let p = MncPdfParams::new(r0, params)?;
        let mut probs = vec![0.0; nb * nb + 1];
        let edges: Vec<f64> = (0..=nb).map(|j| j as f64 * dt).collect();
        for i in 0..nb {
            for (r, w) in composite_gauss_legendre(&[i as f64 * dr, (i + 1) as f64 * dr], 12) {
                let s = mnc::phase_series(r, &p)?;
                let f_r = s.ln_amplitude_pdf.exp();
                for j in 0..nb {
                    let (a, b) = (edges[j], edges[j + 1]);
                    // ∫ (1/2π)[1 + 2Re Σ c_m e^{-jmθ}] dθ over [a, b].
                    let mut acc = (b - a) / (2.0 * PI);
                    for (k, c) in s.coeffs.iter().enumerate() {
                        let m = (k + 1) as f64;
                        let prim = (Complex64::from_polar(1.0, -m * b)
                            - Complex64::from_polar(1.0, -m * a))
                            / Complex64::new(0.0, -m);
                        acc += (c * prim).re / PI;
                    }
                    probs[i * nb + j] += w * f_r * acc;
                }
            }
        }
        probs[nb * nb] = (1.0 - probs[..nb * nb].iter().sum::<f64>()).max(0.0);
        let n = self.samples as f64;
        Ok(0.5
            * counts
                .iter()
                .zip(&probs)
                .map(|(&c, &q)| (c as f64 / n - q).abs())
                .sum::<f64>())
    }
}

/// Circular mean phase of simulated outputs against `arg ∫ f_r·c₁ dr` from
/// the series: catches a reversed rotation convention that a histogram at
/// low power cannot see.
pub fn ssf_rotation(
    params: &DiscreteChannelParams,
    r0_sq_over_pn: f64,
    samples: usize,
    segments: usize,
    seed: u64,
) -> anyhow::Result<(f64, f64)> {
    let pn = params.noise_power_w;
    let r0 = (r0_sq_over_pn * pn).sqrt();
    let sigma = (0.5 * pn).sqrt();
    let x = vec![Complex64::new(r0, 0.0); samples];
    let y = mnc::simulate_ssf(&x, segments, params, seed)?;
    let sim: Complex64 = y.iter().map(|v| v / v.norm()).sum::<Complex64>() / samples as f64;

    let p = MncPdfParams::new(r0, params)?;
    let lo = (r0 - 10.0 * sigma).max(0.0);
    let hi = r0 + 10.0 * sigma;
    let breaks: Vec<f64> = (0..=40).map(|i| lo + (hi - lo) * i as f64 / 40.0).collect();
    let mut pred = Complex64::new(0.0, 0.0);
    for (r, w) in composite_gauss_legendre(&breaks, 10) {
        let s = mnc::phase_series(r, &p)?;
        if let Some(c1) = s.coeffs.first() {
            pred += w * s.ln_amplitude_pdf.exp() * c1;
        }
    }
    Ok((sim.arg(), pred.arg()))
}

/// Sample noise power of the LPC simulator at zero input.
pub fn lpc_noise_power(
    params: &DiscreteChannelParams,
    samples: usize,
    seed: u64,
) -> anyhow::Result<(bool, String)> {
    let x = vec![Complex64::new(0.0, 0.0); samples];
    let y = lpc::simulate(&x, params, seed);
    let e: Vec<f64> = y.iter().map(|v| v.norm_sqr()).collect();
    let (mean, se) = mean_and_se(&e);
    let z = (mean - params.noise_power_w) / se;
    Ok((
        z.abs() < 4.0,
        format!(
            "mean |y|² {mean:.6e} vs P_N {:.6e} (z = {z:.2})",
            params.noise_power_w
        ),
    ))
}

/// Sample power of the RPC input law attaining the lower bound.
pub fn rpc_input_power(
    params: &DiscreteChannelParams,
    p_dbm: f64,
    samples: usize,
    seed: u64,
) -> anyhow::Result<(bool, String)> {
    let p = dbm_to_watt(p_dbm);
    let (_, law) = rpc::lower_bound(p, params)?;
    let s = rpc::sample_input(&law, samples, seed);
    let (mean, se) = mean_and_se(&s);
    let z = (mean - p) / se;
    Ok((
        z.abs() < 4.0,
        format!("mean |x|² {mean:.6e} vs P {p:.6e} (z = {z:.2})"),
    ))
}

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Average received energy after the split-step channel equals `|x|² + P_N`.
pub fn ssf_energy(
    params: &DiscreteChannelParams,
    samples: usize,
    seed: u64,
) -> anyhow::Result<(bool, String)> {
    let x0 = Complex64::from_polar(params.noise_power_w.sqrt(), 0.4);
    let y = mnc::simulate_ssf(&vec![x0; samples], 16, params, seed)?;
    let e: Vec<f64> = y.iter().map(|v| v.norm_sqr()).collect();
    let (mean, se) = mean_and_se(&e);
    let expect = x0.norm_sqr() + params.noise_power_w;
    let z = (mean - expect) / se;
    Ok((
        z.abs() < 4.0,
        format!("mean |y|² {mean:.6e} vs {expect:.6e} (z = {z:.2})"),
    ))
}

/// MNC bounds at one power.
#[derive(Debug, Clone)]
pub struct MncPoint {
    pub dbm: f64,
    pub awgn_bits: f64,
    pub upper: Option<MncUpperBound>,
    pub chi: MaxChi,
}

impl MncPoint {
    pub fn chi_member(&self, k: f64) -> Option<&mnc::ChiBound> {
        self.chi.members.iter().find(|m| m.k == k)
    }

    pub fn k_star_phase_bits(&self) -> f64 {
        self.chi_member(self.chi.k_star)
            .map(|m| m.phase_bits)
            .unwrap_or(f64::NAN)
    }
}

pub fn mnc_point(
    dbm: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
    with_upper: bool,
) -> anyhow::Result<MncPoint> {
    let p = dbm_to_watt(dbm);
    let chi = mnc::max_chi_lower_bound(p, params, spec)
        .with_context(|| format!("max-chi at {dbm} dBm"))?;
    let upper = if with_upper {
        Some(
            mnc::upper_bound(p, params, spec)
                .with_context(|| format!("upper bound at {dbm} dBm"))?,
        )
    } else {
        None
    };
    Ok(MncPoint {
        dbm,
        awgn_bits: awgn_bits(p, params),
        upper,
        chi,
    })
}

pub fn mnc_points(
    powers_dbm: &[f64],
    upper_at: &[f64],
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> anyhow::Result<Vec<MncPoint>> {
    par::map(powers_dbm, |&pd| {
        mnc_point(pd, params, spec, upper_at.contains(&pd))
    })
    .into_iter()
    .collect()
}

fn point_at(points: &[MncPoint], dbm: f64) -> anyhow::Result<&MncPoint> {
    points
        .iter()
        .find(|q| q.dbm == dbm)
        .ok_or_else(|| anyhow!("no MNC point at {dbm} dBm"))
}

/// Upper bound above max-chi everywhere; both near AWGN at `low_dbm`; upper
/// bound strictly below AWGN at `mid_dbm`.
pub fn mnc_consistency(
    points: &[MncPoint],
    low_dbm: f64,
    mid_dbm: f64,
) -> anyhow::Result<(bool, String)> {
    let mut ok = true;
    let mut below = Vec::new();
    for q in points {
        if let Some(u) = &q.upper {
            if !(u.bits >= q.chi.bits) {
                ok = false;
                below.push(format!("{} dBm", q.dbm));
            }
        }
    }
    let low = point_at(points, low_dbm)?;
    let low_u = low
        .upper
        .as_ref()
        .ok_or_else(|| anyhow!("no upper bound at {low_dbm} dBm"))?
        .bits;
    ok &= (low_u - low.awgn_bits).abs() <= 0.1 && (low.chi.bits - low.awgn_bits).abs() <= 0.1;
    let mid = point_at(points, mid_dbm)?;
    let mid_u = mid
        .upper
        .as_ref()
        .ok_or_else(|| anyhow!("no upper bound at {mid_dbm} dBm"))?
        .bits;
    ok &= mid_u < mid.awgn_bits;
    let mut detail = format!(
        "at {low_dbm} dBm U = {low_u:.6}, max-chi = {:.6}, AWGN = {:.6}; at {mid_dbm} dBm U = {mid_u:.4} < AWGN = {:.4}",
        low.chi.bits, low.awgn_bits, mid.awgn_bits
    );
    if !below.is_empty() {
        detail.push_str(&format!("; U < max-chi at {}", below.join(", ")));
    }
    Ok((ok, detail))
}

/// Optimal chi orders at two powers, the half-Gaussian decade slope between
/// `slope_dbm` and `slope_dbm + 10`, and the decay of the phase component.
pub fn chi_behaviour(
    points: &[MncPoint],
    expected_k: &[(f64, f64)],
    slope_dbm: f64,
    phase_dbm: f64,
) -> anyhow::Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(dbm, k) in expected_k {
        let got = point_at(points, dbm)?.chi.k_star;
        ok &= got == k;
        parts.push(format!("k* = {got} at {dbm} dBm"));
    }
    let a = point_at(points, slope_dbm)?
        .chi_member(1.0)
        .ok_or_else(|| anyhow!("no k = 1 member"))?;
    let b = point_at(points, slope_dbm + 10.0)?
        .chi_member(1.0)
        .ok_or_else(|| anyhow!("no k = 1 member"))?;
    let slope = (b.total_bits - a.total_bits) / 10f64.log2();
    ok &= (0.4..=0.6).contains(&slope);
    parts.push(format!("k = 1 decade slope {slope:.4}"));
    let peak = points
        .iter()
        .map(|q| q.k_star_phase_bits())
        .fold(f64::NEG_INFINITY, f64::max);
    let late = point_at(points, phase_dbm)?.k_star_phase_bits();
    ok &= late < 0.2 * peak;
    parts.push(format!(
        "phase component {late:.4} at {phase_dbm} dBm vs grid peak {peak:.4}"
    ));
    Ok((ok, parts.join(", ")))
}

/// Two cold in-memory sweeps give identical CSV text, and a warm file cache
/// reproduces them.
pub fn sweep_determinism(
    phys: &PhysicalParams,
    models: &str,
    powers: (f64, f64, f64),
) -> anyhow::Result<(bool, String)> {
    let cfg = SweepConfig {
        p_min_dbm: powers.0,
        p_max_dbm: powers.1,
        step_db: powers.2,
        models: parse_models(models)?,
        physical: *phys,
        ..SweepConfig::default()
    };
    let dir = std::env::temp_dir().join(format!("fibercap-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("cache.json");
    let _ = std::fs::remove_file(&path);

    let t = Instant::now();
    let cold_a = csv_string(&run_sweep(&cfg, &Cache::open(&path)?)?)?;
    let cold_time = t.elapsed().as_secs_f64();
    let cold_b = csv_string(&run_sweep(&cfg, &Cache::disabled())?)?;
    let t = Instant::now();
    let warm = csv_string(&run_sweep(&cfg, &Cache::open(&path)?)?)?;
    let warm_time = t.elapsed().as_secs_f64();
    let _ = std::fs::remove_dir_all(&dir);

    let ok = cold_a == cold_b && cold_a == warm;
    Ok((
        ok,
        format!(
            "cold runs {}, warm run {}; cold {cold_time:.2} s, warm {warm_time:.2} s",
            if cold_a == cold_b {
                "identical"
            } else {
                "differ"
            },
            if cold_a == warm {
                "identical"
            } else {
                "differs"
            }
        ),
    ))
}
