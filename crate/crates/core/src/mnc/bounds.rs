//! Capacity bounds for the MNC: the Gamma-reference upper bound and the
//! chi-family lower bounds with their amplitude/phase split.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, ln_gamma};
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{check_positive, Error, Result};
use crate::mathkit::noncentral::rician_log_pdf;
use crate::mathkit::optimize::{log_grid, maximize_scalar, nelder_mead, NelderMeadOptions};
use crate::mathkit::quad::{adaptive_vec, composite_gauss_legendre, QuadratureSpec};
use crate::mnc::entropy::{cond_entropies, CondEntropies};
use crate::mnc::pdf::MncPdfParams;
use crate::par;
use crate::params::{nats_to_bits, DiscreteChannelParams};

/// Degrees of freedom searched by the max-chi bound.
pub const CHI_ORDERS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 2.5];
/// Members closer than this count as tied; ties go to the smaller order.
pub const CHI_TIE_BITS: f64 = 1e-7;

const R0_GRID_POINTS: usize = 48;
const R0_GRID_LO: f64 = 1e-3;
const R0_GRID_HI: f64 = 10.0;
const R0_EXTENSION_POINTS: usize = 17;
const EXTENSION_PER_DECADE: f64 = 16.0;
/// Extension radius in units of `1/(η√P_N)`.
const UNIFORM_PHASE_SPREAD: f64 = 30.0;
/// Cap on the extension radius relative to the base grid end.
const MAX_EXTENSION: f64 = 1e4;
/// Grid values closer than this (nats) count as ties; ties go to smaller r₀.
const TIE_TOL: f64 = 1e-8;

/// Scaled chi amplitude law with `E[r₀²] = power_w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiInputLaw {
    pub k: f64,
    pub power_w: f64,
}

impl ChiInputLaw {
    pub fn new(k: f64, power_w: f64) -> Result<Self> {
        check_positive("k", k)?;
        check_positive("power_w", power_w)?;
        Ok(Self { k, power_w })
    }

    /// `r₀²` is Gamma distributed with this shape and scale.
    pub fn power_shape(&self) -> f64 {
        0.5 * self.k
    }

    pub fn power_scale(&self) -> f64 {
        2.0 * self.power_w / self.k
    }

    pub fn log_density(&self, r0: f64) -> f64 {
        if r0 <= 0.0 {
            return if self.k < 1.0 {
                f64::INFINITY
            } else if self.k == 1.0 {
                self.log_norm()
            } else {
                f64::NEG_INFINITY
            };
        }
        self.log_norm() + (self.k - 1.0) * r0.ln() - self.k * r0 * r0 / (2.0 * self.power_w)
    }

    pub fn density(&self, r0: f64) -> f64 {
        self.log_density(r0).exp()
    }

    /// `ln(2/Γ(k/2)·(k/2P)^{k/2})`.
    fn log_norm(&self) -> f64 {
        2f64.ln() - ln_gamma(0.5 * self.k) + 0.5 * self.k * (self.k / (2.0 * self.power_w)).ln()
    }

    /// `ln(f_t(t)·t)` for `t = r₀²`, the density of `ln t`.
    fn log_density_of_log_power(&self, t: f64) -> f64 {
        let a = self.power_shape();
        let s = self.power_scale();
        a * (t / s).ln() - t / s - ln_gamma(a)
    }
}

/// Memo of conditional entropies keyed by the exact bits of `r₀`.
struct EntropyCache {
    pdf: MncPdfParams,
    spec: QuadratureSpec,
    map: HashMap<u64, CondEntropies>,
    flagged: bool,
}

impl EntropyCache {
    fn new(params: &DiscreteChannelParams, spec: &QuadratureSpec) -> Result<Self> {
        Ok(Self {
            pdf: MncPdfParams::new(0.0, params)?,
            spec: *spec,
            map: HashMap::new(),
            flagged: false,
        })
    }

    /// Fills the cache for all of `r0s`, evaluating misses in parallel.
    fn prefetch(&mut self, r0s: &[f64]) -> Result<()> {
        let missing: Vec<f64> = r0s
            .iter()
            .copied()
            .filter(|r| !self.map.contains_key(&r.to_bits()))
            .collect();
        let (pdf, spec) = (self.pdf, self.spec);
        let out = par::map(&missing, |&r0| cond_entropies(r0, &pdf, &spec));
        for (r0, c) in missing.into_iter().zip(out) {
            let c = c?;
            self.flagged |= c.flagged;
            self.map.insert(r0.to_bits(), c);
        }
        Ok(())
    }

    fn get(&mut self, r0: f64) -> Result<CondEntropies> {
        if let Some(c) = self.map.get(&r0.to_bits()) {
            return Ok(*c);
        }
        let c = cond_entropies(r0, &self.pdf, &self.spec)?;
        self.flagged |= c.flagged;
        self.map.insert(r0.to_bits(), c);
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MncUpperBound {
    pub bits: f64,
    pub lambda: f64,
    pub a_shape: f64,
    /// Maximizer of the inner problem at the reported `(λ, a_shape)`.
    pub r0_star: f64,
    pub evals: usize,
    /// The grid-based simplex phase met its tolerances.
    pub converged: bool,
    /// The inner maximum at the reported point lies past the base r₀ grid,
    /// in the extension or in the closed-form tail.
    pub inner_boundary: bool,
    /// The phase was not yet uniform at the tail anchor, so the tail is not
    /// guaranteed to dominate.
    pub tail_unverified: bool,
    /// Some phase series hit `m_max` or the phase grid cap.
    pub series_flagged: bool,
}

struct UpperProblem {
    cache: EntropyCache,
    p_total: f64,
    noise: f64,
    linear: bool,
    /// Base scan grid followed by its extension; increasing.
    grid: Vec<f64>,
    base_len: usize,
    error: Option<Error>,
}

impl UpperProblem {
    fn new(p: f64, params: &DiscreteChannelParams, spec: &QuadratureSpec) -> Result<Self> {
        check_positive("p", p)?;
        spec.validate()?;
        let noise = params.noise_power_w;
        let p_total = p + noise;
        let s = p_total.sqrt();
        let mut grid = vec![0.0];
        grid.extend(log_grid(R0_GRID_LO * s, R0_GRID_HI * s, R0_GRID_POINTS));
        let base_len = grid.len();
        let mut r_end = 10.0 * R0_GRID_HI * s;
        let pdf = MncPdfParams::new(r_end, params)?;
        let linear = pdf.is_effectively_linear(r_end);
        if !linear {
            // Radius past which the Kerr phase noise has wrapped the phase
            // many times over.
            let uniform = UNIFORM_PHASE_SPREAD / (params.eta * noise.sqrt());
            r_end = r_end.max(uniform.min(MAX_EXTENSION * R0_GRID_HI * s));
        }
        let decades = (r_end / (R0_GRID_HI * s)).log10();
        let n_ext = R0_EXTENSION_POINTS.max((EXTENSION_PER_DECADE * decades).ceil() as usize + 1);
        grid.extend_from_slice(&log_grid(R0_GRID_HI * s, r_end, n_ext)[1..]);
        let mut cache = EntropyCache::new(params, spec)?;
        cache.prefetch(&grid)?;
        Ok(Self {
            cache,
            p_total,
            noise,
            linear,
            grid,
            base_len,
            error: None,
        })
    }

    fn g(&self, c: &CondEntropies, r0: f64, lambda: f64, a: f64) -> f64 {
        (a - lambda) * (r0 * r0 + self.noise) / self.p_total + (1.0 - 2.0 * a) * c.e_log_r
            - c.h_r
            - c.h_theta
    }

    fn g_at(&mut self, r0: f64, lambda: f64, a: f64) -> f64 {
        match self.cache.get(r0) {
            Ok(c) => self.g(&c, r0, lambda, a),
            Err(e) => {
                self.error.get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn tail_unverified(&mut self) -> bool {
        let r_end = *self.grid.last().expect("non-empty grid");
        match self.cache.get(r_end) {
            Ok(c) => !self.linear && c.h_theta < (2.0 * PI).ln() - 1e-9,
            Err(_) => true,
        }
    }

    /// `sup g` over `r₀ ≥ r_end`. Past the anchor `E[ln r] − ln r₀` and the
    /// entropy deficits only shrink, so the shape
    /// `(a − λ)(r₀² + P_N)/(P + P_N) + b·ln r₀` matched at the anchor
    /// dominates. In the linear channel the phase keeps concentrating, which
    /// adds one to `b`.
    fn tail(&mut self, lambda: f64, a: f64) -> (f64, f64) {
        let r_end = *self.grid.last().expect("non-empty grid");
        let b = 1.0 - 2.0 * a + if self.linear { 1.0 } else { 0.0 };
        let (noise, p_total) = (self.noise, self.p_total);
        let shape = |r: f64| (a - lambda) * (r * r + noise) / p_total + b * r.ln();
        if lambda < a || (lambda == a && b > 0.0) {
            return (f64::INFINITY, f64::INFINITY);
        }
        let r = if b > 0.0 {
            (b * self.p_total / (2.0 * (lambda - a))).sqrt().max(r_end)
        } else {
            r_end
        };
        let offset = self.g_at(r_end, lambda, a) - shape(r_end);
        (offset + shape(r), r)
    }

    /// `sup_{r₀} g` with its location and whether it lies past the base grid.
    fn inner_max(&mut self, lambda: f64, a: f64, refine: bool) -> (f64, f64, bool) {
        let pts = self.grid.clone();
        let (i, mut best) = self.scan(&pts, lambda, a);
        let (tail, r_tail) = self.tail(lambda, a);
        if tail > best + TIE_TOL {
            return (tail, r_tail, true);
        }
        let mut r0 = pts[i];
        if refine && i + 1 < pts.len() {
            let o = if i == 0 {
                maximize_scalar(|r| self.g_at(r, lambda, a), 0.0, pts[1], 1e-6)
            } else {
                let (lo, hi) = (pts[i - 1].ln(), pts[i + 1].ln());
                let o = maximize_scalar(|u| self.g_at(u.exp(), lambda, a), lo, hi, 1e-6);
                crate::mathkit::ScalarOptimum { x: o.x.exp(), ..o }
            };
            if o.value > best {
                best = o.value;
                r0 = o.x;
            }
        }
        (best, r0, i + 1 >= self.base_len)
    }

    fn scan(&mut self, pts: &[f64], lambda: f64, a: f64) -> (usize, f64) {
        let vals: Vec<f64> = pts.iter().map(|&r| self.g_at(r, lambda, a)).collect();
        let top = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let i = vals.iter().position(|&v| v >= top - TIE_TOL).unwrap_or(0);
        (i, top)
    }

    /// Objective in nats, the inner maximizer and the boundary flag.
    fn objective(&mut self, x: &[f64], refine: bool) -> (f64, f64, bool) {
        let (lambda, a) = (x[0].exp(), x[1].exp());
        if !(lambda.is_finite() && a.is_finite() && a > 0.0) || lambda < a {
            return (f64::INFINITY, f64::INFINITY, true);
        }
        let (gmax, r0, boundary) = self.inner_max(lambda, a, refine);
        (
            a * (self.p_total / a).ln() + PI.ln() + ln_gamma(a) + lambda + gmax,
            r0,
            boundary,
        )
    }
}

/// `min_{λ, a}` of the Gamma-reference bound, evaluated in two simplex phases:
/// first against the cached r₀ grid, then a short polish with the refined
/// inner maximum. Every reported value uses the refined maximum, so it is a
/// valid bound whether or not the polish moves.
pub fn upper_bound(
    p: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Result<MncUpperBound> {
    let mut prob = UpperProblem::new(p, params, spec)?;
    let coarse = nelder_mead(
        |x| prob.objective(x, false).0,
        &[0.0, 0.0],
        &NelderMeadOptions::default(),
    );
    let polish_opts = NelderMeadOptions {
        initial_step: 0.05,
        f_tol: 1e-8,
        x_tol: 1e-3,
        max_evals: 40,
    };
    let fine = nelder_mead(|x| prob.objective(x, true).0, &coarse.x, &polish_opts);
    if let Some(e) = prob.error.take() {
        return Err(e);
    }
    if !fine.value.is_finite() {
        return Err(Error::Boundary {
            what: "MNC upper bound inner maximum",
            at: fine.x[0].exp(),
        });
    }
    let (_, r0_star, inner_boundary) = prob.objective(&fine.x, true);
    Ok(MncUpperBound {
        bits: nats_to_bits(fine.value),
        lambda: fine.x[0].exp(),
        a_shape: fine.x[1].exp(),
        r0_star,
        evals: coarse.evals + fine.evals,
        converged: coarse.converged,
        inner_boundary,
        tail_unverified: prob.tail_unverified(),
        series_flagged: prob.cache.flagged,
    })
}

/// The un-minimized objective at a fixed `(λ, a_shape)`, in bits; itself an
/// upper bound.
pub fn upper_objective(
    p: f64,
    lambda: f64,
    a_shape: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_positive("a_shape", a_shape)?;
    let mut prob = UpperProblem::new(p, params, spec)?;
    let (v, _, _) = prob.objective(&[lambda.ln(), a_shape.ln()], true);
    if let Some(e) = prob.error {
        return Err(e);
    }
    Ok(nats_to_bits(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiBound {
    pub k: f64,
    pub total_bits: f64,
    pub amplitude_bits: f64,
    pub phase_bits: f64,
    pub flagged: bool,
}

/// Conditional entropies tabulated on Gauss nodes in `ln r₀²`. The node set
/// depends only on the power, so one table serves every chi order.
pub struct InputTable {
    power_w: f64,
    t_lo: f64,
    origin: CondEntropies,
    nodes: Vec<(f64, f64)>,
    stats: Vec<CondEntropies>,
    flagged: bool,
}

/// Upper end of the `r₀²` table, in units of the power. The Gamma tail beyond
/// it is below e^{-60} for every order in [`CHI_ORDERS`].
const TABLE_SPAN: f64 = 241.0;
const TABLE_NODES_PER_PANEL: usize = 10;

impl InputTable {
    pub fn new(p: f64, params: &DiscreteChannelParams, spec: &QuadratureSpec) -> Result<Self> {
        check_positive("p", p)?;
        let t_lo = 1e-6 * p.min(params.noise_power_w);
        let t_hi = TABLE_SPAN * p;
        let (u_lo, u_hi) = (t_lo.ln(), t_hi.ln());
        let panels = (u_hi - u_lo).ceil() as usize;
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| u_lo + (u_hi - u_lo) * i as f64 / panels as f64)
            .collect();
        let nodes = composite_gauss_legendre(&breaks, TABLE_NODES_PER_PANEL);
        let pdf = MncPdfParams::new(0.0, params)?;
        let mut r0s: Vec<f64> = vec![0.0];
        r0s.extend(nodes.iter().map(|&(u, _)| (0.5 * u).exp()));
        let out = par::map(&r0s, |&r0| cond_entropies(r0, &pdf, spec));
        let mut stats = Vec::with_capacity(out.len());
        for c in out {
            stats.push(c?);
        }
        let origin = stats.remove(0);
        let flagged = origin.flagged || stats.iter().any(|c| c.flagged);
        Ok(Self {
            power_w: p,
            t_lo,
            origin,
            nodes,
            stats,
            flagged,
        })
    }

    /// `(E[h(r|r₀)], E[h(θ|r,r₀)])` under `law`.
    pub fn expectations(&self, law: &ChiInputLaw) -> (f64, f64) {
        assert_eq!(law.power_w, self.power_w, "table built for another power");
        let head = gamma_lr(law.power_shape(), self.t_lo / law.power_scale());
        let mut mass = head;
        let mut h_r = head * self.origin.h_r;
        let mut h_theta = head * self.origin.h_theta;
        for (&(u, w), c) in self.nodes.iter().zip(&self.stats) {
            let wt = w * law.log_density_of_log_power(u.exp()).exp();
            mass += wt;
            h_r += wt * c.h_r;
            h_theta += wt * c.h_theta;
        }
        (h_r / mass, h_theta / mass)
    }
}

/// `f_r(r) = ∫ f_{r₀}(r₀)·f_{r|r₀}(r|r₀) dr₀` over the window where the
/// Rician kernel is visible.
fn output_amplitude_density(r: f64, law: &ChiInputLaw, noise: f64, spec: &QuadratureSpec) -> f64 {
    let sigma2 = 0.5 * noise;
    let sigma = sigma2.sqrt();
    let kk = spec.tail_cutoff_sigmas;
    let lo = (r - kk * sigma).max(0.0);
    let hi = r + kk * sigma;
    let sp = law.power_w.sqrt();
    let mut marks: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0].iter().map(|c| c * sp).collect();
    let panels = ((hi - lo) / (3.0 * sigma)).ceil().max(1.0) as usize;
    marks.extend((0..=panels).map(|i| lo + (hi - lo) * i as f64 / panels as f64));
    marks.retain(|&m| m >= lo && m <= hi);
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let inner = spec.with_tol(1e-300, 1e-11);
    if lo == 0.0 {
        // w = r₀^k removes the r₀^{k-1} behavior at the origin.
        let k = law.k;
        let log_c = law.log_norm() - k.ln();
        let breaks: Vec<f64> = marks.iter().map(|m| m.powf(k)).collect();
        adaptive_vec(
            |w| {
                let r0 = w.powf(1.0 / k);
                [
                    (log_c - k * r0 * r0 / (2.0 * law.power_w) + rician_log_pdf(r, r0, sigma2))
                        .exp(),
                ]
            },
            &breaks,
            &inner,
        )
        .value[0]
    } else {
        adaptive_vec(
            |r0| [(law.log_density(r0) + rician_log_pdf(r, r0, sigma2)).exp()],
            &marks,
            &inner,
        )
        .value[0]
    }
}

/// `h(r)` of the output amplitude under a chi input, in nats.
pub fn output_amplitude_entropy(
    law: &ChiInputLaw,
    noise: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let sigma = (0.5 * noise).sqrt();
    let r_max = (TABLE_SPAN * law.power_w).sqrt() + spec.tail_cutoff_sigmas * sigma;
    let mut breaks = vec![0.0];
    let mut b = 0.25 * sigma.min(law.power_w.sqrt());
    while b < r_max {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(r_max);
    let out = adaptive_vec(
        |r| {
            let f = output_amplitude_density(r, law, noise, spec);
            if f > 0.0 {
                [f, -f * f.ln()]
            } else {
                [0.0, 0.0]
            }
        },
        &breaks,
        spec,
    );
    if !out.converged {
        return Err(Error::Quadrature {
            estimate: out.value[1],
            error: out.error[1],
            evals: out.evals,
        });
    }
    Ok(out.value[1] / out.value[0])
}

pub fn chi_from_table(
    table: &InputTable,
    k: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Result<ChiBound> {
    let law = ChiInputLaw::new(k, table.power_w)?;
    let (e_hr, e_htheta) = table.expectations(&law);
    let h_out = output_amplitude_entropy(&law, params.noise_power_w, spec)?;
    let amplitude_bits = nats_to_bits(h_out - e_hr);
    let phase_bits = nats_to_bits((2.0 * PI).ln() - e_htheta);
    Ok(ChiBound {
        k,
        total_bits: amplitude_bits + phase_bits,
        amplitude_bits,
        phase_bits,
        flagged: table.flagged,
    })
}

/// Mutual information of a chi-amplitude, uniform-phase input, split into
/// amplitude and phase components.
pub fn chi_lower_bound(
    p: f64,
    k: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Result<ChiBound> {
    check_positive("k", k)?;
    let table = InputTable::new(p, params, spec)?;
    chi_from_table(&table, k, params, spec)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxChi {
    pub bits: f64,
    pub k_star: f64,
    pub members: Vec<ChiBound>,
}

pub fn max_chi_lower_bound(
    p: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Result<MaxChi> {
    let table = InputTable::new(p, params, spec)?;
    max_chi_from_table(&table, params, spec)
}

/// Near-ties within `CHI_TIE_BITS` go to the smaller order.
pub fn max_chi_from_table(
    table: &InputTable,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Result<MaxChi> {
    let mut members = Vec::with_capacity(CHI_ORDERS.len());
    for &k in &CHI_ORDERS {
        members.push(chi_from_table(table, k, params, spec)?);
    }
    let mut best = members[0];
    for m in &members[1..] {
        if m.total_bits > best.total_bits + CHI_TIE_BITS {
            best = *m;
        }
    }
    Ok(MaxChi {
        bits: best.total_bits,
        k_star: best.k,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkit::quad::{integrate, Domain};

    #[test]
    fn chi_law_has_unit_mass_and_power() {
        for k in CHI_ORDERS {
            let law = ChiInputLaw::new(k, 2e-3).unwrap();
            let spec = QuadratureSpec::default();
            // Integrate in w = r₀^k to tame the origin.
            let lc = law.log_norm() - k.ln();
            let mass = integrate(
                |w| {
                    let r = w.powf(1.0 / k);
                    (lc - k * r * r / (2.0 * law.power_w)).exp()
                },
                Domain::Finite {
                    a: 0.0,
                    b: (20.0 * law.power_w.sqrt()).powf(k),
                },
                &spec,
            )
            .unwrap();
            assert!((mass.value - 1.0).abs() < 1e-9, "k={k}: {}", mass.value);
        }
    }

    #[test]
    fn rayleigh_input_gives_awgn_entropy() {
        // k = 2 through a linear channel: r is Rayleigh with E[r²] = P + P_N.
        let pn = 1e-3;
        let p = 4e-3;
        let law = ChiInputLaw::new(2.0, p).unwrap();
        let h = output_amplitude_entropy(&law, pn, &QuadratureSpec::default()).unwrap();
        let s = (0.5 * (p + pn)).sqrt();
        let euler = 0.577_215_664_901_532_9;
        let exact = 1.0 + (s / 2f64.sqrt()).ln() + 0.5 * euler;
        assert!((h - exact).abs() < 1e-8, "{h} vs {exact}");
    }
}
