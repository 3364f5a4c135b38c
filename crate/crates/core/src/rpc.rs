//! Regular perturbative channel `y = x + jη|x|²x + n`.
//!
//! * [`lower_bound`]: closed form in the rate `λ` of the input law
//!   `f_s(s) = ζ(3η²s² + 1)e^{-λs}`.
//! * [`upper_bound`]: min over `(μ, λ)` of the duality bound built on the
//!   noncentral chi-squared law of `|y|²`. Substituting `λ = ρμ(P+P_N)`
//!   separates the problem: the `ρ`-part is a convex 1-D minimization of
//!   `D(ρ) = ρP + max_s{E[q(|y|²)|s] − ρs}` independent of `μ`, after which
//!   the `μ`-part is solved by the same cubic as the simplified bound with
//!   `P + B` replaced by `D*`.
//! * [`upper_bound_simple`]: the bound with the constant `B`.
//! * [`exact_mi`]: the mutual information of the lower-bound input law by
//!   nested quadrature over the output amplitude.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{check_positive, Error, Result};
use crate::lpc::awgn_capacity_nats;
use crate::mathkit::cubic::{q_inverse_unchecked, unique_positive_root, CubicCoeffs};
use crate::mathkit::noncentral::{noncentral_expectation, rician_log_pdf_offset};
use crate::mathkit::optimize::{log_grid, minimize_scalar};
use crate::mathkit::quad::{adaptive_vec, integrate_breaks, QuadratureSpec};
use crate::par;
use crate::params::{nats_to_bits, DiscreteChannelParams};

/// Input law `f_s(s) = ζ(3η²s² + 1)e^{-λs}` on the input power `s = |x|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RpcInputLaw {
    pub lambda: f64,
    pub zeta: f64,
    pub eta: f64,
}

impl RpcInputLaw {
    pub fn new(lambda: f64, eta: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        let l2 = lambda * lambda;
        Ok(Self {
            lambda,
            zeta: lambda * l2 / (l2 + 6.0 * eta * eta),
            eta,
        })
    }

    pub fn density(&self, s: f64) -> f64 {
        if s < 0.0 {
            return 0.0;
        }
        self.zeta * (3.0 * self.eta * self.eta * s * s + 1.0) * (-self.lambda * s).exp()
    }

    /// `E[s] = (18η² + λ²) / (λ(6η² + λ²))`.
    pub fn mean_power(&self) -> f64 {
        let e2 = self.eta * self.eta;
        let l2 = self.lambda * self.lambda;
        (18.0 * e2 + l2) / (self.lambda * (6.0 * e2 + l2))
    }

    /// Weights of the Exp(λ) and Gamma(3, λ) components.
    pub fn mixture_weights(&self) -> (f64, f64) {
        let l = self.lambda;
        (
            self.zeta / l,
            6.0 * self.zeta * self.eta * self.eta / (l * l * l),
        )
    }

    /// Density of `t = |x + jη|x|²x|² = g(s)`, which is `ζe^{-λq(t)}`.
    pub fn t_density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        self.zeta * (-self.lambda * q_inverse_unchecked(t, self.eta)).exp()
    }

    /// Closed-form `h(t) = −ln ζ + ζ(1/λ + 18η²/λ³)` in nats.
    pub fn t_entropy(&self) -> f64 {
        let l = self.lambda;
        -self.zeta.ln() + self.zeta * (1.0 / l + 18.0 * self.eta * self.eta / (l * l * l))
    }
}

fn lower_bound_value(law: &RpcInputLaw, noise_power_w: f64) -> f64 {
    let l2 = law.lambda * law.lambda;
    let e2 = law.eta * law.eta;
    let ratio = (l2 + 6.0 * e2) / (law.lambda * l2 * noise_power_w);
    let expo = 12.0 * e2 / (l2 + 6.0 * e2);
    (ratio * expo.exp()).ln_1p()
}

/// Lower bound in bits and the input law attaining it.
pub fn lower_bound(p: f64, params: &DiscreteChannelParams) -> Result<(f64, RpcInputLaw)> {
    let (nats, law) = lower_bound_nats(p, params)?;
    Ok((nats_to_bits(nats), law))
}

pub fn lower_bound_nats(p: f64, params: &DiscreteChannelParams) -> Result<(f64, RpcInputLaw)> {
    check_positive("power_w", p)?;
    let cubic = CubicCoeffs::rate_equation(p, params.eta)?;
    let lambda = unique_positive_root(&cubic)?;
    let law = RpcInputLaw::new(lambda, params.eta)?;
    let residual = ((law.mean_power() - p) / p).abs();
    if residual > 1e-9 {
        return Err(Error::ConstraintResidual { residual });
    }
    Ok((lower_bound_value(&law, params.noise_power_w), law))
}

/// `ln((μ² + 6η²)/(μ³eP_N)) + μ·d`, the objective shared by both upper bounds.
pub fn mu_objective(mu: f64, d: f64, params: &DiscreteChannelParams) -> f64 {
    let e2 = params.eta * params.eta;
    (mu * mu + 6.0 * e2).ln() - 3.0 * mu.ln() - 1.0 - params.noise_power_w.ln() + mu * d
}

fn mu_star(d: f64, eta: f64) -> Result<f64> {
    unique_positive_root(&CubicCoeffs::rate_equation(d, eta)?)
}

/// `B = P_N + √(πP_N) / (12^{3/8}·√((√3 − 1)η))`.
pub fn constant_b(params: &DiscreteChannelParams) -> Result<f64> {
    check_positive("eta", params.eta)?;
    let pn = params.noise_power_w;
    Ok(pn + (PI * pn).sqrt() / (12f64.powf(0.375) * ((3f64.sqrt() - 1.0) * params.eta).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleUpper {
    pub bits: f64,
    pub mu_star: f64,
    pub b: f64,
}

/// Simplified upper bound; undefined for `η = 0`.
pub fn upper_bound_simple(p: f64, params: &DiscreteChannelParams) -> Result<SimpleUpper> {
    check_positive("power_w", p)?;
    let b = constant_b(params)?;
    let mu = mu_star(p + b, params.eta)?;
    Ok(SimpleUpper {
        bits: nats_to_bits(mu_objective(mu, p + b, params)),
        mu_star: mu,
        b,
    })
}

/// Returns `(lower_const_bits, upper_const_bits)`, the limits of
/// `bound − 3·log₂ P` as `P → ∞`.
pub fn prelog_constants(params: &DiscreteChannelParams) -> Result<(f64, f64)> {
    check_positive("eta", params.eta)?;
    let e2 = params.eta * params.eta;
    let pn = params.noise_power_w;
    let lower = (2.0 * e2 * std::f64::consts::E.powi(2) / (9.0 * pn)).log2();
    let upper = (6.0 * e2 / pn).log2();
    Ok((lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub bits: f64,
    pub mu_star: f64,
    pub lambda_star: f64,
    pub rho_star: f64,
    /// `min_ρ D(ρ)` in W.
    pub d_star: f64,
    /// Maximizer of the inner problem at `ρ*`.
    pub s_star: f64,
    /// The inner grid had to be extended once.
    pub extended: bool,
    pub conditional_means: usize,
}

/// Memoized `E[q(|y|²) | s]` with the inner maximization over `s`.
struct InnerProblem<'a> {
    params: &'a DiscreteChannelParams,
    spec: &'a QuadratureSpec,
    cache: HashMap<u64, f64>,
    grid: Vec<f64>,
    scale: f64,
    extended: bool,
    error: Option<Error>,
}

impl<'a> InnerProblem<'a> {
    fn new(p: f64, params: &'a DiscreteChannelParams, spec: &'a QuadratureSpec) -> Self {
        let scale = p + params.noise_power_w;
        let mut grid = vec![0.0];
        grid.extend(log_grid(1e-6 * scale, 20.0 * scale, 64));
        Self {
            params,
            spec,
            cache: HashMap::new(),
            grid,
            scale,
            extended: false,
            error: None,
        }
    }

    fn e_q(&mut self, s: f64) -> f64 {
        if let Some(&v) = self.cache.get(&s.to_bits()) {
            return v;
        }
        let eta = self.params.eta;
        let v = match noncentral_expectation(
            |v| q_inverse_unchecked(v, eta),
            s,
            self.params,
            self.spec,
        ) {
            Ok(v) => v,
            Err(e) => {
                self.error.get_or_insert(e);
                f64::NAN
            }
        };
        self.cache.insert(s.to_bits(), v);
        v
    }

    /// `max_s {E_q(s) − ρs}` and its argument.
    fn max_over_s(&mut self, rho: f64) -> (f64, f64) {
        loop {
            let grid = self.grid.clone();
            let vals: Vec<f64> = grid.iter().map(|&s| self.e_q(s) - rho * s).collect();
            let best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            // Near-ties resolve toward small s so flat tails are not mistaken
            // for a boundary maximum.
            let i = vals
                .iter()
                .position(|&v| v >= best - 1e-11 * self.scale)
                .unwrap_or(0);
            if i == grid.len() - 1 {
                if !self.extended {
                    let last = *grid.last().expect("non-empty grid");
                    self.grid
                        .extend(log_grid(last, 10.0 * last, 17).into_iter().skip(1));
                    self.extended = true;
                    continue;
                }
                self.error.get_or_insert(Error::Boundary {
                    what: "inner maximum over s",
                    at: grid[i],
                });
                return (vals[i], grid[i]);
            }
            let lo = if i == 0 { 0.0 } else { grid[i - 1] };
            let hi = grid[i + 1];
            let r = minimize_scalar(|s| -(self.e_q(s) - rho * s), lo, hi, 1e-9);
            return if -r.value > vals[i] {
                (-r.value, r.x)
            } else {
                (vals[i], grid[i])
            };
        }
    }
}

pub fn upper_bound(
    p: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Result<UpperBound> {
    check_positive("power_w", p)?;
    let pn = params.noise_power_w;
    let mut inner = InnerProblem::new(p, params, spec);
    // D(1) ≤ P + P_N and D(ρ) ≥ ρP, so ρ* ∈ [1, 1 + P_N/P].
    let rho_hi = 1.0 + pn / p;
    let r = minimize_scalar(|rho| rho * p + inner.max_over_s(rho).0, 1.0, rho_hi, 1e-10);
    let (rho, d_star) = (r.x, r.value);
    let (_, s_star) = inner.max_over_s(rho);
    if let Some(e) = inner.error.take() {
        return Err(e);
    }
    let mu = mu_star(d_star, params.eta)?;
    Ok(UpperBound {
        bits: nats_to_bits(mu_objective(mu, d_star, params)),
        mu_star: mu,
        lambda_star: mu * rho * (p + pn),
        rho_star: rho,
        d_star,
        s_star,
        extended: inner.extended,
        conditional_means: inner.cache.len(),
    })
}

/// The `(μ, λ)` objective of the upper bound at a fixed pair, with the
/// inner maximum over `s` taken on the documented grid. Any pair gives a
/// valid bound.
pub fn upper_objective(
    p: f64,
    mu: f64,
    lambda: f64,
    params: &DiscreteChannelParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_positive("mu", mu)?;
    let rho = lambda / (mu * (p + params.noise_power_w));
    if rho < 1.0 {
        // E[q(|y|²)|s] − ρs grows without bound.
        return Ok(f64::INFINITY);
    }
    let mut inner = InnerProblem::new(p, params, spec);
    let (m, _) = inner.max_over_s(rho);
    if let Some(e) = inner.error.take() {
        return Err(e);
    }
    Ok(nats_to_bits(mu_objective(mu, rho * p + m, params)))
}

/// `−∫ f_t ln f_t dt` by adaptive quadrature in `t`; the second route to
/// [`RpcInputLaw::t_entropy`].
pub fn t_entropy_quadrature(law: &RpcInputLaw, spec: &QuadratureSpec) -> Result<f64> {
    let e2 = law.eta * law.eta;
    let g = |s: f64| s + e2 * s * s * s;
    let breaks: Vec<f64> = (0..=160).map(|k| g(0.5 * k as f64 / law.lambda)).collect();
    let q = integrate_breaks(
        |t| {
            let lf = law.zeta.ln() - law.lambda * q_inverse_unchecked(t, law.eta);
            -lf * lf.exp()
        },
        &breaks,
        spec,
    )?;
    Ok(q.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactMi {
    pub bits: f64,
    /// `∫ f_|y|`, ideally 1.
    pub mass: f64,
    pub nodes: usize,
}

/// Mutual information of the lower-bound input law.
pub fn exact_mi(p: f64, params: &DiscreteChannelParams, spec: &QuadratureSpec) -> Result<ExactMi> {
    let (_, law) = lower_bound_nats(p, params)?;
    let pn = params.noise_power_w;
    let sigma2 = 0.5 * pn;
    let sigma = sigma2.sqrt();
    let k = spec.tail_cutoff_sigmas;
    let e2 = params.eta * params.eta;
    let ln_zeta = law.zeta.ln();
    let inner_spec = spec.with_tol(1e-300, spec.rel_tol.min(1e-11));

    // Output amplitude density f(ρ) = ∫ f_|w|(a)·Rice(ρ | a) da.
    let mut failure: Option<Error> = None;
    let mut density = |rho: f64| -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        // Offset d = a − ρ; the Rician kernel in ρ given a is written around a.
        let lo = (-k * sigma).max(-rho);
        let hi = k * sigma;
        let panels = ((hi - lo) / (3.0 * sigma)).ceil().max(1.0) as usize;
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| lo + (hi - lo) * i as f64 / panels as f64)
            .collect();
        let r = integrate_breaks(
            |d| {
                let a = rho + d;
                if a <= 0.0 {
                    return 0.0;
                }
                let la = (2.0 * a).ln() + ln_zeta
                    - law.lambda * q_inverse_unchecked(a * a, params.eta)
                    + rician_log_pdf_offset(-d, a, sigma2);
                la.exp()
            },
            &breaks,
            &inner_spec,
        );
        match r {
            Ok(q) => q.value,
            Err(e) => {
                if let Error::Quadrature { estimate, .. } = e {
                    failure.get_or_insert(e);
                    estimate
                } else {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        }
    };

    let s_tail = 80.0 / law.lambda;
    let rho_max = (s_tail + e2 * s_tail.powi(3)).sqrt() + k * sigma;
    let mut breaks = vec![0.0];
    let mut b = 0.25 * sigma;
    while b < rho_max {
        breaks.push(b);
        b *= 1.5;
    }
    breaks.push(rho_max);

    let out = adaptive_vec(
        |rho| {
            let f = density(rho);
            if f <= 0.0 {
                return [0.0; 3];
            }
            [f, -f * f.ln(), f * (2.0 * rho).ln()]
        },
        &breaks,
        &spec.with_tol(1e-14, spec.rel_tol),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !out.converged {
        return Err(Error::Quadrature {
            estimate: out.value[1],
            error: out.error[1],
            evals: out.evals,
        });
    }
    let [mass, h_rho, e_ln] = out.value;
    let nats = h_rho + e_ln - (std::f64::consts::E * pn).ln();
    Ok(ExactMi {
        bits: nats_to_bits(nats),
        mass,
        nodes: out.evals,
    })
}

/// Combined report for one power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RpcBounds {
    pub lower_bits: f64,
    pub upper_bits: f64,
    pub upper_simple_bits: f64,
    pub lambda_star: f64,
    pub mu_star: f64,
    pub upper: UpperBound,
}

impl RpcBounds {
    pub fn consistent(&self) -> bool {
        self.lower_bits <= self.upper_bits + 1e-6
            && self.lower_bits <= self.upper_simple_bits + 1e-6
    }
}

/// All three bounds; the simplified bound falls back to the AWGN capacity
/// for the linear channel.
pub fn bounds(p: f64, params: &DiscreteChannelParams, spec: &QuadratureSpec) -> Result<RpcBounds> {
    let (lower_bits, law) = lower_bound(p, params)?;
    let upper = upper_bound(p, params, spec)?;
    let upper_simple_bits = if params.is_linear() {
        nats_to_bits(awgn_capacity_nats(p, params.noise_power_w))
    } else {
        upper_bound_simple(p, params)?.bits
    };
    Ok(RpcBounds {
        lower_bits,
        upper_bits: upper.bits,
        upper_simple_bits,
        lambda_star: law.lambda,
        mu_star: upper.mu_star,
        upper,
    })
}

/// `n` draws of `s = |x|²` from the input law.
pub fn sample_input(law: &RpcInputLaw, n: usize, seed: u64) -> Vec<f64> {
    let (w_exp, _) = law.mixture_weights();
    let scale = 1.0 / law.lambda;
    let gamma3 = Gamma::new(3.0, scale).expect("positive scale");
    let exp = Exp::new(law.lambda).expect("positive rate");
    par::draw(n, seed, |rng| {
        if rng.gen::<f64>() < w_exp {
            exp.sample(rng)
        } else {
            gamma3.sample(rng)
        }
    })
}

/// Complex input symbols with uniform phase.
pub fn sample_input_symbols(law: &RpcInputLaw, n: usize, seed: u64) -> Vec<Complex64> {
    let s = sample_input(law, n, seed);
    par::map_seeded(&s, seed ^ 0x9e37_79b9_7f4a_7c15, |rng, &si| {
        Complex64::from_polar(si.sqrt(), 2.0 * PI * rng.gen::<f64>())
    })
}

pub fn simulate(x: &[Complex64], params: &DiscreteChannelParams, seed: u64) -> Vec<Complex64> {
    let eta = params.eta;
    let pn = params.noise_power_w;
    par::map_seeded(x, seed, |rng, &xi| {
        xi + Complex64::new(0.0, eta * xi.norm_sqr()) * xi + par::complex_gaussian(rng, pn)
    })
}
