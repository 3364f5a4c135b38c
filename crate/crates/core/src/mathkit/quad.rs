//! Adaptive Gauss–Kronrod quadrature (10-point Gauss embedded in 21-point
//! Kronrod panels), scalar and vector-valued, plus fixed Gauss–Legendre rules
//! for composite grids.

use serde::{Deserialize, Serialize};
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_nodes: usize,
    /// Semi-infinite domains are cut after this many decay scales (and then
    /// extended panel by panel while the tail is still visible).
    pub tail_cutoff_sigmas: f64,
}

impl QuadratureSpec {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        max_nodes: usize,
        tail_cutoff_sigmas: f64,
    ) -> Result<Self> {
        let s = Self {
            abs_tol,
            rel_tol,
            max_nodes,
            tail_cutoff_sigmas,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                value: self.abs_tol.min(self.rel_tol),
                reason: "quadrature tolerances must be positive",
            });
        }
        if self.max_nodes < 16 {
            return Err(Error::InvalidParameter {
                name: "max_nodes",
                value: self.max_nodes as f64,
                reason: "at least 16 nodes required",
            });
        }
        if !(self.tail_cutoff_sigmas > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tail_cutoff_sigmas",
                value: self.tail_cutoff_sigmas,
                reason: "must be positive",
            });
        }
        Ok(())
    }

    pub fn with_tol(self, abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..self
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_nodes: 200_000,
            tail_cutoff_sigmas: 12.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite {
        a: f64,
        b: f64,
    },
    /// `[start, ∞)` for an integrand decaying on the length `scale`.
    SemiInfinite {
        start: f64,
        scale: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

/// Raw outcome of the vector integrator; `converged` is false when the node
/// budget ran out first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub evals: usize,
    pub converged: bool,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_778,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Clone, Copy)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
    priority: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

fn kronrod<const N: usize, F: FnMut(f64) -> [f64; N]>(
    f: &mut F,
    a: f64,
    b: f64,
) -> ([f64; N], [f64; N]) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [[0.0; N]; 21];
    fv[0] = f(c);
    for j in 0..10 {
        let dx = h * XGK[j];
        fv[1 + 2 * j] = f(c - dx);
        fv[2 + 2 * j] = f(c + dx);
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for n in 0..N {
        let centre = fv[0][n];
        let mut rk = WGK[10] * centre;
        let mut rg = 0.0;
        let mut rabs = WGK[10] * centre.abs();
        for j in 0..10 {
            let (l, r) = (fv[1 + 2 * j][n], fv[2 + 2 * j][n]);
            rk += WGK[j] * (l + r);
            rabs += WGK[j] * (l.abs() + r.abs());
            if j % 2 == 1 {
                rg += WG[j / 2] * (l + r);
            }
        }
        let mean = 0.5 * rk;
        let mut rasc = WGK[10] * (centre - mean).abs();
        for j in 0..10 {
            rasc += WGK[j] * ((fv[1 + 2 * j][n] - mean).abs() + (fv[2 + 2 * j][n] - mean).abs());
        }
        let rk = rk * h;
        let rabs = rabs * h.abs();
        let rasc = rasc * h.abs();
        let mut err = ((rk - rg * h).abs()).max(0.0);
        if rasc != 0.0 && err != 0.0 {
            err = rasc * (200.0 * err / rasc).powf(1.5).min(1.0);
        }
        if rabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * rabs);
        }
        if !rk.is_finite() {
            err = f64::INFINITY;
        }
        value[n] = rk;
        error[n] = err;
    }
    (value, error)
}

fn priority<const N: usize>(err: &[f64; N], a: f64, b: f64) -> f64 {
    if (b - a).abs() <= 64.0 * f64::EPSILON * a.abs().max(b.abs()).max(f64::MIN_POSITIVE) {
        // Cannot be split further.
        return -1.0;
    }
    err.iter().copied().fold(0.0, f64::max)
}

/// Globally adaptive vector integration over consecutive break points.
pub fn adaptive_vec<const N: usize, F: FnMut(f64) -> [f64; N]>(
    mut f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> QuadOutcome<N> {
    assert!(breaks.len() >= 2, "need at least one interval");
    let mut heap: BinaryHeap<Panel<N>> = BinaryHeap::new();
    let mut total = [0.0; N];
    let mut total_err = [0.0; N];
    let mut evals = 0usize;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let (v, e) = kronrod(&mut f, a, b);
        evals += 21;
        for n in 0..N {
            total[n] += v[n];
            total_err[n] += e[n];
        }
        heap.push(Panel {
            a,
            b,
            value: v,
            error: e,
            priority: priority(&e, a, b),
        });
    }
    let done = |total: &[f64; N], err: &[f64; N]| {
        (0..N).all(|n| err[n] <= spec.abs_tol.max(spec.rel_tol * total[n].abs()))
    };
    let mut converged = done(&total, &total_err);
    while !converged {
        if evals + 42 > spec.max_nodes {
            break;
        }
        let Some(p) = heap.pop() else { break };
        if p.priority < 0.0 {
            heap.push(p);
            break;
        }
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = kronrod(&mut f, p.a, m);
        let (v2, e2) = kronrod(&mut f, m, p.b);
        evals += 42;
        for n in 0..N {
            total[n] += v1[n] + v2[n] - p.value[n];
            total_err[n] += e1[n] + e2[n] - p.error[n];
        }
        heap.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
            priority: priority(&e1, p.a, m),
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
            priority: priority(&e2, m, p.b),
        });
        converged = done(&total, &total_err);
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for p in heap.iter() {
        for n in 0..N {
            value[n] += p.value[n];
            error[n] += p.error[n];
        }
    }
    if !converged {
        converged = done(&value, &error);
    }
    QuadOutcome {
        value,
        error,
        evals,
        converged,
    }
}

fn outcome_to_result(o: QuadOutcome<1>) -> Result<Quadrature> {
    if o.converged && o.value[0].is_finite() {
        Ok(Quadrature {
            value: o.value[0],
            error: o.error[0],
            evals: o.evals,
        })
    } else {
        Err(Error::Quadrature {
            estimate: o.value[0],
            error: o.error[0],
            evals: o.evals,
        })
    }
}

/// Integrates a scalar function over consecutive break points.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    outcome_to_result(adaptive_vec(|x| [f(x)], breaks, spec))
}

pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    match domain {
        Domain::Finite { a, b } => integrate_breaks(f, &[a, b], spec),
        Domain::SemiInfinite { start, scale } => {
            if !(scale > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "scale",
                    value: scale,
                    reason: "semi-infinite domains need a positive decay scale",
                });
            }
            let width = spec.tail_cutoff_sigmas * scale;
            let n_head = spec.tail_cutoff_sigmas.ceil().max(1.0) as usize;
            let breaks: Vec<f64> = (0..=n_head)
                .map(|i| start + width * i as f64 / n_head as f64)
                .collect();
            let mut q = integrate_breaks(&mut f, &breaks, spec)?;
            let mut lo = start + width;
            for _ in 0..64 {
                let tail = integrate_breaks(&mut f, &[lo, lo + width], spec)?;
                q.value += tail.value;
                q.error += tail.error;
                q.evals += tail.evals;
                lo += width;
                if tail.value.abs() <= 0.1 * spec.abs_tol.max(spec.rel_tol * q.value.abs()) {
                    return Ok(q);
                }
            }
            Err(Error::Quadrature {
                estimate: q.value,
                error: q.error,
                evals: q.evals,
            })
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Cached 10-point rule.
pub fn gauss_legendre_10() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(10))
}

/// Nodes and weights of a composite rule: `n` Gauss points in each panel
/// between consecutive break points.
pub fn composite_gauss_legendre(breaks: &[f64], n: usize) -> Vec<(f64, f64)> {
    let (x, w) = if n == 10 {
        gauss_legendre_10().clone()
    } else {
        gauss_legendre(n)
    };
    let mut out = Vec::with_capacity(n * breaks.len().saturating_sub(1));
    for p in breaks.windows(2) {
        let c = 0.5 * (p[0] + p[1]);
        let h = 0.5 * (p[1] - p[0]);
        for (xi, wi) in x.iter().zip(&w) {
            out.push((c + h * xi, h * wi));
        }
    }
    out
}
