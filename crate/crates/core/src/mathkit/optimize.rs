//! Bounded scalar minimization (Brent: golden section with parabolic steps),
//! grid pre-scan helpers and a small Nelder–Mead simplex.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarOptimum {
    pub x: f64,
    pub value: f64,
    /// The optimum is an endpoint of the bracket.
    pub at_boundary: bool,
    pub evals: usize,
}

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Minimizes `f` on `[lo, hi]`; `rel_tol` is relative to `|x|`.
pub fn minimize_scalar<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> ScalarOptimum {
    assert!(lo < hi, "empty bracket");
    let abs_tol = 1e-300_f64.max(f64::EPSILON * (hi - lo));
    let (mut a, mut b) = (lo, hi);
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let mut evals = 1;
    for _ in 0..500 {
        let m = 0.5 * (a + b);
        let tol = rel_tol * x.abs() + abs_tol;
        let t2 = 2.0 * tol;
        if (x - m).abs() <= t2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < t2 || b - u < t2 {
                    d = if x < m { tol } else { -tol };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol {
            x + d
        } else if d > 0.0 {
            x + tol
        } else {
            x - tol
        };
        let fu = f(u);
        evals += 1;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    let mut best = ScalarOptimum {
        x,
        value: fx,
        at_boundary: false,
        evals,
    };
    // Brent never samples the endpoints; check them when the iterate hugs one.
    let near = 10.0 * (rel_tol * x.abs() + abs_tol);
    for end in [lo, hi] {
        if (x - end).abs() <= near.max(1e-9 * (hi - lo)) {
            let fe = f(end);
            best.evals += 1;
            if fe <= best.value {
                best.x = end;
                best.value = fe;
            }
            best.at_boundary = true;
        }
    }
    best
}

pub fn maximize_scalar<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> ScalarOptimum {
    let r = minimize_scalar(|x| -f(x), lo, hi, rel_tol);
    ScalarOptimum {
        value: -r.value,
        ..r
    }
}

/// Evaluates `f` on `grid` (increasing), then refines around the best grid
/// point with Brent. `at_boundary` is set when the best grid point is the
/// first or last one.
pub fn scan_then_maximize<F: FnMut(f64) -> f64>(
    mut f: F,
    grid: &[f64],
    rel_tol: f64,
) -> ScalarOptimum {
    assert!(grid.len() >= 3);
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let (i, &vbest) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let n = grid.len();
    let boundary = i == 0 || i == n - 1;
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(n - 1)];
    let mut best = ScalarOptimum {
        x: grid[i],
        value: vbest,
        at_boundary: boundary,
        evals: n,
    };
    if lo < hi {
        let r = maximize_scalar(&mut f, lo, hi, rel_tol);
        best.evals += r.evals;
        if r.value > best.value {
            best.x = r.x;
            best.value = r.value;
        }
    }
    best
}

pub fn scan_then_minimize<F: FnMut(f64) -> f64>(
    mut f: F,
    grid: &[f64],
    rel_tol: f64,
) -> ScalarOptimum {
    let r = scan_then_maximize(|x| -f(x), grid, rel_tol);
    ScalarOptimum {
        value: -r.value,
        ..r
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOptimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    pub f_tol: f64,
    pub x_tol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            f_tol: 1e-9,
            x_tol: 1e-6,
            max_evals: 400,
        }
    }
}

pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> SimplexOptimum {
    let n = x0.len();
    assert!(n >= 1);
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| nan_to_inf(f(p))).collect();
    let mut evals = n + 1;
    let mut converged = false;
    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[n] - vals[0];
        let diam = pts[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&pts[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.abs() <= opts.f_tol && diam <= opts.x_tol {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| pts[..n].iter().map(|p| p[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let xr = along(-1.0);
        let fr = nan_to_inf(f(&xr));
        evals += 1;
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = nan_to_inf(f(&xe));
            evals += 1;
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let xc = along(-0.5);
            let fc = nan_to_inf(f(&xc));
            (xc, fc)
        } else {
            let xc = along(0.5);
            let fc = nan_to_inf(f(&xc));
            (xc, fc)
        };
        evals += 1;
        if fc < vals[n].min(fr) {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        for i in 1..=n {
            let p: Vec<f64> = pts[i]
                .iter()
                .zip(&pts[0])
                .map(|(a, b)| b + 0.5 * (a - b))
                .collect();
            vals[i] = nan_to_inf(f(&p));
            pts[i] = p;
            evals += 1;
        }
    }
    let (ib, _) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty simplex");
    SimplexOptimum {
        x: pts[ib].clone(),
        value: vals[ib],
        evals,
        converged,
    }
}

fn nan_to_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let r = minimize_scalar(|x| (x - 2.0).powi(2), 0.0, 5.0, 1e-10);
        assert!((r.x - 2.0).abs() < 1e-8);
        assert!(!r.at_boundary);
    }

    #[test]
    fn monotone_flags_endpoint() {
        let r = minimize_scalar(|x| x, 0.0, 5.0, 1e-10);
        assert!(r.at_boundary);
        assert_eq!(r.x, 0.0);
        let r = maximize_scalar(|x| x, 1.0, 5.0, 1e-10);
        assert!(r.at_boundary);
        assert_eq!(r.x, 5.0);
    }

    #[test]
    fn non_smooth_minimum() {
        let r = minimize_scalar(|x: f64| (x - 0.3).abs(), -1.0, 1.0, 1e-12);
        assert!((r.x - 0.3).abs() < 1e-9);
    }

    #[test]
    fn grid_scan_finds_global() {
        let f =
            |x: f64| (-(x.ln() - 3.0).powi(2)).exp() + 0.5 * (-(x.ln() + 2.0).powi(2) * 4.0).exp();
        let g = log_grid(1e-3, 1e3, 64);
        let r = scan_then_maximize(f, &g, 1e-10);
        assert!((r.x - 3f64.exp()).abs() < 1e-4 * 3f64.exp());
        assert!(!r.at_boundary);
        let r = scan_then_maximize(|x| x, &g, 1e-10);
        assert!(r.at_boundary);
    }

    #[test]
    fn rosenbrock() {
        let f = |p: &[f64]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2);
        let r = nelder_mead(
            f,
            &[-1.2, 1.0],
            &NelderMeadOptions {
                max_evals: 4000,
                f_tol: 1e-14,
                x_tol: 1e-8,
                ..Default::default()
            },
        );
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-6, 20.0, 64);
        assert_eq!(g.len(), 64);
        assert!((g[0] - 1e-6).abs() < 1e-18);
        assert!((g[63] - 20.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
