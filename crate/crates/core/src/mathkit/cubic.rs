//! Real cubic roots: Cardano closed form followed by Newton polishing.

use crate::error::{Error, Result};

/// Coefficients of `c3·x³ + c2·x² + c1·x + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoeffs {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CubicCoeffs {
    pub fn new(c3: f64, c2: f64, c1: f64, c0: f64) -> Result<Self> {
        if c3 == 0.0 || !c3.is_finite() {
            return Err(Error::InvalidParameter {
                name: "c3",
                value: c3,
                reason: "leading coefficient must be finite and non-zero",
            });
        }
        for (name, v) in [("c2", c2), ("c1", c1), ("c0", c0)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite",
                });
            }
        }
        Ok(Self { c3, c2, c1, c0 })
    }

    /// `P·x³ − x² + 6Pη²·x − 18η²`, the stationarity condition shared by the
    /// input-law rate and the reference-density rate (with `P` replaced by an
    /// effective power).
    pub fn rate_equation(power: f64, eta: f64) -> Result<Self> {
        let e2 = eta * eta;
        Self::new(power, -1.0, 6.0 * power * e2, -18.0 * e2)
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (3.0 * self.c3 * x + 2.0 * self.c2) * x + self.c1
    }

    /// Residual scaled by the largest monomial magnitude at `x`.
    pub fn relative_residual(&self, x: f64) -> f64 {
        let scale = [
            (self.c3 * x * x * x).abs(),
            (self.c2 * x * x).abs(),
            (self.c1 * x).abs(),
            self.c0.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            self.eval(x).abs() / scale
        }
    }

    /// All real roots, ascending.
    pub fn real_roots(&self) -> Vec<f64> {
        let a = self.c2 / self.c3;
        let b = self.c1 / self.c3;
        let c = self.c0 / self.c3;
        // x = t - a/3  ->  t³ + p t + q = 0
        let shift = a / 3.0;
        let p = b - a * a / 3.0;
        let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
        let mut roots = if disc > 0.0 {
            let sq = disc.sqrt();
            // Pick the cube root that avoids cancellation, then recover the
            // partner from u·v = -p/3.
            let u = (-q / 2.0 - q.signum() * sq).cbrt();
            let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
            vec![t - shift]
        } else if p == 0.0 {
            vec![-shift]
        } else {
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            (0..3)
                .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
                .collect()
        };
        roots.sort_by(|x, y| x.total_cmp(y));
        roots
    }
}

/// Largest real root, required to be positive, polished by Newton steps.
///
/// Intended for cubics with `c0 ≤ 0` that increase past their sign change,
/// for which the positive root is unique.
pub fn unique_positive_root(c: &CubicCoeffs) -> Result<f64> {
    let c = if c.c3 < 0.0 {
        CubicCoeffs {
            c3: -c.c3,
            c2: -c.c2,
            c1: -c.c1,
            c0: -c.c0,
        }
    } else {
        *c
    };
    if c.c0 > 0.0 {
        return Err(Error::NoPositiveRoot);
    }
    let roots = c.real_roots();
    let mut x = match roots.last() {
        Some(&r) if r > 0.0 => r,
        _ => return Err(Error::NoPositiveRoot),
    };
    let mut res = c.relative_residual(x);
    for _ in 0..4 {
        let d = c.derivative(x);
        if d == 0.0 || res == 0.0 {
            break;
        }
        let next = x - c.eval(x) / d;
        if !(next > 0.0) {
            break;
        }
        let next_res = c.relative_residual(next);
        if next_res >= res {
            break;
        }
        x = next;
        res = next_res;
    }
    if res > 1e-10 {
        x = bisect_root(&c, x).ok_or(Error::RootConvergence { residual: res })?;
        res = c.relative_residual(x);
        if res > 1e-10 {
            return Err(Error::RootConvergence { residual: res });
        }
    }
    Ok(x)
}

// Safeguard when Cardano lost too many digits: bracket around the estimate.
fn bisect_root(c: &CubicCoeffs, guess: f64) -> Option<f64> {
    let bound = 1.0
        + [c.c2, c.c1, c.c0]
            .iter()
            .map(|v| (v / c.c3).abs())
            .fold(0.0, f64::max);
    let (mut lo, mut hi) = (0.0, bound.max(2.0 * guess));
    if c.eval(hi) < 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if c.eval(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Unique `s ≥ 0` with `s + η²s³ = v`; the inverse of the RPC power map.
pub fn q_inverse(v: f64, eta: f64) -> Result<f64> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter {
            name: "v",
            value: v,
            reason: "must be finite and non-negative",
        });
    }
    if !(eta >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "must be non-negative",
        });
    }
    Ok(q_inverse_unchecked(v, eta))
}

/// `q_inverse` without argument validation, for hot loops.
#[inline]
pub fn q_inverse_unchecked(v: f64, eta: f64) -> f64 {
    let e2 = eta * eta;
    if v == 0.0 || e2 == 0.0 {
        return v;
    }
    // s³ + s/η² − v/η² = 0. With A³ = Q + √D and A·B = 1/(3η²),
    // s = A − B = (v/η²) / (A² + AB + B²) has no cancellation.
    let qh = v / (2.0 * e2);
    let p3 = 1.0 / (3.0 * e2);
    let s = if qh > 1e100 {
        (v / e2).cbrt()
    } else {
        let d = qh * qh + p3 * p3 * p3;
        let a = (qh + d.sqrt()).cbrt();
        let b = p3 / a;
        (v / e2) / (a * a + a * b + b * b)
    };
    let g = s + e2 * s * s * s;
    let s = s - (g - v) / (1.0 + 3.0 * e2 * s * s);
    s.max(0.0)
}

/// Derivative `q'(v) = 1 / (1 + 3η² q(v)²)`.
pub fn q_inverse_derivative(v: f64, eta: f64) -> f64 {
    let s = q_inverse_unchecked(v, eta);
    1.0 / (1.0 + 3.0 * eta * eta * s * s)
}
