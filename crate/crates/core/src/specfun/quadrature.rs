//! Quadrature: a fixed Gauss–Chebyshev rule on `[0, upper]` and a globally
//! adaptive Gauss–Kronrod (7/15) integrator used as the reference oracle.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// A fixed rule `Σ wᵢ f(xᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub count: usize,
}

impl QuadratureRule {
    pub fn apply<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Chebyshev rule for `∫₀^upper f(y) dy`.
///
/// Nodes are `(upper/2)(ℓ_r + 1)` with `ℓ_r = cos((2r−1)π/(2·count))`, and the
/// weight of node `r` is `(π·upper)/(2·count) · √(1 − ℓ_r²)`. The square-root
/// factor undoes the Chebyshev weight, so the rule converges only
/// algebraically when `f` is nonzero at an endpoint.
///
/// ```
/// use sgf_secrecy::specfun::gauss_chebyshev_rule;
/// let rule = gauss_chebyshev_rule(1, 2.0).unwrap();
/// assert!((rule.nodes[0] - 1.0).abs() < 1e-15);
/// ```
pub fn gauss_chebyshev_rule(count: usize, upper: f64) -> Result<QuadratureRule> {
    if count == 0 {
        return Err(Error::domain("Gauss-Chebyshev rule needs count >= 1"));
    }
    if !(upper > 0.0 && upper.is_finite()) {
        return Err(Error::domain(format!(
            "Gauss-Chebyshev upper limit {upper} must be positive and finite"
        )));
    }
    let scale = std::f64::consts::PI * upper / (2.0 * count as f64);
    let mut nodes = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for r in 1..=count {
        let l = ((2 * r - 1) as f64 * std::f64::consts::PI / (2 * count) as f64).cos();
        nodes.push(0.5 * upper * (l + 1.0));
        weights.push(scale * (1.0 - l * l).sqrt());
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        count,
    })
}

/// Result of [`adaptive_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Maximum number of interval bisections before giving up.
pub const SUBDIVISION_LIMIT: usize = 4000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    let value = k * h;
    let err = ((k - g) * h).abs();
    (value, err)
}

/// Integrates `f` over `[lo, hi]`, where `hi` may be `f64::INFINITY`.
///
/// A semi-infinite range is mapped onto `[0, 1)` by `x = lo + t/(1−t)`.
/// Intervals are bisected largest-error-first until the summed error drops
/// below `max(abs_tol, rel_tol·|value|)`. After [`SUBDIVISION_LIMIT`]
/// bisections the call fails with [`Error::NoConvergence`] carrying the best
/// estimate.
///
/// ```
/// use sgf_secrecy::specfun::adaptive_integrate;
/// let r = adaptive_integrate(|t| (-t).exp(), 0.0, f64::INFINITY, 1e-12, 1e-12).unwrap();
/// assert!((r.value - 1.0).abs() < 1e-11);
/// ```
pub fn adaptive_integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    if !(abs_tol > 0.0 && rel_tol > 0.0) {
        return Err(Error::domain("integration tolerances must be positive"));
    }
    if !lo.is_finite() || hi.is_nan() || hi < lo {
        return Err(Error::domain(format!("bad integration range [{lo}, {hi}]")));
    }
    if hi == lo {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    if hi == f64::INFINITY {
        let mut g = |t: f64| {
            let s = 1.0 - t;
            let v = f(lo + t / s);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        };
        integrate_finite(&mut g, 0.0, 1.0, abs_tol, rel_tol)
    } else {
        integrate_finite(&mut f, lo, hi, abs_tol, rel_tol)
    }
}

fn integrate_finite<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    let mut heap = BinaryHeap::new();
    let (v, e) = kronrod(f, lo, hi);
    let mut evaluations = 15;
    let mut total = v;
    let mut total_err = e;
    heap.push(Segment {
        lo,
        hi,
        value: v,
        error: e,
    });
    let mut splits = 0;
    loop {
        if !total.is_finite() {
            return Err(Error::NoConvergence {
                estimate: total,
                error: f64::INFINITY,
            });
        }
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(Integral {
                value: total,
                error: total_err,
                evaluations,
            });
        }
        if splits >= SUBDIVISION_LIMIT {
            return Err(Error::NoConvergence {
                estimate: total,
                error: total_err,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval collapsed to adjacent floats; nothing left to refine.
            return Err(Error::NoConvergence {
                estimate: total,
                error: total_err,
            });
        }
        let (v1, e1) = kronrod(f, worst.lo, mid);
        let (v2, e2) = kronrod(f, mid, worst.hi);
        evaluations += 30;
        splits += 1;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            lo: worst.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            lo: mid,
            hi: worst.hi,
            value: v2,
            error: e2,
        });
        if splits % 64 == 0 {
            // Refresh the running sums to keep roundoff from accumulating.
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}
