//! Numerical rotation numbers with certified brackets, rational snapping,
//! and bisection for the stairs of `y ↦ ρ(Φ_y)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::cdf::{CdfSpec, PhiFamily, DEFAULT_CDF_GRID};
use super::lift::FloatLift;

/// Slack for the float comparisons `f^q(x) - x ≥ p` and `≤ p`.
const PLATEAU_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationOptions {
    /// Iterations for the bracket `[(a_t - 1)/t, (a_t + 1)/t]`.
    pub t_max: u64,
    /// Largest denominator considered when snapping.
    pub q_max: u64,
    /// Uniform points added to the knots when probing `f^q(x) - x`.
    pub refine: usize,
    /// Above this many breakpoints of `f^q`, probe knots plus the uniform
    /// refinement instead of the exact breakpoint set.
    pub compose_limit: usize,
    /// Grid for polygonalizing non-polygonal CDFs.
    pub cdf_grid: usize,
}

impl Default for RotationOptions {
    fn default() -> Self {
        RotationOptions {
            t_max: 1 << 14,
            q_max: 64,
            refine: 1024,
            compose_limit: 1 << 16,
            cdf_grid: DEFAULT_CDF_GRID,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationEstimate {
    pub lower: f64,
    pub upper: f64,
    /// The snapped fraction when certified, otherwise the bracket midpoint.
    pub value: f64,
    pub snapped: Option<Rational>,
    pub iterations: u64,
}

impl RotationEstimate {
    pub fn is_exact(&self) -> bool {
        self.snapped.is_some()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower - 1e-12 <= x && x <= self.upper + 1e-12
    }
}

/// Points of `[0, 1)` at which `f^q(x) - x` is sampled: the breakpoints of
/// `f^q` when there are few enough of them (where the extrema of a
/// piecewise-linear function sit), else knots plus a uniform grid.
pub fn probe_points(f: &FloatLift, q: u64, opts: &RotationOptions) -> Vec<f64> {
    if let Some(pts) = f.iterate_breakpoints(q, opts.compose_limit) {
        return pts;
    }
    let mut pts: Vec<f64> = f.knot_xs().to_vec();
    let m = opts.refine.max(1);
    pts.extend((0..m).map(|i| i as f64 / m as f64));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `(min, max)` of `f^q(x) - x` over the probe points.
pub fn displacement_range(f: &FloatLift, q: u64, opts: &RotationOptions) -> (f64, f64) {
    probe_points(f, q, opts)
        .into_iter()
        .map(|x| f.iterate(x, q) - x)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
            (lo.min(d), hi.max(d))
        })
}

/// `ρ(f) ≥ p/q` is equivalent to `f^q(x) - x ≥ p` for some `x`.
pub fn rotation_at_least(f: &FloatLift, p: u64, q: u64, opts: &RotationOptions) -> bool {
    displacement_range(f, q, opts).1 >= p as f64 - PLATEAU_SLACK
}

/// `ρ(f) ≤ p/q` is equivalent to `f^q(x) - x ≤ p` for some `x`.
pub fn rotation_at_most(f: &FloatLift, p: u64, q: u64, opts: &RotationOptions) -> bool {
    displacement_range(f, q, opts).0 <= p as f64 + PLATEAU_SLACK
}

/// Both witnesses exist, so `ρ(f) = p/q`.
pub fn certifies_rotation(f: &FloatLift, p: u64, q: u64, opts: &RotationOptions) -> bool {
    let (lo, hi) = displacement_range(f, q, opts);
    hi >= p as f64 - PLATEAU_SLACK && lo <= p as f64 + PLATEAU_SLACK
}

/// Every reduced `p/q` with `q ≤ q_max` in `[lower, upper]`, by denominator.
fn candidates(lower: f64, upper: f64, q_max: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 1..=q_max {
        let lo = (lower * q as f64).ceil().max(0.0) as u64;
        let hi = (upper * q as f64).floor();
        if hi < 0.0 {
            continue;
        }
        for p in lo..=hi as u64 {
            if p.gcd(&q) == 1 {
                out.push(Rational::new(p, q));
            }
        }
    }
    out
}

/// `f^t(0)` from below and above: each step is pushed outward by more than
/// the rounding error of one evaluation, so by monotonicity the exact orbit
/// stays between the two.
fn orbit_bounds(f: &FloatLift, t: u64) -> (f64, f64) {
    let pad = |y: f64| 8.0 * f64::EPSILON * (y.abs() + 1.0);
    let (mut lo, mut hi) = (0.0, 0.0);
    for _ in 0..t {
        let a = f.eval(lo);
        let b = f.eval(hi);
        lo = a - pad(a);
        hi = b + pad(b);
    }
    (lo, hi)
}

/// Brackets `ρ(f)` by `|f^t(0)/t - ρ| ≤ 1/t` and snaps to the fraction of
/// smallest denominator inside the bracket whose plateau test passes.
pub fn rotation_number_numeric(f: &FloatLift, opts: &RotationOptions) -> RotationEstimate {
    let t = opts.t_max.max(1);
    let (a_lo, a_hi) = orbit_bounds(f, t);
    let lower = (a_lo - 1.0) / t as f64;
    let upper = (a_hi + 1.0) / t as f64;
    let snapped = candidates(
        lower - PLATEAU_SLACK,
        upper + PLATEAU_SLACK,
        opts.q_max.max(1),
    )
    .into_iter()
    .find(|r| certifies_rotation(f, r.num(), r.den(), opts));
    RotationEstimate {
        lower,
        upper,
        value: snapped.map_or(0.5 * (a_lo + a_hi) / t as f64, |r| r.to_f64()),
        snapped,
        iterations: t,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StairInterval {
    pub p: u64,
    pub q: u64,
    pub a: f64,
    pub b: f64,
    pub width: f64,
    pub tol: f64,
}

/// Bisects `[lo, hi]` for the switch point of a monotone predicate with
/// `pred(lo) != pred(hi)`.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, pred: impl Fn(f64) -> bool) -> f64 {
    let at_lo = pred(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The fiber `{y : ρ(Φ_y) = p/q}` as `[a, b]`, each endpoint within `tol`.
pub fn stair_interval(
    cdf: &CdfSpec,
    p: u64,
    q: u64,
    tol: f64,
    opts: &RotationOptions,
) -> Result<StairInterval> {
    if q == 0 || p > q || p.gcd(&q) != 1 {
        return Err(Error::InvalidParams(format!(
            "{p}/{q} is not a reduced fraction in [0, 1]"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let family = PhiFamily::new(cdf, opts.cdf_grid)?;
    let at_least = |y: f64| rotation_at_least(&family.at(y), p, q, opts);
    let at_most = |y: f64| rotation_at_most(&family.at(y), p, q, opts);
    let step = tol / 4.0;

    let a = if at_least(0.0) {
        0.0
    } else {
        bisect(0.0, 1.0, step, at_least)
    };
    let b = if at_most(1.0) {
        1.0
    } else {
        bisect(0.0, 1.0, step, at_most)
    };
    let width = b - a;
    if width < tol {
        return Err(Error::DegenerateStair { p, q, width, tol });
    }
    Ok(StairInterval {
        p,
        q,
        a,
        b,
        width,
        tol,
    })
}
