use crate::error::{Error, Result};

use super::scalar::{Scalar, Q};

/// A continuous, nondecreasing, degree-one lift `f: ℝ → ℝ`.
///
/// Stored as knots `(x_i, f(x_i))` with `0 = x_0 < x_1 < … < x_{K-1} < 1`,
/// linear between consecutive knots and closed by the implicit knot
/// `(1, f(0) + 1)`. Everything else follows from `f(x + 1) = f(x) + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneLift<S> {
    xs: Vec<S>,
    ys: Vec<S>,
}

pub type ExactLift = MonotoneLift<Q>;
pub type FloatLift = MonotoneLift<f64>;

impl<S: Scalar> MonotoneLift<S> {
    // Negated comparisons so that NaN knots are rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(xs: Vec<S>, ys: Vec<S>) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::InvalidLift(format!(
                "{} knot positions but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs[0] != S::zero() {
            return Err(Error::InvalidLift("first knot must sit at x = 0".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) || !(*xs.last().unwrap() < S::one()) {
            return Err(Error::InvalidLift(
                "knot positions must increase strictly inside [0, 1)".into(),
            ));
        }
        let top = ys[0] + S::one();
        if ys.windows(2).any(|w| !(w[0] <= w[1])) || !(*ys.last().unwrap() <= top) {
            return Err(Error::InvalidLift("values must be nondecreasing".into()));
        }
        Ok(MonotoneLift { xs, ys })
    }

    /// Builds from knots that may lie anywhere in `[0, 1)`, unsorted, given
    /// that a knot at `0` is among them.
    pub(crate) fn from_unsorted(mut knots: Vec<(S, S)>) -> Result<Self> {
        knots.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("comparable knots"));
        knots.dedup_by(|a, b| a.0 == b.0);
        let (xs, mut ys): (Vec<S>, Vec<S>) = knots.into_iter().unzip();
        if !S::EXACT {
            // Float rounding may break monotonicity by an ulp.
            let top = ys[0] + S::one();
            for i in 1..ys.len() {
                if ys[i] < ys[i - 1] {
                    ys[i] = ys[i - 1];
                }
                if ys[i] > top {
                    ys[i] = top;
                }
            }
        }
        Self::new(xs, ys)
    }

    pub fn identity() -> Self {
        Self::rotation(S::zero())
    }

    /// Rigid rotation `x ↦ x + θ`.
    pub fn rotation(theta: S) -> Self {
        MonotoneLift {
            xs: vec![S::zero()],
            ys: vec![theta],
        }
    }

    pub fn knot_count(&self) -> usize {
        self.xs.len()
    }

    pub fn knots(&self) -> impl Iterator<Item = (S, S)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn knot_xs(&self) -> &[S] {
        &self.xs
    }

    pub fn at_zero(&self) -> S {
        self.ys[0]
    }

    /// Knot `i`, with index `K` standing for the closing knot at `x = 1`.
    fn knot(&self, i: usize) -> (S, S) {
        if i < self.xs.len() {
            (self.xs[i], self.ys[i])
        } else {
            (S::one(), self.ys[0] + S::one())
        }
    }

    pub fn eval(&self, x: S) -> S {
        let k = x.floor();
        let frac = x - k;
        let i = self.xs.partition_point(|&a| a <= frac) - 1;
        let (x0, y0) = self.knot(i);
        let (x1, y1) = self.knot(i + 1);
        let y = if frac == x0 {
            y0
        } else {
            y0 + (y1 - y0) * (frac - x0) / (x1 - x0)
        };
        y + k
    }

    /// `f^t(x0)`.
    pub fn iterate(&self, x0: S, t: u64) -> S {
        (0..t).fold(x0, |x, _| self.eval(x))
    }

    /// `x ↦ f(x + pre) + post`.
    pub fn translate(&self, pre: S, post: S) -> Self {
        let mut knots: Vec<(S, S)> = self
            .xs
            .iter()
            .map(|&x| {
                let z = (x - pre).fract_part();
                (z, self.eval(z + pre) + post)
            })
            .collect();
        if !knots.iter().any(|&(x, _)| x == S::zero()) {
            knots.push((S::zero(), self.eval(pre) + post));
        }
        Self::from_unsorted(knots).expect("translation preserves lift invariants")
    }

    /// Drops interior knots that lie on the segment through their neighbours.
    pub fn simplified(&self) -> Self {
        let k = self.xs.len();
        let mut xs = vec![self.xs[0]];
        let mut ys = vec![self.ys[0]];
        for i in 1..k {
            let (xp, yp) = (*xs.last().unwrap(), *ys.last().unwrap());
            let (x, y) = self.knot(i);
            let (xn, yn) = self.knot(i + 1);
            if (y - yp) * (xn - x) != (yn - y) * (x - xp) {
                xs.push(x);
                ys.push(y);
            }
        }
        MonotoneLift { xs, ys }
    }

    /// Largest `|f(x) - g(x)|`; attained at a knot of one of the two.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.xs
            .iter()
            .chain(other.xs.iter())
            .map(|&x| (self.eval(x) - other.eval(x)).abs().to_f64())
            .fold(0.0, f64::max)
    }

    /// Equal as functions, compared at the union of both knot sets.
    pub fn same_function(&self, other: &Self, tol: f64) -> bool {
        self.xs.iter().chain(other.xs.iter()).all(|&x| {
            let d = self.eval(x) - other.eval(x);
            if S::EXACT {
                d == S::zero()
            } else {
                d.abs().to_f64() <= tol
            }
        })
    }

    /// The `x` in `[0, 1)` with `f(x) ≡ z (mod 1)` lying strictly inside a
    /// rising segment. Points on flat segments are knots already.
    fn preimage_mod1(&self, z: S) -> Option<S> {
        let y0 = self.ys[0];
        let target = y0 + (z - y0).fract_part();
        let i = self.ys.partition_point(|&y| y <= target) - 1;
        let (xa, ya) = self.knot(i);
        let (xb, yb) = self.knot(i + 1);
        if ya < target && target < yb {
            Some(xa + (target - ya) * (xb - xa) / (yb - ya))
        } else {
            None
        }
    }

    /// Breakpoints of `f^q` inside `[0, 1)`: points whose orbit hits a knot
    /// of `f` (mod 1) within `q - 1` steps.
    pub fn iterate_breakpoints(&self, q: u64, limit: usize) -> Option<Vec<S>> {
        let mut all: Vec<S> = self.xs.clone();
        let mut layer: Vec<S> = self.xs.clone();
        for _ in 1..q {
            layer = layer
                .iter()
                .filter_map(|&z| self.preimage_mod1(z))
                .collect();
            all.extend_from_slice(&layer);
            if all.len() > limit {
                return None;
            }
        }
        all.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
        all.dedup();
        Some(all)
    }
}

impl MonotoneLift<Q> {
    pub fn to_f64(&self) -> FloatLift {
        MonotoneLift {
            xs: self.xs.iter().map(|x| x.to_f64()).collect(),
            ys: self.ys.iter().map(|y| y.to_f64()).collect(),
        }
    }
}

/// `Uf = R_{-f(0)} ∘ f ∘ R_{f(0)}`.
pub fn update_lift<S: Scalar>(f: &MonotoneLift<S>) -> MonotoneLift<S> {
    let c = f.at_zero();
    f.translate(c, -c)
}

pub fn iterate<S: Scalar>(f: &MonotoneLift<S>, x0: S, t: u64) -> S {
    f.iterate(x0, t)
}
