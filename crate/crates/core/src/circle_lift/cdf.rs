//! Limiting height distributions and the lifts `Φ_y` they induce.

use std::f64::consts::PI;
use std::fmt;
use std::io::Read;

use crate::error::{Error, Result};

use super::lift::{ExactLift, FloatLift, MonotoneLift};
use super::scalar::{Scalar, Q};

/// Grid used to polygonalize `sqrt` and `sine`.
pub const DEFAULT_CDF_GRID: usize = 1 << 14;

/// A continuous CDF `F` on `[0, 1]` with `F(0) = 0` and `F(1) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum CdfSpec {
    /// Limit of the slope-2 family: `0`, then `2x - 1/2` on `[1/4, 3/4]`, then `1`.
    Slope2,
    /// `F(x) = √x`.
    Sqrt,
    /// `F(x) = x + sin(2πx) / 2π`.
    Sine,
    /// Piecewise-linear interpolation of exact samples.
    Table(CdfTable),
}

/// Validated samples `(x_i, F(x_i))` from `(0, 0)` to `(1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CdfTable {
    points: Vec<(Q, Q)>,
}

impl CdfTable {
    pub fn new(points: Vec<(Q, Q)>) -> Result<Self> {
        let zero = Q::zero();
        let one = Q::from_i64(1);
        if points.len() < 2 {
            return Err(Error::InvalidCdf("need at least the two endpoints".into()));
        }
        if points[0] != (zero, zero) {
            return Err(Error::InvalidCdf("table must start at (0,0)".into()));
        }
        if *points.last().unwrap() != (one, one) {
            return Err(Error::InvalidCdf("table must end at (1,1)".into()));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidCdf(format!(
                    "x values must increase strictly (x={} after x={})",
                    w[1].0, w[0].0
                )));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidCdf(format!(
                    "F must be nondecreasing (F={} after F={})",
                    w[1].1, w[0].1
                )));
            }
        }
        Ok(CdfTable { points })
    }

    /// Reads CSV rows `x,F`; a leading `x,F` header is allowed. Values are
    /// decimals or `p/q` fractions and are kept exact.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut points = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::InvalidCdf(format!(
                    "row {} has {} fields, expected 2",
                    i + 1,
                    record.len()
                )));
            }
            if i == 0 && record[0].eq_ignore_ascii_case("x") {
                continue;
            }
            points.push((parse_exact(&record[0])?, parse_exact(&record[1])?));
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[(Q, Q)] {
        &self.points
    }
}

/// Parses `3`, `0.125` or `5/8` into an exact rational.
pub fn parse_exact(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Q::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || frac.len() > 18
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: i128 = digits.parse().map_err(|_| bad())?;
    let den = 10i128.pow(frac.len() as u32);
    let v = Q::new(num, den);
    Ok(if neg { -v } else { v })
}

impl CdfSpec {
    /// `F(x) = x`.
    pub fn identity() -> Self {
        let one = Q::from_i64(1);
        CdfSpec::Table(CdfTable {
            points: vec![(Q::zero(), Q::zero()), (one, one)],
        })
    }

    /// Builtin by name: `slope2`, `sqrt`, `sine` or `identity`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "slope2" => Ok(CdfSpec::Slope2),
            "sqrt" => Ok(CdfSpec::Sqrt),
            "sine" => Ok(CdfSpec::Sine),
            "identity" => Ok(Self::identity()),
            other => Err(Error::InvalidCdf(format!("unknown builtin CDF {other:?}"))),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            CdfSpec::Slope2 => (2.0 * x - 0.5).clamp(0.0, 1.0),
            CdfSpec::Sqrt => x.sqrt(),
            CdfSpec::Sine => (x + (2.0 * PI * x).sin() / (2.0 * PI)).clamp(0.0, 1.0),
            CdfSpec::Table(t) => {
                let pts = t.points();
                let i = pts
                    .partition_point(|p| p.0.to_f64() <= x)
                    .clamp(1, pts.len() - 1);
                let (x0, y0) = (pts[i - 1].0.to_f64(), pts[i - 1].1.to_f64());
                let (x1, y1) = (pts[i].0.to_f64(), pts[i].1.to_f64());
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Exact knots when `F` is piecewise linear with rational knots.
    pub fn exact_polygon(&self) -> Option<Vec<(Q, Q)>> {
        match self {
            CdfSpec::Slope2 => Some(vec![
                (Q::zero(), Q::zero()),
                (Q::new(1, 4), Q::zero()),
                (Q::new(3, 4), Q::from_i64(1)),
                (Q::from_i64(1), Q::from_i64(1)),
            ]),
            CdfSpec::Table(t) => Some(t.points().to_vec()),
            CdfSpec::Sqrt | CdfSpec::Sine => None,
        }
    }

    /// Knots in `f64`: exact ones when available, otherwise `F` sampled on a
    /// uniform grid of `grid` intervals.
    pub fn polygon(&self, grid: usize) -> Vec<(f64, f64)> {
        match self.exact_polygon() {
            Some(pts) => pts.iter().map(|(x, y)| (x.to_f64(), y.to_f64())).collect(),
            None => {
                let grid = grid.max(1);
                let mut pts: Vec<(f64, f64)> = (0..=grid)
                    .map(|i| {
                        let x = i as f64 / grid as f64;
                        (x, self.eval(x))
                    })
                    .collect();
                pts[0].1 = 0.0;
                pts[grid].1 = 1.0;
                pts
            }
        }
    }

    pub fn is_polygonal(&self) -> bool {
        self.exact_polygon().is_some()
    }
}

impl fmt::Display for CdfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdfSpec::Slope2 => write!(f, "slope2"),
            CdfSpec::Sqrt => write!(f, "sqrt"),
            CdfSpec::Sine => write!(f, "sine"),
            CdfSpec::Table(t) => write!(f, "table[{} points]", t.points().len()),
        }
    }
}

/// Knots of `Φ_y(x) = y + ⌈x⌉ - F(⌈x⌉ - x)` on `[0, 1)`: the CDF knot at
/// `u` becomes the lift knot at `1 - u` with value `1 - F(u) + y`.
fn phi_knots<S: Scalar>(polygon: &[(S, S)], y: S) -> Vec<(S, S)> {
    polygon
        .iter()
        .rev()
        .filter(|(u, _)| *u > S::zero())
        .map(|&(u, fu)| (S::one() - u, S::one() - fu + y))
        .collect()
}

fn check_shift<S: Scalar>(y: S) -> Result<()> {
    if y < S::zero() || y > S::one() {
        return Err(Error::InvalidParams(format!(
            "shift y = {} outside [0, 1]",
            y.to_f64()
        )));
    }
    Ok(())
}

/// `Φ_y = R_y ∘ Φ` in floating point, polygonalized on `grid` intervals when
/// `F` is not itself piecewise linear.
pub fn lift_from_cdf(cdf: &CdfSpec, y: f64, grid: usize) -> Result<FloatLift> {
    check_shift(y)?;
    MonotoneLift::from_unsorted(phi_knots(&cdf.polygon(grid), y))
}

/// `Φ_y` with exact rational knots; only for polygonal `F`.
pub fn lift_from_cdf_exact(cdf: &CdfSpec, y: Q) -> Result<ExactLift> {
    check_shift(y)?;
    let polygon = cdf
        .exact_polygon()
        .ok_or_else(|| Error::NotPolygonal(cdf.to_string()))?;
    MonotoneLift::from_unsorted(phi_knots(&polygon, y))
}

/// `Φ_y` for every `y` from one tabulation of `F`.
#[derive(Clone, Debug)]
pub struct PhiFamily {
    base: FloatLift,
}

impl PhiFamily {
    pub fn new(cdf: &CdfSpec, grid: usize) -> Result<Self> {
        Ok(PhiFamily {
            base: lift_from_cdf(cdf, 0.0, grid)?,
        })
    }

    pub fn at(&self, y: f64) -> FloatLift {
        self.base.translate(0.0, y)
    }

    pub fn base(&self) -> &FloatLift {
        &self.base
    }
}
