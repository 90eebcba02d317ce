use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::chip_core::ChipConfig;
use crate::error::{Error, Result};

/// A named family `n ↦ σ_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FamilySpec {
    /// `σ_n(v) = ⌊n/4⌋ + ⌊(v-1)/2⌋`.
    Slope2,
    /// Every vertex holds the same number of chips.
    Constant(u64),
    /// The period-`q` configuration of activity `p/q`.
    PqConstruction { p: u64, q: u64 },
    /// Fixed heights; only defined at `n = heights.len()`.
    Custom(Vec<u64>),
}

impl FamilySpec {
    pub fn config(&self, n: usize) -> Result<ChipConfig> {
        match self {
            FamilySpec::Slope2 => slope2_config(n),
            FamilySpec::Constant(c) => ChipConfig::constant(n, *c),
            FamilySpec::PqConstruction { p, q } => pq_construction(n, *p, *q),
            FamilySpec::Custom(h) if h.len() == n => ChipConfig::new(h.clone()),
            FamilySpec::Custom(h) => Err(Error::InvalidParams(format!(
                "custom family has {} vertices, asked for n={n}",
                h.len()
            ))),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Slope2 => write!(f, "slope2"),
            FamilySpec::Constant(c) => write!(f, "constant:{c}"),
            FamilySpec::PqConstruction { p, q } => write!(f, "pq:{p}/{q}"),
            FamilySpec::Custom(h) => write!(f, "custom:{}", h.len()),
        }
    }
}

/// Parses `slope2`, `constant:<c>` (bare `constant` means 0) or `pq:<p>/<q>`.
impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("unknown family {s:?}"));
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "slope2" if arg.is_empty() => Ok(FamilySpec::Slope2),
            "constant" if arg.is_empty() => Ok(FamilySpec::Constant(0)),
            "constant" => arg.parse().map(FamilySpec::Constant).map_err(|_| bad()),
            "pq" => {
                let (p, q) = arg.split_once('/').ok_or_else(bad)?;
                Ok(FamilySpec::PqConstruction {
                    p: p.parse().map_err(|_| bad())?,
                    q: q.parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }
}

impl From<FamilySpec> for String {
    fn from(f: FamilySpec) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for FamilySpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

pub fn slope2_config(n: usize) -> Result<ChipConfig> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "slope2 needs n >= 2, got {n}"
        )));
    }
    let n64 = n as u64;
    ChipConfig::new((1..=n64).map(|v| n64 / 4 + (v - 1) / 2).collect())
}

/// The configuration of activity `p/q` and period `q`, for
/// `1 ≤ p < q ≤ n`, `gcd(p, q) = 1` and `p/q ≤ 1/2`:
///
/// ```text
/// σ(v) = v + p - 1          for v ≤ q - 1 - p
///        v + n + p - q - 1  for q - p ≤ v ≤ q - 1
///        n + p - 1          for v ≥ q
/// ```
pub fn pq_construction(n: usize, p: u64, q: u64) -> Result<ChipConfig> {
    let n64 = n as u64;
    if !(1 <= p && p < q && q <= n64) || p.gcd(&q) != 1 || 2 * p > q {
        return Err(Error::InvalidParams(format!(
            "pq_construction needs 1 <= p < q <= n, gcd(p,q)=1, p/q <= 1/2; got n={n}, p={p}, q={q}"
        )));
    }
    let heights = (1..=n64)
        .map(|v| {
            if v + p < q {
                v + p - 1
            } else if v < q {
                v + n64 + p - q - 1
            } else {
                n64 + p - 1
            }
        })
        .collect();
    ChipConfig::new(heights)
}

/// A configuration of activity `p/q` for any reduced `p/q` in `(0, 1)` with
/// `q ≤ n`: the construction itself below `1/2`, its reflection above.
pub fn realize_activity(n: usize, p: u64, q: u64) -> Result<ChipConfig> {
    if 2 * p <= q {
        pq_construction(n, p, q)
    } else if p < q {
        reflect(&pq_construction(n, q - p, q)?)
    } else {
        Err(Error::InvalidParams(format!("{p}/{q} is not below 1")))
    }
}

/// `c^j σ(v) = σ(v) + j - n` for `v ≤ j`, `σ(v) + j` for `v > j`.
pub fn conjugate(c: &ChipConfig, j: usize) -> Result<ChipConfig> {
    let n = c.n();
    if j == 0 || j > n {
        return Err(Error::InvalidParams(format!(
            "conjugation index {j} outside 1..={n}"
        )));
    }
    let shift = j as u64;
    let heights = c
        .heights()
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            if i < j {
                (h + shift)
                    .checked_sub(n as u64)
                    .ok_or(Error::NegativeHeight { vertex: i + 1, j })
            } else {
                Ok(h + shift)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let out = ChipConfig::new(heights)?;
    debug_assert_eq!(out.total_chips(), c.total_chips());
    Ok(out)
}

/// `τ(v) = 2n - 1 - σ(v)`.
pub fn reflect(c: &ChipConfig) -> Result<ChipConfig> {
    let limit = 2 * c.n() as u64 - 1;
    let heights = c
        .heights()
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            limit.checked_sub(h).ok_or(Error::HeightTooLarge {
                vertex: i + 1,
                height: h,
                limit,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ChipConfig::new(heights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chip_core::{activity, simulate_to_cycle};
    use crate::rational::Rational;

    #[test]
    fn slope2_examples() {
        assert_eq!(
            slope2_config(10).unwrap().heights(),
            &[2, 2, 3, 3, 4, 4, 5, 5, 6, 6]
        );
        assert_eq!(slope2_config(4).unwrap().heights(), &[1, 1, 2, 2]);
        assert!(slope2_config(1).is_err());
        for n in [2, 3, 17, 1000] {
            let c = slope2_config(n).unwrap();
            let lo = n as u64 / 4;
            let hi = lo + (n as u64 - 1) / 2;
            assert!(c.heights().iter().all(|&h| lo <= h && h <= hi));
            assert!(c.is_stable());
        }
    }

    #[test]
    fn slope2_empirical_cdf_tracks_the_limit() {
        let n = 10_000;
        let c = slope2_config(n).unwrap();
        let mut below = vec![0usize; 2 * n + 1];
        for &h in c.heights() {
            below[h as usize + 1] += 1;
        }
        let mut count = 0;
        for (h, b) in below.iter().enumerate().take(n + 1) {
            count += b;
            let x = h as f64 / n as f64;
            let f = crate::circle_lift::CdfSpec::Slope2.eval(x);
            assert!(
                (count as f64 / n as f64 - f).abs() <= 1.0 / n as f64,
                "h={h}"
            );
        }
    }

    #[test]
    fn pq_examples() {
        let c = pq_construction(10, 1, 3).unwrap();
        assert_eq!(c.heights(), &[1, 9, 10, 10, 10, 10, 10, 10, 10, 10]);
        let s = simulate_to_cycle(&c, 10_000).unwrap();
        assert_eq!((s.activity, s.period), (Rational::new(1, 3), 3));

        let s = simulate_to_cycle(&pq_construction(10, 1, 2).unwrap(), 10_000).unwrap();
        assert_eq!((s.activity, s.period), (Rational::new(1, 2), 2));
    }

    #[test]
    fn pq_rejects_bad_parameters() {
        assert!(pq_construction(10, 2, 4).is_err());
        assert!(pq_construction(10, 2, 3).is_err());
        assert!(pq_construction(10, 1, 11).is_err());
        assert!(pq_construction(10, 0, 3).is_err());
    }

    #[test]
    fn every_period_up_to_n_is_realized() {
        let n = 12;
        let mut periods: Vec<u64> = (2..=n as u64)
            .map(|q| {
                simulate_to_cycle(&pq_construction(n, 1, q).unwrap(), 100_000)
                    .unwrap()
                    .period
            })
            .collect();
        periods.push(
            simulate_to_cycle(&ChipConfig::constant(n, 3).unwrap(), 10)
                .unwrap()
                .period,
        );
        periods.sort_unstable();
        assert_eq!(periods, (1..=n as u64).collect::<Vec<_>>());
    }

    #[test]
    fn realized_activities_above_half() {
        let c = realize_activity(9, 5, 7).unwrap();
        let s = simulate_to_cycle(&c, 10_000).unwrap();
        assert_eq!((s.activity, s.period), (Rational::new(5, 7), 7));
    }

    #[test]
    fn conjugate_examples() {
        let c = ChipConfig::new(vec![3, 1, 2]).unwrap();
        assert_eq!(conjugate(&c, 1).unwrap().heights(), &[1, 2, 3]);
        assert_eq!(conjugate(&c, 3).unwrap(), c);
        assert!(matches!(
            conjugate(&ChipConfig::new(vec![0, 1, 2]).unwrap(), 1),
            Err(Error::NegativeHeight { vertex: 1, j: 1 })
        ));
        assert!(conjugate(&c, 0).is_err());
        assert!(conjugate(&c, 4).is_err());
    }

    #[test]
    fn conjugation_preserves_activity_example() {
        let c = slope2_config(10).unwrap().add_to_all(7).unwrap();
        let a = activity(&c, 10_000).unwrap();
        for j in 1..=10 {
            if let Ok(cj) = conjugate(&c, j) {
                assert_eq!(activity(&cj, 10_000).unwrap(), a, "j={j}");
            }
        }
    }

    #[test]
    fn reflect_examples() {
        let c = ChipConfig::constant(10, 9).unwrap();
        assert_eq!(reflect(&c).unwrap(), ChipConfig::constant(10, 10).unwrap());
        let c = ChipConfig::new(vec![0, 5, 3]).unwrap();
        assert_eq!(reflect(&reflect(&c).unwrap()).unwrap(), c);
        assert!(matches!(
            reflect(&ChipConfig::new(vec![6, 0, 0]).unwrap()),
            Err(Error::HeightTooLarge { vertex: 1, .. })
        ));
    }

    #[test]
    fn family_names_round_trip() {
        for f in [
            FamilySpec::Slope2,
            FamilySpec::Constant(4),
            FamilySpec::PqConstruction { p: 2, q: 5 },
        ] {
            assert_eq!(f.to_string().parse::<FamilySpec>().unwrap(), f);
        }
        assert_eq!(
            "constant".parse::<FamilySpec>().unwrap(),
            FamilySpec::Constant(0)
        );
        assert!("slope3".parse::<FamilySpec>().is_err());
        assert!("pq:1".parse::<FamilySpec>().is_err());
    }
}
