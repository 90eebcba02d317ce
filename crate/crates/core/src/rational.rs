//! Nonnegative exact fractions used for activities and rotation numbers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative fraction `num/den`, always kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Builds `num/den` reduced to lowest terms.
    ///
    /// Panics if `den == 0`; use [`Rational::try_new`] for untrusted input.
    pub fn new(num: u64, den: u64) -> Self {
        Self::try_new(num, den).expect("zero denominator")
    }

    pub fn try_new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    /// Reduces a fraction whose parts may exceed `u64` before reduction.
    pub fn from_u128(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        Rational {
            num: u64::try_from(num).expect("numerator overflows u64"),
            den: u64::try_from(den).expect("denominator overflows u64"),
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Always prints `p/q`, including `0/1` and `1/1`.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid fraction {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p = p.trim().parse().map_err(|_| bad())?;
                let q = q.trim().parse().map_err(|_| bad())?;
                Rational::try_new(p, q)
            }
            None => Ok(Rational::new(s.parse().map_err(|_| bad())?, 1)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
