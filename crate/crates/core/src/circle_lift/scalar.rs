use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

/// Exact coordinates of rational lifts.
pub type Q = Ratio<i128>;

/// Number system for lift coordinates: exact rationals or `f64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i128, den: i128) -> Self;
    fn floor(self) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    /// Fractional part in `[0, 1)`.
    fn fract_part(self) -> Self {
        self - self.floor()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i128, den: i128) -> Self {
        num as f64 / den as f64
    }

    fn floor(self) -> Self {
        f64::floor(self)
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn fract_part(self) -> Self {
        let f = self - f64::floor(self);
        // x - floor(x) rounds up to 1.0 for tiny negative x.
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }

    fn from_ratio(num: i128, den: i128) -> Self {
        Ratio::new(num, den)
    }

    fn floor(self) -> Self {
        Ratio::floor(&self)
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn abs(self) -> Self {
        Signed::abs(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractional_parts() {
        assert_eq!(Q::from_ratio(-1, 4).fract_part(), Q::from_ratio(3, 4));
        assert_eq!(Q::from_ratio(9, 4).fract_part(), Q::from_ratio(1, 4));
        assert_eq!((-0.25f64).fract_part(), 0.75);
        assert_eq!((-1e-20f64).fract_part(), 0.0);
        assert_eq!(<f64 as Scalar>::floor(2.5), 2.0);
    }
}
