//! Scalar types shared by the geometric and metric modules.
//!
//! Angles and s-plane coordinates work over any [`Scalar`]; exact rationals
//! make every comparison decidable, floats carry an explicit tolerance.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed};

/// A number type usable for angles and planar coordinates.
pub trait Scalar: Clone + PartialOrd + Num + Signed + FromPrimitive + Debug + Display {
    /// True when arithmetic and comparison are exact.
    const EXACT: bool;

    /// Tolerance used when none is supplied. Zero for exact types.
    fn default_tolerance() -> Self;

    /// Parses `p/q`, an integer, or (for floats) a decimal literal.
    fn parse_scalar(text: &str) -> Option<Self>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer conversion") / Self::from_i64(den).expect("integer conversion")
    }
}

fn split_ratio(text: &str) -> Option<(&str, Option<&str>)> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    match text.split_once('/') {
        Some((n, d)) => Some((n.trim(), Some(d.trim()))),
        None => Some((text, None)),
    }
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn default_tolerance() -> Self {
                $tol
            }

            fn parse_scalar(text: &str) -> Option<Self> {
                let (n, d) = split_ratio(text)?;
                let n: $t = n.parse().ok()?;
                match d {
                    Some(d) => {
                        let d: $t = d.parse().ok()?;
                        (d != 0.0).then(|| n / d)
                    }
                    None => Some(n),
                }
            }
        }
    };
}

impl_float_scalar!(f32, 1e-5);
impl_float_scalar!(f64, 1e-9);

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn default_tolerance() -> Self {
        Ratio::from_integer(0)
    }

    fn parse_scalar(text: &str) -> Option<Self> {
        let (n, d) = split_ratio(text)?;
        let n: i64 = n.parse().ok()?;
        let d: i64 = match d {
            Some(d) => d.parse().ok()?,
            None => 1,
        };
        (d != 0).then(|| Ratio::new(n, d))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn default_tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn parse_scalar(text: &str) -> Option<Self> {
        let (n, d) = split_ratio(text)?;
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = match d {
            Some(d) => d.parse().ok()?,
            None => BigInt::from(1),
        };
        (d != BigInt::from(0)).then(|| BigRational::new(n, d))
    }
}
