//! Scalar hierarchy shared by every module.
//!
//! The combinatorial transforms only need ring operations, so they run
//! unchanged over exact rationals, floats and polynomials in `t`.
//! Inversions need division; anything that checks signs or converts to
//! floating point needs [`Scalar`].

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Commutative ring with unit.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Ring with division by nonzero elements.
pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

/// Ordered field that can be built from integers and read out as `f64`:
/// `f32`, `f64` and [`BigRational`].
pub trait Scalar: Field + PartialOrd + Signed + FromPrimitive + ToPrimitive + Display {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the scalar type")
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_int(p) / Self::from_int(q)
    }

    fn to_float(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Field + PartialOrd + Signed + FromPrimitive + ToPrimitive + Display {}

/// `base^exp` by repeated squaring, for any ring.
pub fn pow<R: Ring>(base: &R, mut exp: u32) -> R {
    let mut result = R::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    result
}

/// Embed a non-negative integer in any ring.
pub fn ring_from_usize<R: Ring>(n: usize) -> R {
    let mut acc = R::zero();
    let two = R::one() + R::one();
    let mut bit = R::one();
    let mut m = n;
    while m > 0 {
        if m & 1 == 1 {
            acc = acc + bit.clone();
        }
        m >>= 1;
        if m > 0 {
            bit = bit * two.clone();
        }
    }
    acc
}

/// Embed an arbitrary integer in any ring.
pub fn ring_from_bigint<R: Ring>(n: &BigInt) -> R {
    let (sign, digits) = n.to_u32_digits();
    let base: R = ring_from_usize(1usize << 16);
    let base = base.clone() * base;
    let magnitude = digits
        .iter()
        .rev()
        .fold(R::zero(), |acc, &d| acc * base.clone() + ring_from_usize(d as usize));
    if sign == num_bigint::Sign::Minus {
        -magnitude
    } else {
        magnitude
    }
}

/// Parse `"p/q"` or `"p"` into an exact rational. The denominator must be
/// positive.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational literal: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if !q.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "denominator must be positive in {s:?}"
                )));
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Shorthand for an exact rational `p/q`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub(crate) mod rational_strings {
    //! serde helpers: sequences of rationals as `"p/q"` strings.
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S, T>(values: &[T], ser: S) -> std::result::Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: Display,
    {
        ser.collect_seq(values.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D, T>(de: D) -> std::result::Result<Vec<T>, D::Error>
    where
        D: Deserializer<'de>,
        T: FromStr,
    {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter()
            .map(|s| {
                T::from_str(s.trim()).map_err(|_| D::Error::custom(format!("bad number {s:?}")))
            })
            .collect()
    }
}

pub(crate) mod rational_string {
    //! serde helpers: one rational as a `"p/q"` string.
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<S: Serializer, T: Display>(value: &T, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: FromStr>(de: D) -> Result<T, D::Error> {
        let raw = String::deserialize(de)?;
        T::from_str(raw.trim()).map_err(|_| D::Error::custom(format!("bad number {raw:?}")))
    }
}
