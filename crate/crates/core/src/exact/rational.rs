//! Arbitrary-precision rationals and their string form `"p/q"` (or `"p"`).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ExactError;

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; the result is reduced.
pub fn parse(s: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::ParseRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical string: `"p"` when the denominator is one, else `"p/q"`.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact `base^exponent`, when that number is rational.
///
/// Integer exponents always succeed (except `0^negative`). A fractional
/// exponent `a/b` needs `base >= 0` whose numerator and denominator are
/// perfect `b`-th powers.
pub fn pow_exact(base: &Rational, exponent: &Rational) -> Result<Rational, ExactError> {
    let inexact = || ExactError::InexactPower {
        eps: Box::new(base.clone()),
        exponent: Box::new(exponent.clone()),
    };
    let root_index: u32 = exponent.denom().try_into().map_err(|_| inexact())?;
    let numer: i32 = exponent.numer().try_into().map_err(|_| inexact())?;
    if base.is_zero() {
        return match numer.signum() {
            1 => Ok(Rational::zero()),
            0 => Ok(Rational::one()),
            _ => Err(ExactError::NegativeExponent {
                exponent: Box::new(exponent.clone()),
            }),
        };
    }
    let root = if root_index == 1 {
        base.clone()
    } else {
        if base.is_negative() {
            return Err(inexact());
        }
        let n = base.numer().nth_root(root_index);
        let d = base.denom().nth_root(root_index);
        if num_traits::pow(n.clone(), root_index as usize) != *base.numer()
            || num_traits::pow(d.clone(), root_index as usize) != *base.denom()
        {
            return Err(inexact());
        }
        Rational::new(n, d)
    };
    Ok(num_traits::pow::Pow::pow(&root, numer))
}

/// Serde adapter for [`Rational`] as a `"p/q"` string.
pub mod serde_str {
    use super::{format, parse, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}
