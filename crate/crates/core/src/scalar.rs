//! Real parameters that remember whether they are exact.
//!
//! Every kernel and weight parameter is carried as a [`Scalar`]: an `f64`
//! approximation plus, when the value was given as an integer, a fraction
//! `a/b` or a terminating decimal, the exact rational. Arithmetic keeps the
//! rational as long as both operands have one, so balance conditions such as
//! `λ = μ + ν + 1 + (β+1)/r - (α+1)/q` can be tested for exact equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Relative tolerance used when at least one side of a comparison is inexact.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot parse {input:?} as a real number")]
pub struct ParseScalarError {
    pub input: String,
}

#[derive(Clone, Debug)]
pub struct Scalar {
    approx: f64,
    exact: Option<BigRational>,
}

impl Scalar {
    pub fn exact(value: BigRational) -> Self {
        let approx = rational_to_f64(&value);
        Self {
            approx,
            exact: Some(value),
        }
    }

    pub fn float(value: f64) -> Self {
        Self {
            approx: value,
            exact: None,
        }
    }

    pub fn integer(value: i64) -> Self {
        Self::exact(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::exact(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn value(&self) -> f64 {
        self.approx
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn recip(&self) -> Scalar {
        Scalar::one() / self.clone()
    }

    /// Compares two scalars. Exact operands compare exactly; otherwise values
    /// within [`FLOAT_TOLERANCE`] (relative, floored at 1) are reported equal.
    pub fn compare(&self, other: &Scalar) -> Ordering {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.approx, other.approx);
                let scale = a.abs().max(b.abs()).max(1.0);
                if (a - b).abs() <= FLOAT_TOLERANCE * scale {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.compare(&Scalar::zero()) == Ordering::Equal
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerators/denominators: fall back to a scaled quotient.
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

impl From<f64> for Scalar {
    fn from(value: f64) -> Self {
        Scalar::float(value)
    }
}

impl From<i64> for Scalar {
    fn from(value: i64) -> Self {
        Scalar::integer(value)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.approx == other.approx,
            _ => false,
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }

        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (&self.exact, &rhs.exact) {
                    (Some(a), Some(b)) => Scalar::exact(a $op b),
                    _ => Scalar::float(self.approx $op rhs.approx),
                }
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);
binary_op!(Mul, mul, *);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        match (&self.exact, &rhs.exact) {
            (Some(a), Some(b)) if !b.is_zero() => Scalar::exact(a / b),
            _ => Scalar::float(self.approx / rhs.approx),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            approx: -self.approx,
            exact: self.exact.map(|r| -r),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Some(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            None => write!(f, "{}", self.approx),
        }
    }
}

/// Parses a terminating decimal such as `-1.25` or `3e-2` exactly.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if negative { -value } else { value })
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let err = || ParseScalarError {
            input: s.to_string(),
        };
        if let Some((n, d)) = trimmed.split_once('/') {
            let n = parse_decimal(n.trim()).ok_or_else(err)?;
            let d = parse_decimal(d.trim()).ok_or_else(err)?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Scalar::exact(n / d));
        }
        if let Some(r) = parse_decimal(trimmed) {
            return Ok(Scalar::exact(r));
        }
        match trimmed.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Scalar::float(v)),
            _ => Err(err()),
        }
    }
}

// Exact scalars serialize as strings ("3/2"), inexact ones as JSON numbers.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.exact {
            Some(_) => serializer.serialize_str(&self.to_string()),
            None => serializer.serialize_f64(self.approx),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a rational string such as \"3/2\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
                Ok(Scalar::float(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::float(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar::float(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        let half: Scalar = "1/2".parse().unwrap();
        assert_eq!(half, Scalar::ratio(1, 2));
        let dec: Scalar = "-0.25".parse().unwrap();
        assert_eq!(dec, Scalar::ratio(-1, 4));
        let sci: Scalar = "15e-1".parse().unwrap();
        assert_eq!(sci, Scalar::ratio(3, 2));
        assert!("abc".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
    }

    #[test]
    fn exactness_survives_arithmetic() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(2, 3);
        let sum = &a + &b;
        assert_eq!(sum, Scalar::one());
        let mixed = &a + &Scalar::float(0.5);
        assert!(!mixed.is_exact());
        assert!((mixed.value() - (1.0 / 3.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn float_comparison_uses_tolerance() {
        let a = Scalar::float(0.1 + 0.2);
        let b = Scalar::ratio(3, 10);
        assert_eq!(a.compare(&b), Ordering::Equal);
        assert_eq!(Scalar::ratio(1, 3).compare(&Scalar::ratio(1, 2)), Ordering::Less);
    }

    #[test]
    fn serde_keeps_exactness() {
        let s = Scalar::ratio(-3, 2);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"-3/2\"");
        let back: Scalar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let f: Scalar = serde_json::from_str("0.75").unwrap();
        assert!(!f.is_exact());
    }
}
