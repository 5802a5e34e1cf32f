//! Exact p-adic arithmetic on rationals.
//!
//! Valuations are extracted by repeated exact division of numerator and
//! denominator; nothing here goes through floating point except the lossy
//! `*_f64` conveniences.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero has no canonical digit expansion")]
    ZeroInput,
    #[error("digit count must be at least 1")]
    NoDigits,
}

/// A prime `p`, checked by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeBase(u64);

impl PrimeBase {
    pub fn new(p: u64) -> Result<Self, PadicError> {
        if is_prime(p) {
            Ok(Self(p))
        } else {
            Err(PadicError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn ln(self) -> f64 {
        (self.0 as f64).ln()
    }

    /// `1 - 1/p`, the Haar measure of the unit sphere.
    pub fn unit_sphere_measure(self) -> f64 {
        1.0 - 1.0 / self.0 as f64
    }

    pub fn pow(self, exponent: f64) -> f64 {
        (exponent * self.ln()).exp()
    }

    fn big(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl TryFrom<u64> for PrimeBase {
    type Error = PadicError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        PrimeBase::new(p)
    }
}

impl From<PrimeBase> for u64 {
    fn from(p: PrimeBase) -> u64 {
        p.0
    }
}

impl fmt::Display for PrimeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The p-adic valuation; `Infinite` is the valuation of zero and sorts last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Strips all factors of `p` from `n`, returning how many were removed.
fn strip_factor(n: &mut BigInt, p: &BigInt) -> i64 {
    let mut count = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        *n = q;
        count += 1;
    }
}

pub fn valuation(x: &BigRational, base: PrimeBase) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = base.big();
    let mut numer = x.numer().clone();
    let mut denom = x.denom().clone();
    Valuation::Finite(strip_factor(&mut numer, &p) - strip_factor(&mut denom, &p))
}

/// `|x|_p` as an exact rational.
pub fn padic_norm_exact(x: &BigRational, base: PrimeBase) -> BigRational {
    match valuation(x, base) {
        Valuation::Infinite => BigRational::zero(),
        Valuation::Finite(v) => p_power(base, -v),
    }
}

pub fn padic_norm(x: &BigRational, base: PrimeBase) -> f64 {
    match valuation(x, base) {
        Valuation::Infinite => 0.0,
        Valuation::Finite(v) => base.as_f64().powi(-v as i32),
    }
}

/// `p^k` as an exact rational, for any integer `k`.
pub fn p_power(base: PrimeBase, k: i64) -> BigRational {
    let mag = num_traits::pow(base.big(), k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// A rational together with its cached valuation.
#[derive(Clone, Debug, PartialEq)]
pub struct PAdicScalar {
    value: BigRational,
    base: PrimeBase,
    valuation: Valuation,
}

impl PAdicScalar {
    pub fn new(value: BigRational, base: PrimeBase) -> Self {
        let valuation = valuation(&value, base);
        Self {
            value,
            base,
            valuation,
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn norm(&self) -> BigRational {
        match self.valuation {
            Valuation::Infinite => BigRational::zero(),
            Valuation::Finite(v) => p_power(self.base, -v),
        }
    }

    pub fn norm_f64(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::NAN)
    }

    pub fn digits(&self, count: usize) -> Result<DigitExpansion, PadicError> {
        digit_expansion(&self.value, self.base, count)
    }
}

/// The leading `digits.len()` terms of `x = p^γ Σ a_j p^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitExpansion {
    pub p: u64,
    pub gamma: i64,
    pub digits: Vec<u64>,
}

impl DigitExpansion {
    /// `p^γ Σ_{j<k} a_j p^j`.
    pub fn partial_sum(&self, k: usize) -> BigRational {
        let p = BigInt::from(self.p);
        let mut acc = BigInt::zero();
        for &a in self.digits[..k.min(self.digits.len())].iter().rev() {
            acc = acc * &p + BigInt::from(a);
        }
        let base = PrimeBase(self.p);
        BigRational::from_integer(acc) * p_power(base, self.gamma)
    }
}

impl fmt::Display for DigitExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} * (", self.p, self.gamma)?;
        for (j, a) in self.digits.iter().enumerate() {
            if j > 0 {
                f.write_str(" + ")?;
            }
            match j {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*{}", self.p)?,
                _ => write!(f, "{a}*{}^{j}", self.p)?,
            }
        }
        f.write_str(" + ...)")
    }
}

/// Canonical digit expansion of a nonzero rational.
///
/// Writes `x = p^γ m/n` with `p ∤ m n`, then peels digits off the unit part:
/// `a = m·n⁻¹ mod p`, `m ← (m - a n)/p`.
pub fn digit_expansion(
    x: &BigRational,
    base: PrimeBase,
    count: usize,
) -> Result<DigitExpansion, PadicError> {
    if count == 0 {
        return Err(PadicError::NoDigits);
    }
    let gamma = valuation(x, base).finite().ok_or(PadicError::ZeroInput)?;
    let p = base.big();
    let unit = x / p_power(base, gamma);
    let mut m = unit.numer().clone();
    let n = unit.denom().clone();
    let n_inv = mod_inverse(&n.mod_floor(&p), &p);

    let mut digits = Vec::with_capacity(count);
    for _ in 0..count {
        let a = (m.mod_floor(&p) * &n_inv).mod_floor(&p);
        m = (&m - &a * &n) / &p;
        digits.push(a.to_u64().expect("digit below p"));
    }
    Ok(DigitExpansion {
        p: base.get(),
        gamma,
        digits,
    })
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let g = a.extended_gcd(p);
    debug_assert!(g.gcd.is_one(), "unit part must be coprime to p");
    g.x.mod_floor(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// `{|x|_p ≤ p^γ}`
    Ball(i64),
    /// `{|x|_p = p^γ}`
    Sphere(i64),
}

/// Haar measure normalized so the unit ball has measure 1.
pub fn haar_measure(region: Region, base: PrimeBase) -> BigRational {
    match region {
        Region::Ball(g) => p_power(base, g),
        Region::Sphere(g) => {
            let p = BigRational::from_integer(base.big());
            p_power(base, g) * (BigRational::one() - p.recip())
        }
    }
}

pub fn haar_measure_f64(region: Region, base: PrimeBase) -> f64 {
    haar_measure(region, base).to_f64().unwrap_or(f64::NAN)
}

/// Parses `a`, `-a`, or `a/b` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(n: u64) -> PrimeBase {
        PrimeBase::new(n).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeBase::new(1), Err(PadicError::NotPrime(1)));
        assert_eq!(PrimeBase::new(9), Err(PadicError::NotPrime(9)));
        assert!(PrimeBase::new(97).is_ok());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&q(3, 1), p(3)), Valuation::Finite(1));
        assert_eq!(valuation(&q(0, 1), p(5)), Valuation::Infinite);
        assert_eq!(valuation(&q(12, 1), p(2)), Valuation::Finite(2));
        assert_eq!(valuation(&q(5, 18), p(3)), Valuation::Finite(-2));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(padic_norm_exact(&q(3, 1), p(3)), q(1, 3));
        assert_eq!(padic_norm(&q(1, 1), p(7)), 1.0);
        assert_eq!(padic_norm(&q(1, 2), p(2)), 2.0);
        assert_eq!(padic_norm(&q(0, 1), p(2)), 0.0);
    }

    #[test]
    fn digit_examples() {
        let e = digit_expansion(&q(1, 2), p(3), 4).unwrap();
        assert_eq!((e.gamma, e.digits.clone()), (0, vec![2, 1, 1, 1]));
        let e = digit_expansion(&q(-1, 1), p(2), 5).unwrap();
        assert_eq!((e.gamma, e.digits.clone()), (0, vec![1, 1, 1, 1, 1]));
        let e = digit_expansion(&q(9, 1), p(3), 3).unwrap();
        assert_eq!((e.gamma, e.digits.clone()), (2, vec![1, 0, 0]));
        assert_eq!(
            digit_expansion(&q(0, 1), p(3), 3),
            Err(PadicError::ZeroInput)
        );
    }

    #[test]
    fn haar_examples() {
        assert_eq!(haar_measure(Region::Ball(0), p(2)), q(1, 1));
        assert_eq!(haar_measure(Region::Sphere(0), p(3)), q(2, 3));
        assert_eq!(haar_measure(Region::Ball(-2), p(2)), q(1, 4));
    }

    #[test]
    fn ball_telescopes_into_spheres() {
        for prime in [2, 3, 5, 7] {
            let base = p(prime);
            for gamma in -3..=3 {
                for depth in 0..8 {
                    let spheres: BigRational = (gamma - depth..=gamma)
                        .map(|k| haar_measure(Region::Sphere(k), base))
                        .sum();
                    let rest = haar_measure(Region::Ball(gamma), base) - spheres;
                    assert_eq!(rest, p_power(base, gamma - depth - 1));
                }
            }
        }
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("12"), Some(q(12, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn display_digits() {
        let e = digit_expansion(&q(1, 2), p(3), 3).unwrap();
        assert_eq!(e.to_string(), "3^0 * (2 + 1*3 + 1*3^2 + ...)");
    }
}
