//! Radial functions on `Q_p^*` over a finite window of spheres.
//!
//! A radial function is constant on each sphere `S_γ = {|x|_p = p^γ}`, so it
//! is stored as one coefficient per valuation γ. Integrals reduce to sums
//! weighted by the sphere measures `p^γ (1 - 1/p)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::padic::PrimeBase;
use crate::scalar::{ParseScalarError, Scalar};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum RadialError {
    #[error("empty valuation window: gamma_min {min} > gamma_max {max}")]
    EmptyWindow { min: i64, max: i64 },
    #[error("window [{min}, {max}] does not meet the support of the family")]
    BadWindow { min: i64, max: i64 },
    #[error("expected {expected} coefficients for the window, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("exponent must be finite here")]
    InfiniteExponent,
    #[error("radial functions over different primes ({0} vs {1})")]
    BaseMismatch(u64, u64),
    #[error("invalid prime: {0}")]
    Prime(#[from] crate::padic::PadicError),
}

/// A Lebesgue exponent in `[1, ∞]`.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtendedExponent {
    Finite(Scalar),
    Infinite,
}

impl ExtendedExponent {
    pub fn finite(q: impl Into<Scalar>) -> Self {
        ExtendedExponent::Finite(q.into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedExponent::Finite(_))
    }

    pub fn value(&self) -> f64 {
        match self {
            ExtendedExponent::Finite(q) => q.value(),
            ExtendedExponent::Infinite => f64::INFINITY,
        }
    }

    /// `1/q`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> Scalar {
        match self {
            ExtendedExponent::Finite(q) => q.recip(),
            ExtendedExponent::Infinite => Scalar::zero(),
        }
    }

    /// The conjugate exponent `q'` with `1/q + 1/q' = 1`.
    pub fn conjugate(&self) -> ExtendedExponent {
        let inv = Scalar::one() - self.reciprocal();
        if inv.is_zero() {
            ExtendedExponent::Infinite
        } else {
            ExtendedExponent::Finite(inv.recip())
        }
    }
}

impl fmt::Display for ExtendedExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedExponent::Finite(q) => write!(f, "{q}"),
            ExtendedExponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedExponent {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(ExtendedExponent::Infinite),
            _ => s.parse().map(ExtendedExponent::Finite),
        }
    }
}

impl Serialize for ExtendedExponent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedExponent::Finite(q) => q.serialize(serializer),
            ExtendedExponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedExponent {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(v) => Ok(ExtendedExponent::Finite(Scalar::float(v))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// An inclusive range of valuations `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValuationWindow {
    min: i64,
    max: i64,
}

impl ValuationWindow {
    pub fn new(min: i64, max: i64) -> Result<Self, RadialError> {
        if min > max {
            return Err(RadialError::EmptyWindow { min, max });
        }
        Ok(Self { min, max })
    }

    /// `[-half, half]`.
    pub fn symmetric(half: u32) -> Self {
        Self {
            min: -(half as i64),
            max: half as i64,
        }
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.max
    }

    pub fn len(&self) -> usize {
        (self.max - self.min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, gamma: i64) -> bool {
        (self.min..=self.max).contains(&gamma)
    }

    pub fn index_of(&self, gamma: i64) -> Option<usize> {
        self.contains(gamma).then(|| (gamma - self.min) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + Clone {
        self.min..=self.max
    }

    pub fn expand(&self, below: u32, above: u32) -> Self {
        Self {
            min: self.min - below as i64,
            max: self.max + above as i64,
        }
    }

    pub fn contains_window(&self, other: &ValuationWindow) -> bool {
        self.min <= other.min && other.max <= self.max
    }
}

/// `f(x) = values[γ - γ_min]` on `|x|_p = p^γ` for γ in the window, else 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RadialJson", into = "RadialJson")]
pub struct RadialFunction {
    base: PrimeBase,
    window: ValuationWindow,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RadialJson {
    p: u64,
    gamma_min: i64,
    gamma_max: i64,
    values: Vec<f64>,
}

impl TryFrom<RadialJson> for RadialFunction {
    type Error = RadialError;
    fn try_from(j: RadialJson) -> Result<Self, Self::Error> {
        let base = PrimeBase::new(j.p)?;
        let window = ValuationWindow::new(j.gamma_min, j.gamma_max)?;
        RadialFunction::new(base, window, j.values)
    }
}

impl From<RadialFunction> for RadialJson {
    fn from(f: RadialFunction) -> Self {
        RadialJson {
            p: f.base.get(),
            gamma_min: f.window.min,
            gamma_max: f.window.max,
            values: f.values,
        }
    }
}

impl RadialFunction {
    pub fn new(
        base: PrimeBase,
        window: ValuationWindow,
        values: Vec<f64>,
    ) -> Result<Self, RadialError> {
        if values.len() != window.len() {
            return Err(RadialError::LengthMismatch {
                expected: window.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            base,
            window,
            values,
        })
    }

    pub fn zero(base: PrimeBase, window: ValuationWindow) -> Self {
        Self {
            base,
            window,
            values: vec![0.0; window.len()],
        }
    }

    pub fn from_fn(base: PrimeBase, window: ValuationWindow, f: impl Fn(i64) -> f64) -> Self {
        let values = window.iter().map(f).collect();
        Self {
            base,
            window,
            values,
        }
    }

    /// Indicator of the ball `B_γ`, truncated below at `window.min()`.
    pub fn ball_indicator(base: PrimeBase, window: ValuationWindow, gamma: i64) -> Self {
        Self::from_fn(base, window, |g| if g <= gamma { 1.0 } else { 0.0 })
    }

    pub fn sphere_indicator(base: PrimeBase, gamma: i64) -> Self {
        Self {
            base,
            window: ValuationWindow {
                min: gamma,
                max: gamma,
            },
            values: vec![1.0],
        }
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn window(&self) -> ValuationWindow {
        self.window
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value on the sphere `|x|_p = p^γ` (zero outside the window).
    pub fn at(&self, gamma: i64) -> f64 {
        self.window
            .index_of(gamma)
            .map_or(0.0, |i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.window.iter().zip(self.values.iter().copied())
    }
}

/// `∫_{Q_p^*} f(x) dx = (1 - 1/p) Σ_γ p^γ φ_γ`.
pub fn integrate_radial(f: &RadialFunction) -> f64 {
    let ln_p = f.base.ln();
    let c = f.base.unit_sphere_measure();
    c * f
        .iter()
        .filter(|&(_, v)| v != 0.0)
        .map(|(g, v)| v * (g as f64 * ln_p).exp())
        .sum::<f64>()
}

/// `‖f‖_{q,θ} = ((1-1/p) Σ_γ p^{γ(θ+1)} |φ_γ|^q)^{1/q}`; for `q = ∞` the
/// unweighted sup over the window (θ ignored).
pub fn weighted_norm(f: &RadialFunction, q: &ExtendedExponent, theta: f64) -> f64 {
    match q {
        ExtendedExponent::Infinite => f.values.iter().fold(0.0, |m, v| m.max(v.abs())),
        ExtendedExponent::Finite(q) => lq_norm(&to_coords(f, q.value(), theta), q.value()),
    }
}

/// Isometric coordinates: `u_γ = φ_γ ((1-1/p) p^{γ(θ+1)})^{1/q}`, so the
/// plain `l^q` norm of `u` equals `‖f‖_{q,θ}`.
pub fn to_sequence_coords(
    f: &RadialFunction,
    q: &ExtendedExponent,
    theta: f64,
) -> Result<Vec<f64>, RadialError> {
    match q {
        ExtendedExponent::Infinite => Err(RadialError::InfiniteExponent),
        ExtendedExponent::Finite(q) => Ok(to_coords(f, q.value(), theta)),
    }
}

fn to_coords(f: &RadialFunction, q: f64, theta: f64) -> Vec<f64> {
    let ln_p = f.base.ln();
    let ln_c = f.base.unit_sphere_measure().ln();
    f.iter()
        .map(|(g, v)| {
            if v == 0.0 {
                0.0
            } else {
                let log = v.abs().ln() + (ln_c + g as f64 * (theta + 1.0) * ln_p) / q;
                v.signum() * log.exp()
            }
        })
        .collect()
}

/// Inverse of [`to_sequence_coords`].
pub fn from_sequence_coords(
    base: PrimeBase,
    window: ValuationWindow,
    coords: &[f64],
    q: f64,
    theta: f64,
) -> Result<RadialFunction, RadialError> {
    let ln_p = base.ln();
    let ln_c = base.unit_sphere_measure().ln();
    let values = window
        .iter()
        .zip(coords)
        .map(|(g, &u)| {
            if u == 0.0 {
                0.0
            } else {
                u.signum() * (u.abs().ln() - (ln_c + g as f64 * (theta + 1.0) * ln_p) / q).exp()
            }
        })
        .collect();
    RadialFunction::new(base, window, values)
}

/// `(Σ |u_i|^q)^{1/q}`, scaled by the max entry to avoid overflow.
pub fn lq_norm(u: &[f64], q: f64) -> f64 {
    let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    if q.is_infinite() {
        return scale;
    }
    let sum: f64 = u.iter().map(|v| (v.abs() / scale).powf(q)).sum();
    scale * sum.powf(1.0 / q)
}

/// `∫ f g |x|^θ dx` over the common window.
pub fn weighted_inner_product(
    f: &RadialFunction,
    g: &RadialFunction,
    theta: f64,
) -> Result<f64, RadialError> {
    if f.base != g.base {
        return Err(RadialError::BaseMismatch(f.base.get(), g.base.get()));
    }
    let ln_p = f.base.ln();
    let c = f.base.unit_sphere_measure();
    let lo = f.window.min.max(g.window.min);
    let hi = f.window.max.min(g.window.max);
    Ok(c * (lo..=hi)
        .map(|k| f.at(k) * g.at(k) * (k as f64 * (theta + 1.0) * ln_p).exp())
        .sum::<f64>())
}

/// `Σ_{k ≥ 0} ratio^k · first`, for `0 ≤ ratio < 1`.
pub fn geometric_tail(first: f64, ratio: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&ratio));
    first / (1.0 - ratio)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremalKind {
    /// `|x|_p^{(-(α+1)+ε)/q}` on `|x|_p ≤ 1`.
    Inner,
    /// `|x|_p^{(-(α+1)-ε)/q}` on `|x|_p ≥ 1`.
    Outer,
}

/// Parameters of one member of the near-extremal power families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalSpec {
    pub kind: ExtremalKind,
    pub epsilon: f64,
    pub q: f64,
    pub alpha: f64,
    pub normalized: bool,
}

impl ExtremalSpec {
    fn check(&self, window: ValuationWindow) -> Result<(), RadialError> {
        if !(self.epsilon > 0.0) {
            return Err(RadialError::NonPositiveEpsilon(self.epsilon));
        }
        let meets = match self.kind {
            ExtremalKind::Inner => window.min <= 0,
            ExtremalKind::Outer => window.max >= 0,
        };
        if meets {
            Ok(())
        } else {
            Err(RadialError::BadWindow {
                min: window.min,
                max: window.max,
            })
        }
    }

    fn supported(&self, gamma: i64) -> bool {
        match self.kind {
            ExtremalKind::Inner => gamma <= 0,
            ExtremalKind::Outer => gamma >= 0,
        }
    }

    /// `ln c_{p,ε} = (1/q) ln((1-p^{-ε})/(1-p^{-1}))` when normalized.
    fn ln_normalizer(&self, base: PrimeBase) -> f64 {
        if !self.normalized {
            return 0.0;
        }
        let ln_p = base.ln();
        ((-(-self.epsilon * ln_p).exp_m1()).ln() - base.unit_sphere_measure().ln()) / self.q
    }

    fn ln_value(&self, gamma: i64, ln_p: f64) -> f64 {
        let signed_eps = match self.kind {
            ExtremalKind::Inner => self.epsilon,
            ExtremalKind::Outer => -self.epsilon,
        };
        gamma as f64 * (-(self.alpha + 1.0) + signed_eps) / self.q * ln_p
    }

    /// `‖f‖_{q,α}^q` of the untruncated family: `(1-p^{-1})/(1-p^{-ε})`
    /// (or 1 when normalized).
    pub fn full_norm_pow_q(&self, base: PrimeBase) -> f64 {
        if self.normalized {
            1.0
        } else {
            base.unit_sphere_measure() / -(-self.epsilon * base.ln()).exp_m1()
        }
    }

    /// Fraction of `‖f‖^q` lying outside the window.
    pub fn missing_fraction(&self, base: PrimeBase, window: ValuationWindow) -> f64 {
        let depth = match self.kind {
            ExtremalKind::Inner => -window.min,
            ExtremalKind::Outer => window.max,
        };
        if depth < 0 {
            return 1.0;
        }
        (-(depth as f64 + 1.0) * self.epsilon * base.ln()).exp()
    }
}

/// The near-extremal power function described by `spec`, restricted to `window`.
pub fn extremal_family(
    spec: ExtremalSpec,
    base: PrimeBase,
    window: ValuationWindow,
) -> Result<RadialFunction, RadialError> {
    spec.check(window)?;
    let ln_p = base.ln();
    let ln_c = spec.ln_normalizer(base);
    Ok(RadialFunction::from_fn(base, window, |g| {
        if spec.supported(g) {
            (ln_c + spec.ln_value(g, ln_p)).exp()
        } else {
            0.0
        }
    }))
}

/// Isometric `l^q` coordinates (weight `α`) of [`extremal_family`], computed
/// in log space so deep windows neither overflow nor underflow.
pub fn extremal_coords(
    spec: ExtremalSpec,
    base: PrimeBase,
    window: ValuationWindow,
) -> Result<Vec<f64>, RadialError> {
    spec.check(window)?;
    let ln_p = base.ln();
    let ln_c = spec.ln_normalizer(base);
    let ln_sphere = base.unit_sphere_measure().ln();
    Ok(window
        .iter()
        .map(|g| {
            if spec.supported(g) {
                let weight = (ln_sphere + g as f64 * (spec.alpha + 1.0) * ln_p) / spec.q;
                (ln_c + spec.ln_value(g, ln_p) + weight).exp()
            } else {
                0.0
            }
        })
        .collect())
}
