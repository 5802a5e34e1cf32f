//! Closed-form results: the radial integral `I(y)`, the boundedness decision
//! table over all exponent regimes, sharp norms, exact endpoint norms, and
//! Schur-test upper bounds.
//!
//! The central quantity is the balance residual
//! `τ = μ + ν + 1 + (β+1)/r - (α+1)/q - λ` (with `1/∞ = 0`); the operator
//! can only be bounded when `τ = 0`, since dilating `f` by `p^k` scales
//! `‖Hf‖/‖f‖` by `p^{kτ}`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::operator::{kernel_sup_bound, KernelParams, SpaceParams, SupBound};
use crate::padic::PrimeBase;
use crate::radial::{ExtendedExponent, ExtremalKind};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceSide {
    /// The sum over small spheres (`|x| → 0`) diverges.
    Origin,
    /// The sum over large spheres (`|x| → ∞`) diverges.
    Infinity,
}

impl fmt::Display for DivergenceSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivergenceSide::Origin => "origin",
            DivergenceSide::Infinity => "infinity",
        })
    }
}

#[derive(Debug, thiserror::Error, Clone, Copy, PartialEq, Eq)]
#[error("integral diverges at {which}")]
pub struct Diverges {
    pub which: DivergenceSide,
}

/// `I(y) = ∫ |x|^a / max(|x|,|y|)^λ dx
///       = (1-1/p)[1 + 1/(p^{a+1}-1) + 1/(p^{λ-a-1}-1)] · |y|^{a+1-λ}`.
pub fn closed_form_i(a: f64, lambda: f64, ynorm: f64, base: PrimeBase) -> Result<f64, Diverges> {
    if a <= -1.0 {
        return Err(Diverges {
            which: DivergenceSide::Origin,
        });
    }
    if lambda - a - 1.0 <= 0.0 {
        return Err(Diverges {
            which: DivergenceSide::Infinity,
        });
    }
    let c = base.unit_sphere_measure();
    let lead = c * (1.0 + 1.0 / (base.pow(a + 1.0) - 1.0) + 1.0 / (base.pow(lambda - a - 1.0) - 1.0));
    Ok(lead * ynorm.powf(a + 1.0 - lambda))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Bounded,
    Unbounded,
    OutOfScope,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Bounded => "bounded",
            Status::Unbounded => "unbounded",
            Status::OutOfScope => "out-of-scope",
        })
    }
}

/// The rule of the decision table that produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// `1 ≤ q < r < ∞`.
    FiniteQLeR,
    /// `1 ≤ q = r < ∞`; the sharp norm is known.
    FiniteDiagonal,
    /// `q = 1, r = ∞`; endpoints of the window are included.
    L1ToLinf,
    /// `1 < q < ∞, r = ∞`.
    LqToLinf,
    /// `q = r = ∞`.
    LinfToLinf,
    /// `1 ≤ r < q ≤ ∞`: never bounded.
    TargetBelowSource,
    /// Exponents below 1.
    Untreated,
}

impl Criterion {
    pub fn tag(self) -> &'static str {
        match self {
            Criterion::FiniteQLeR => "finite-q-le-r",
            Criterion::FiniteDiagonal => "finite-diagonal",
            Criterion::L1ToLinf => "l1-to-linf",
            Criterion::LqToLinf => "lq-to-linf",
            Criterion::LinfToLinf => "linf-to-linf",
            Criterion::TargetBelowSource => "target-below-source",
            Criterion::Untreated => "untreated",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Le => "<=",
        })
    }
}

impl Relation {
    fn holds(self, ord: Ordering) -> bool {
        match self {
            Relation::Eq => ord == Ordering::Equal,
            Relation::Lt => ord == Ordering::Less,
            Relation::Le => ord != Ordering::Greater,
        }
    }
}

/// One requirement `lhs relation rhs` of a decision rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub lhs: Scalar,
    pub relation: Relation,
    pub rhs: Scalar,
    pub satisfied: bool,
}

impl Condition {
    fn new(name: &str, lhs: Scalar, relation: Relation, rhs: Scalar) -> Self {
        let satisfied = relation.holds(lhs.compare(&rhs));
        Self {
            name: name.to_string(),
            lhs,
            relation,
            rhs,
            satisfied,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub criterion: Criterion,
    pub tau: Scalar,
    pub conditions: Vec<Condition>,
    /// For balanced finite `q ≤ r` points sitting exactly on an edge of the
    /// admissible window: the extremal family whose image has infinite norm.
    pub boundary: Option<ExtremalKind>,
}

/// `τ = μ + ν + 1 + (β+1)/r - (α+1)/q - λ`.
pub fn balance_residual(k: &KernelParams, s: &SpaceParams) -> Scalar {
    let one = Scalar::one();
    let target = &(&s.beta + &one) * &s.r.reciprocal();
    let source = &(&s.alpha + &one) * &s.q.reciprocal();
    let sum = &(&(&k.mu + &k.nu) + &one) + &target;
    &(&sum - &source) - &k.lambda
}

fn below_one(e: &ExtendedExponent) -> bool {
    match e {
        ExtendedExponent::Finite(v) => v.compare(&Scalar::one()) == Ordering::Less,
        ExtendedExponent::Infinite => false,
    }
}

/// Decides boundedness of `H : L^q_α → L^r_β` for every regime of `(q, r)`.
pub fn check_boundedness(k: &KernelParams, s: &SpaceParams) -> Verdict {
    use ExtendedExponent::{Finite, Infinite};
    use Relation::*;

    let tau = balance_residual(k, s);
    let zero = Scalar::zero();
    let one = Scalar::one();
    let balance = || Condition::new("balance tau = 0", tau.clone(), Eq, zero.clone());
    let verdict = |criterion, conditions: Vec<Condition>| {
        let status = if conditions.iter().all(|c| c.satisfied) {
            Status::Bounded
        } else {
            Status::Unbounded
        };
        Verdict {
            status,
            criterion,
            tau: tau.clone(),
            conditions,
            boundary: None,
        }
    };

    let target_below_source = || {
        verdict(
            Criterion::TargetBelowSource,
            vec![Condition::new(
                "1/r <= 1/q",
                s.r.reciprocal(),
                Le,
                s.q.reciprocal(),
            )],
        )
    };

    if below_one(&s.q) || below_one(&s.r) {
        return Verdict {
            status: Status::OutOfScope,
            criterion: Criterion::Untreated,
            tau: tau.clone(),
            conditions: vec![],
            boundary: None,
        };
    }

    match (&s.q, &s.r) {
        (Finite(q), Finite(r)) if r.compare(q) == Ordering::Less => target_below_source(),
        (Infinite, Finite(_)) => target_below_source(),
        (Finite(q), Finite(r)) => {
            let b1 = &s.beta + &one;
            let lower = -(r * &k.nu);
            let upper = r * &(&k.lambda - &k.nu);
            let criterion = if q.compare(r) == Ordering::Equal {
                Criterion::FiniteDiagonal
            } else {
                Criterion::FiniteQLeR
            };
            let mut v = verdict(
                criterion,
                vec![
                    balance(),
                    Condition::new("-r*nu < beta+1", lower.clone(), Lt, b1.clone()),
                    Condition::new("beta+1 < r*(lambda-nu)", b1.clone(), Lt, upper.clone()),
                ],
            );
            if v.conditions[0].satisfied {
                if b1.compare(&upper) == Ordering::Equal {
                    v.boundary = Some(ExtremalKind::Inner);
                } else if b1.compare(&lower) == Ordering::Equal {
                    v.boundary = Some(ExtremalKind::Outer);
                }
            }
            v
        }
        (Finite(q), Infinite) if q.compare(&one) == Ordering::Equal => verdict(
            Criterion::L1ToLinf,
            vec![
                balance(),
                Condition::new("mu-lambda <= alpha", &k.mu - &k.lambda, Le, s.alpha.clone()),
                Condition::new("alpha <= mu", s.alpha.clone(), Le, k.mu.clone()),
            ],
        ),
        (Finite(_), Infinite) => verdict(
            Criterion::LqToLinf,
            vec![
                balance(),
                Condition::new("0 < nu", zero.clone(), Lt, k.nu.clone()),
                Condition::new("nu < lambda", k.nu.clone(), Lt, k.lambda.clone()),
            ],
        ),
        (Infinite, Infinite) => verdict(
            Criterion::LinfToLinf,
            vec![
                balance(),
                Condition::new("0 < nu", zero.clone(), Lt, k.nu.clone()),
                Condition::new("nu < lambda", k.nu.clone(), Lt, k.lambda.clone()),
            ],
        ),
    }
}

/// For a balanced finite `q ≤ r` point on an edge of the admissible window,
/// the extremal family witnessing unboundedness.
pub fn boundary_case(k: &KernelParams, s: &SpaceParams) -> Option<ExtremalKind> {
    check_boundedness(k, s).boundary
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum NormError {
    #[error("operator is not bounded ({0})")]
    NotBounded(Status),
    #[error("no closed-form norm for this regime: {0}")]
    NotAvailable(String),
    #[error("this endpoint formula needs r = 1 or q = inf")]
    WrongRegime,
}

/// A sharp norm `(1-1/p)[1 + 1/(p^A - 1) + 1/(p^B - 1)]` with its terms itemized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpNorm {
    pub value: f64,
    pub prefactor: f64,
    pub below_rate: f64,
    pub above_rate: f64,
    /// `1/(p^A - 1)`.
    pub below_term: f64,
    /// `1/(p^B - 1)`.
    pub above_term: f64,
}

impl SharpNorm {
    fn from_rates(base: PrimeBase, below: f64, above: f64) -> Self {
        let prefactor = base.unit_sphere_measure();
        let below_term = 1.0 / (base.pow(below) - 1.0);
        let above_term = 1.0 / (base.pow(above) - 1.0);
        Self {
            value: prefactor * (1.0 + below_term + above_term),
            prefactor,
            below_rate: below,
            above_rate: above,
            below_term,
            above_term,
        }
    }
}

/// Sharp norm for bounded `q = r` (finite or infinite).
///
/// Finite `q`: rates `A1 = μ+1-(α+1)/q`, `B1 = ν+(β+1)/q`.
/// `q = ∞`: rates `μ+1` and `λ-μ-1` (= ν under balance); this is the sup over
/// `y` of the column integral `∫ k(x,y) dx`.
pub fn sharp_norm(k: &KernelParams, s: &SpaceParams, base: PrimeBase) -> Result<SharpNorm, NormError> {
    let v = check_boundedness(k, s);
    if v.status != Status::Bounded {
        return Err(NormError::NotBounded(v.status));
    }
    let one = Scalar::one();
    let (below, above) = match v.criterion {
        Criterion::FiniteDiagonal => {
            let inv_q = s.q.reciprocal();
            (
                &(&k.mu + &one) - &(&(&s.alpha + &one) * &inv_q),
                &k.nu + &(&(&s.beta + &one) * &inv_q),
            )
        }
        Criterion::LinfToLinf => (&k.mu + &one, &(&k.lambda - &k.mu) - &one),
        other => {
            return Err(NormError::NotAvailable(format!(
                "only bounds are known in the {} regime",
                other.tag()
            )))
        }
    };
    Ok(SharpNorm::from_rates(base, below.value(), above.value()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum EndpointNorm {
    Finite(f64),
    Infinite,
}

/// Exact norm from a one-variable integral of the kernel.
///
/// * `q = ∞` (column route): `‖ y ↦ ∫ k(x,y) dx ‖_{L^r_β}`. Finite only when
///   `r = ∞` and the column integral is a constant.
/// * `r = 1, q = 1` (row route): `sup_x |x|^{-α} ∫ k(x,y) |y|^β dy`.
/// * `r = 1 < q`: infinite, the row integral is not in `L^{q'}`.
pub fn exact_norm_endpoint(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
) -> Result<EndpointNorm, NormError> {
    let one = Scalar::one();
    if !s.q.is_finite() {
        if s.r.is_finite() {
            return Ok(EndpointNorm::Infinite);
        }
        // ∫ k(x,y) dx = |y|^ν I(μ, λ, y) ∝ |y|^{ν+μ+1-λ}
        let exponent = &(&(&k.nu + &k.mu) + &one) - &k.lambda;
        return Ok(
            match closed_form_i(k.mu.value(), k.lambda.value(), 1.0, base) {
                Ok(v) if exponent.is_zero() => EndpointNorm::Finite(v),
                _ => EndpointNorm::Infinite,
            },
        );
    }
    let r_is_one = matches!(&s.r, ExtendedExponent::Finite(r) if r.compare(&one) == Ordering::Equal);
    if !r_is_one {
        return Err(NormError::WrongRegime);
    }
    let q_is_one = matches!(&s.q, ExtendedExponent::Finite(q) if q.compare(&one) == Ordering::Equal);
    if !q_is_one {
        return Ok(EndpointNorm::Infinite);
    }
    // |x|^{μ-α} I(ν+β, λ, x) ∝ |x|^{μ-α+ν+β+1-λ}
    let a = &k.nu + &s.beta;
    let exponent = &(&(&(&k.mu - &s.alpha) + &a) + &one) - &k.lambda;
    Ok(match closed_form_i(a.value(), k.lambda.value(), 1.0, base) {
        Ok(v) if exponent.is_zero() => EndpointNorm::Finite(v),
        _ => EndpointNorm::Infinite,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum SchurFree {
    /// `1 < q ≤ r < ∞`: `t > 1` (with `1/s + 1/t = 1`) and the shift `A`.
    #[serde(rename = "I")]
    CaseI { t: f64, a: f64 },
    /// `q = 1 ≤ r < ∞`: `s > 1` (with `1/s + 1/t = 1`) and the shift `D`.
    #[serde(rename = "II")]
    CaseII { s: f64, d: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum SchurConstants {
    #[serde(rename = "I")]
    CaseI {
        s: f64,
        t: f64,
        a: f64,
        b: f64,
        c1: f64,
        c2: f64,
    },
    #[serde(rename = "II")]
    CaseII {
        s: f64,
        t: f64,
        d: f64,
        c3: f64,
        c4: f64,
    },
}

/// A Schur-test upper bound: `C1^{1/q'} C2^{1/r}` (case I) or
/// `C3 C4^{1/r}` (case II).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurCertificate {
    pub constants: SchurConstants,
    pub bound: f64,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SchurError {
    #[error("Schur bounds need a bounded point with 1 <= q <= r < inf (got {status}, {criterion})")]
    NotApplicable { status: Status, criterion: &'static str },
    #[error("free parameters are not admissible: {0}")]
    InfeasibleFreeParams(String),
}

/// Real-valued view of a point in the `q ≤ r < ∞` regime.
#[derive(Clone, Copy, Debug)]
struct Point {
    lambda: f64,
    mu: f64,
    nu: f64,
    q: f64,
    r: f64,
    alpha: f64,
    beta: f64,
}

fn schur_point(k: &KernelParams, s: &SpaceParams) -> Result<Point, SchurError> {
    let v = check_boundedness(k, s);
    let finite = matches!(v.criterion, Criterion::FiniteQLeR | Criterion::FiniteDiagonal);
    if v.status != Status::Bounded || !finite {
        return Err(SchurError::NotApplicable {
            status: v.status,
            criterion: v.criterion.tag(),
        });
    }
    Ok(Point {
        lambda: k.lambda.value(),
        mu: k.mu.value(),
        nu: k.nu.value(),
        q: s.q.value(),
        r: s.r.value(),
        alpha: s.alpha.value(),
        beta: s.beta.value(),
    })
}

impl Point {
    fn is_case_one(&self) -> bool {
        self.q == 1.0
    }

    /// Admissible open interval for `A` given `s = t'`.
    fn a_window(&self, s: f64) -> (f64, f64) {
        let inv_qp = 1.0 - 1.0 / self.q;
        let base = -inv_qp - self.mu / s;
        let shift = -(self.beta + 1.0) / self.r - self.nu;
        let lo = base.max(base + shift + self.lambda / s);
        let hi = (base + self.lambda / s).min(base + shift + self.lambda);
        (lo, hi)
    }

    /// Admissible open interval for `D` given `t = s'`.
    fn d_window(&self, s: f64, t: f64) -> (f64, f64) {
        let shift = -(self.beta + 1.0) / self.r;
        let lo = (-self.nu / t + shift).max((self.nu - self.lambda) / s);
        let hi = ((self.lambda - self.nu) / t + shift).min(self.nu / s);
        (lo, hi)
    }

    fn case_one(&self, t: f64, a: f64, base: PrimeBase) -> Result<SchurCertificate, SchurError> {
        if !(t > 1.0) || !t.is_finite() {
            return Err(SchurError::InfeasibleFreeParams(format!("t = {t} must exceed 1")));
        }
        let s = t / (t - 1.0);
        let (lo, hi) = self.a_window(s);
        if !(lo < a && a < hi) {
            return Err(SchurError::InfeasibleFreeParams(format!(
                "A = {a} outside the admissible interval ({lo}, {hi})"
            )));
        }
        let qp = self.q / (self.q - 1.0);
        let infeasible = |e: Diverges| SchurError::InfeasibleFreeParams(e.to_string());
        let c1 = closed_form_i(self.mu * qp / s + a * qp, self.lambda * qp / s, 1.0, base)
            .map_err(infeasible)?;
        let b = self.r * ((self.nu + self.mu) / s + a + 1.0 / qp - self.lambda / s);
        let c2 = closed_form_i(
            self.nu * self.r / t + b + self.beta,
            self.lambda * self.r / t,
            1.0,
            base,
        )
        .map_err(infeasible)?;
        Ok(SchurCertificate {
            constants: SchurConstants::CaseI { s, t, a, b, c1, c2 },
            bound: c1.powf(1.0 / qp) * c2.powf(1.0 / self.r),
        })
    }

    fn case_two(&self, s: f64, d: f64, base: PrimeBase) -> Result<SchurCertificate, SchurError> {
        if !(s > 1.0) || !s.is_finite() {
            return Err(SchurError::InfeasibleFreeParams(format!("s = {s} must exceed 1")));
        }
        let t = s / (s - 1.0);
        let (lo, hi) = self.d_window(s, t);
        if !(lo < d && d < hi) {
            return Err(SchurError::InfeasibleFreeParams(format!(
                "D = {d} outside the admissible interval ({lo}, {hi})"
            )));
        }
        let c3 = match kernel_sup_bound(
            (self.lambda - self.nu) / s + d,
            d - self.nu / s,
            self.lambda / s,
            base,
        ) {
            SupBound::Finite(v) => v,
            SupBound::NotCertified => {
                return Err(SchurError::InfeasibleFreeParams(
                    "kernel sup bound not certified".into(),
                ))
            }
        };
        let c4 = closed_form_i(
            self.nu * self.r / t + self.r * d + self.beta,
            self.lambda * self.r / t,
            1.0,
            base,
        )
        .map_err(|e| SchurError::InfeasibleFreeParams(e.to_string()))?;
        Ok(SchurCertificate {
            constants: SchurConstants::CaseII { s, t, d, c3, c4 },
            bound: c3 * c4.powf(1.0 / self.r),
        })
    }

    /// Bound at grid coordinates `u ∈ (0,1)` (`1/t` or `1/s`) and `frac ∈ (0,1)`
    /// (position inside the admissible shift interval).
    fn at(&self, u: f64, frac: f64, base: PrimeBase) -> Option<SchurCertificate> {
        let outer = 1.0 / u;
        let inner = 1.0 / (1.0 - u);
        let (lo, hi) = if self.is_case_one() {
            self.d_window(outer, inner)
        } else {
            self.a_window(inner)
        };
        if !(lo < hi) {
            return None;
        }
        let shift = lo + frac * (hi - lo);
        let cert = if self.is_case_one() {
            self.case_two(outer, shift, base)
        } else {
            self.case_one(outer, shift, base)
        };
        cert.ok().filter(|c| c.bound.is_finite())
    }
}

/// Schur bound at the given free parameters.
pub fn schur_upper_bound(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    free: SchurFree,
) -> Result<SchurCertificate, SchurError> {
    let pt = schur_point(k, s)?;
    match (pt.is_case_one(), free) {
        (false, SchurFree::CaseI { t, a }) => pt.case_one(t, a, base),
        (true, SchurFree::CaseII { s, d }) => pt.case_two(s, d, base),
        (true, _) => Err(SchurError::InfeasibleFreeParams(
            "q = 1 takes (s, D) parameters".into(),
        )),
        (false, _) => Err(SchurError::InfeasibleFreeParams(
            "q > 1 takes (t, A) parameters".into(),
        )),
    }
}

/// Relative inward margin applied to the open parameter intervals.
pub const SCHUR_MARGIN: f64 = 1e-6;

fn clamp_open(x: f64) -> f64 {
    x.clamp(SCHUR_MARGIN, 1.0 - SCHUR_MARGIN)
}

/// Smallest Schur bound over a `(resolution+1)²` grid of
/// `(1/t or 1/s, position in the shift interval)`. Doubling the resolution
/// refines the grid, so the result never increases.
pub fn schur_grid_search(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    resolution: usize,
) -> Result<SchurCertificate, SchurError> {
    let pt = schur_point(k, s)?;
    let n = resolution.max(1);
    grid_best(&pt, base, n)
        .map(|(_, _, c)| c)
        .ok_or_else(|| SchurError::InfeasibleFreeParams("no admissible grid point".into()))
}

fn grid_best(pt: &Point, base: PrimeBase, n: usize) -> Option<(f64, f64, SchurCertificate)> {
    let mut best: Option<(f64, f64, SchurCertificate)> = None;
    for i in 0..=n {
        let u = clamp_open(i as f64 / n as f64);
        for j in 0..=n {
            let frac = clamp_open(j as f64 / n as f64);
            if let Some(c) = pt.at(u, frac, base) {
                if best.as_ref().is_none_or(|b| c.bound < b.2.bound) {
                    best = Some((u, frac, c));
                }
            }
        }
    }
    best
}

/// Golden-section minimum of `f` over `[lo, hi]`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// Minimizes the Schur bound over the admissible free parameters: grid
/// search, then alternating golden-section refinement of each coordinate.
/// For `q = r > 1` the grid is seeded with `t = q`, `A = -(α+1)/(q q')`,
/// where the bound equals the sharp norm.
pub fn optimize_schur_bound(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    resolution: usize,
) -> Result<SchurCertificate, SchurError> {
    let pt = schur_point(k, s)?;
    let mut best = grid_best(&pt, base, resolution.max(1));

    if !pt.is_case_one() && pt.q == pt.r {
        let qp = pt.q / (pt.q - 1.0);
        if let Ok(c) = pt.case_one(pt.q, -(pt.alpha + 1.0) / (pt.q * qp), base) {
            if best.as_ref().is_none_or(|b| c.bound < b.2.bound) {
                let u = 1.0 / pt.q;
                let (lo, hi) = pt.a_window(qp);
                let a = -(pt.alpha + 1.0) / (pt.q * qp);
                best = Some((u, (a - lo) / (hi - lo), c));
            }
        }
    }

    let (mut u, mut frac, mut cert) =
        best.ok_or_else(|| SchurError::InfeasibleFreeParams("no admissible grid point".into()))?;
    let objective = |u: f64, frac: f64| pt.at(u, frac, base).map_or(f64::INFINITY, |c| c.bound);
    for _ in 0..4 {
        let nu = golden_section(|x| objective(x, frac), SCHUR_MARGIN, 1.0 - SCHUR_MARGIN, 80);
        if let Some(c) = pt.at(nu, frac, base) {
            if c.bound < cert.bound {
                (u, cert) = (nu, c);
            }
        }
        let nf = golden_section(|x| objective(u, x), SCHUR_MARGIN, 1.0 - SCHUR_MARGIN, 80);
        if let Some(c) = pt.at(u, nf, base) {
            if c.bound < cert.bound {
                (frac, cert) = (nf, c);
            }
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> PrimeBase {
        PrimeBase::new(n).unwrap()
    }

    fn fin(q: impl Into<Scalar>) -> ExtendedExponent {
        ExtendedExponent::finite(q)
    }

    #[test]
    fn closed_form_examples() {
        assert!((closed_form_i(0.0, 2.0, 1.0, p(2)).unwrap() - 1.5).abs() < 1e-15);
        assert!((closed_form_i(0.0, 2.0, 1.0, p(3)).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            closed_form_i(-1.0, 2.0, 1.0, p(2)),
            Err(Diverges { which: DivergenceSide::Origin })
        );
        assert_eq!(
            closed_form_i(1.0, 2.0, 1.0, p(2)),
            Err(Diverges { which: DivergenceSide::Infinity })
        );
    }

    #[test]
    fn closed_form_scaling() {
        let at1 = closed_form_i(0.3, 2.5, 1.0, p(5)).unwrap();
        let at = closed_form_i(0.3, 2.5, 125.0, p(5)).unwrap();
        assert!((at - at1 * 125f64.powf(0.3 + 1.0 - 2.5)).abs() < 1e-15 * at1);
    }

    #[test]
    fn decision_examples() {
        let canonical = KernelParams::new(1, 0, 0);
        let v = check_boundedness(&canonical, &SpaceParams::diagonal(fin(2), 0));
        assert_eq!(v.status, Status::Bounded);
        assert_eq!(v.criterion, Criterion::FiniteDiagonal);

        let v = check_boundedness(&canonical, &SpaceParams::new(fin(2), fin(1), 0, 0));
        assert_eq!(v.status, Status::Unbounded);
        assert_eq!(v.criterion, Criterion::TargetBelowSource);

        let flat = KernelParams::new(0, 0, 0);
        let v = check_boundedness(&flat, &SpaceParams::new(fin(1), ExtendedExponent::Infinite, 0, 0));
        assert_eq!(v.status, Status::Bounded);

        let v = check_boundedness(&canonical, &SpaceParams::new(fin(2), fin(2), 1, 0));
        assert_eq!(v.status, Status::Unbounded);
        assert_eq!(v.tau, Scalar::ratio(-1, 2));

        let v = check_boundedness(&canonical, &SpaceParams::new(fin(Scalar::ratio(1, 2)), fin(2), 0, 0));
        assert_eq!(v.status, Status::OutOfScope);
    }

    #[test]
    fn boundary_cases_detected() {
        let k = KernelParams::new(1, 0, 0);
        let v = check_boundedness(&k, &SpaceParams::diagonal(fin(2), 1));
        assert_eq!(v.status, Status::Unbounded);
        assert_eq!(v.boundary, Some(ExtremalKind::Inner));
        let v = check_boundedness(&k, &SpaceParams::diagonal(fin(2), -1));
        assert_eq!(v.boundary, Some(ExtremalKind::Outer));
        assert_eq!(boundary_case(&k, &SpaceParams::diagonal(fin(2), 0)), None);
    }

    #[test]
    fn float_inputs_use_tolerance() {
        let k = KernelParams::new(Scalar::float(0.1 + 0.2 + 0.7), 0.0, 0.0);
        let v = check_boundedness(&k, &SpaceParams::diagonal(fin(2), 0));
        assert_eq!(v.status, Status::Bounded);
    }

    #[test]
    fn sharp_norm_canonical() {
        let n = sharp_norm(&KernelParams::new(1, 0, 0), &SpaceParams::diagonal(fin(2), 0), p(2)).unwrap();
        assert!((n.value - 2.914213562373095).abs() < 1e-12);
        assert!((n.prefactor * (1.0 + n.below_term + n.above_term) - n.value).abs() < 1e-15);
    }

    #[test]
    fn sup_to_sup_norm_uses_column_integral() {
        let inf = SpaceParams::diagonal(ExtendedExponent::Infinite, 0);
        let k = KernelParams::new(3, 1, 1);
        let n = sharp_norm(&k, &inf, p(2)).unwrap();
        assert!((n.value - 0.5 * (1.0 + 1.0 / 3.0 + 1.0)).abs() < 1e-15);
        match exact_norm_endpoint(&k, &inf, p(2)).unwrap() {
            EndpointNorm::Finite(v) => assert!((v - n.value).abs() < 1e-15),
            EndpointNorm::Infinite => panic!("expected finite"),
        }
        // λ = μ+ν+1 but ν = 0: the column integral diverges at infinity.
        let k = KernelParams::new(2, 1, 0);
        assert_eq!(
            sharp_norm(&k, &inf, p(2)),
            Err(NormError::NotBounded(Status::Unbounded))
        );
        assert_eq!(exact_norm_endpoint(&k, &inf, p(2)).unwrap(), EndpointNorm::Infinite);
    }

    #[test]
    fn sharp_norm_unavailable_off_diagonal() {
        let k = KernelParams::new(Scalar::ratio(3, 2), 0, Scalar::ratio(1, 2));
        let s = SpaceParams::new(fin(1), fin(2), Scalar::ratio(-1, 2), 0);
        assert_eq!(check_boundedness(&k, &s).status, Status::Bounded);
        assert!(matches!(sharp_norm(&k, &s, p(2)), Err(NormError::NotAvailable(_))));
    }

    #[test]
    fn endpoint_row_route() {
        let k = KernelParams::new(1, 0, 0);
        let s = SpaceParams::diagonal(fin(1), Scalar::ratio(-1, 2));
        let expected = 0.5 * (1.0 + 2.0 / (2f64.sqrt() - 1.0));
        match exact_norm_endpoint(&k, &s, p(2)).unwrap() {
            EndpointNorm::Finite(v) => assert!((v - expected).abs() < 1e-12),
            EndpointNorm::Infinite => panic!("expected finite"),
        }
        let s = SpaceParams::new(fin(2), fin(1), 0, 0);
        assert_eq!(exact_norm_endpoint(&k, &s, p(2)).unwrap(), EndpointNorm::Infinite);
        let s = SpaceParams::diagonal(fin(2), 0);
        assert_eq!(exact_norm_endpoint(&k, &s, p(2)), Err(NormError::WrongRegime));
    }

    #[test]
    fn schur_at_analytic_point_is_sharp() {
        let k = KernelParams::new(1, 0, 0);
        let s = SpaceParams::diagonal(fin(2), 0);
        let cert = schur_upper_bound(&k, &s, p(2), SchurFree::CaseI { t: 2.0, a: -0.25 }).unwrap();
        let SchurConstants::CaseI { c1, c2, .. } = cert.constants else {
            panic!("case I expected")
        };
        let sharp = sharp_norm(&k, &s, p(2)).unwrap().value;
        assert!((c1 - sharp).abs() < 1e-12 && (c2 - sharp).abs() < 1e-12);
        assert!((cert.bound - sharp).abs() < 1e-12);
    }

    #[test]
    fn schur_rejects_infeasible_shift() {
        let k = KernelParams::new(1, 0, 0);
        let s = SpaceParams::diagonal(fin(2), 0);
        assert!(matches!(
            schur_upper_bound(&k, &s, p(2), SchurFree::CaseI { t: 2.0, a: 1.0 }),
            Err(SchurError::InfeasibleFreeParams(_))
        ));
        assert!(matches!(
            schur_upper_bound(&k, &s, p(2), SchurFree::CaseII { s: 2.0, d: 0.0 }),
            Err(SchurError::InfeasibleFreeParams(_))
        ));
    }

    #[test]
    fn schur_case_two_is_finite() {
        let k = KernelParams::new(Scalar::ratio(3, 2), 0, Scalar::ratio(1, 2));
        let s = SpaceParams::new(fin(1), fin(2), Scalar::ratio(-1, 2), 0);
        let cert = optimize_schur_bound(&k, &s, p(2), 32).unwrap();
        assert!(cert.bound.is_finite() && cert.bound >= 1.0);
        let SchurConstants::CaseII { c3, .. } = cert.constants else {
            panic!("case II expected")
        };
        assert_eq!(c3, 1.0);
    }

    #[test]
    fn optimizer_reaches_sharp_norm() {
        for (q, alpha) in [(2, 0), (3, 1)] {
            let k = KernelParams::new(1, 0, 0);
            let s = SpaceParams::diagonal(fin(q), alpha);
            if check_boundedness(&k, &s).status != Status::Bounded {
                continue;
            }
            let sharp = sharp_norm(&k, &s, p(3)).unwrap().value;
            let cert = optimize_schur_bound(&k, &s, p(3), 16).unwrap();
            assert!((cert.bound - sharp).abs() <= 1e-9 * sharp);
        }
    }

    #[test]
    fn grid_search_is_monotone_under_refinement() {
        let k = KernelParams::new(Scalar::ratio(5, 2), Scalar::ratio(1, 2), Scalar::ratio(1, 2));
        let s = SpaceParams::new(fin(2), fin(3), 0, 2);
        assert_eq!(check_boundedness(&k, &s).status, Status::Bounded);
        let mut last = f64::INFINITY;
        for n in [4, 8, 16, 32, 64] {
            let b = schur_grid_search(&k, &s, p(2), n).unwrap().bound;
            assert!(b <= last);
            last = b;
        }
    }

    #[test]
    fn verdict_json_shape() {
        let v = check_boundedness(&KernelParams::new(1, 0, 0), &SpaceParams::diagonal(fin(2), 0));
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "bounded");
        assert_eq!(json["criterion"], "finite-diagonal");
        assert_eq!(json["tau"], "0");
        let back: Verdict = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);
    }
}
