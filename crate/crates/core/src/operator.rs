//! The HLP kernel `k(x,y) = |x|^μ |y|^ν / max(|x|,|y|)^λ` and the operator
//! `Hf(y) = ∫ k(x,y) f(x) dx` acting on radial functions.
//!
//! In isometric coordinates (see [`crate::radial::to_sequence_coords`]) the
//! operator becomes a matrix whose `(m, γ)` entry is `e^K p^{m P + γ Q}`, with
//! `(P, Q)` switching at the diagonal. When the balance residual τ vanishes,
//! `P + Q = τ = 0` on both sides and the matrix is Toeplitz.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::padic::PrimeBase;
use crate::radial::{ExtendedExponent, RadialError, RadialFunction, ValuationWindow};
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("value at valuation {gamma} left the representable range")]
    Overflow { gamma: i64 },
    #[error("expected {expected} coordinates for the window, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Radial(#[from] RadialError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub lambda: Scalar,
    pub mu: Scalar,
    pub nu: Scalar,
}

impl KernelParams {
    pub fn new(lambda: impl Into<Scalar>, mu: impl Into<Scalar>, nu: impl Into<Scalar>) -> Self {
        Self {
            lambda: lambda.into(),
            mu: mu.into(),
            nu: nu.into(),
        }
    }
}

/// Source space `L^q(|x|^α dx)` and target space `L^r(|x|^β dx)`.
/// Weights attached to an infinite exponent are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub q: ExtendedExponent,
    pub r: ExtendedExponent,
    pub alpha: Scalar,
    pub beta: Scalar,
}

impl SpaceParams {
    pub fn new(
        q: ExtendedExponent,
        r: ExtendedExponent,
        alpha: impl Into<Scalar>,
        beta: impl Into<Scalar>,
    ) -> Self {
        Self {
            q,
            r,
            alpha: alpha.into(),
            beta: beta.into(),
        }
    }

    /// `q = r = exponent`, `α = β = weight`.
    pub fn diagonal(exponent: ExtendedExponent, weight: impl Into<Scalar>) -> Self {
        let w = weight.into();
        Self::new(exponent.clone(), exponent, w.clone(), w)
    }
}

/// `|x|^μ |y|^ν / max(|x|,|y|)^λ` for positive norms.
pub fn kernel_eval(xnorm: f64, ynorm: f64, k: &KernelParams) -> f64 {
    let (lx, ly) = (xnorm.ln(), ynorm.ln());
    (k.mu.value() * lx + k.nu.value() * ly - k.lambda.value() * lx.max(ly)).exp()
}

/// Exponent of `p` in `k(p^γ, p^m)`.
fn kernel_log_p(gamma: i64, m: i64, k: &KernelParams) -> f64 {
    gamma as f64 * k.mu.value() + m as f64 * k.nu.value()
        - gamma.max(m) as f64 * k.lambda.value()
}

/// `(Hf)(p^m) = (1-1/p) Σ_γ p^γ k(p^γ, p^m) φ_γ` for every `m` in `out_window`.
pub fn apply_hlp(
    k: &KernelParams,
    f: &RadialFunction,
    out_window: ValuationWindow,
) -> Result<RadialFunction, OperatorError> {
    let base = f.base();
    let ln_p = base.ln();
    let ln_c = base.unit_sphere_measure().ln();
    let mut values = Vec::with_capacity(out_window.len());
    for m in out_window.iter() {
        let mut sum = 0.0;
        for (g, phi) in f.iter() {
            if phi == 0.0 {
                continue;
            }
            let term = phi * (ln_c + (g as f64 + kernel_log_p(g, m, k)) * ln_p).exp();
            if !term.is_finite() {
                return Err(OperatorError::Overflow { gamma: m });
            }
            sum += term;
        }
        if !sum.is_finite() {
            return Err(OperatorError::Overflow { gamma: m });
        }
        values.push(sum);
    }
    Ok(RadialFunction::new(base, out_window, values)?)
}

/// Log-space description of the coordinate matrix:
/// `ln M[m,γ] = c_coeff·ln(1-1/p) + (m·P + γ·Q)·ln p`, with `(P,Q)` equal to
/// `(p_lo, q_lo)` on and below the diagonal (`γ ≤ m`) and `(p_hi, q_hi)` above.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixExponents {
    pub c_coeff: Scalar,
    pub p_lo: Scalar,
    pub q_lo: Scalar,
    pub p_hi: Scalar,
    pub q_hi: Scalar,
}

impl MatrixExponents {
    pub fn new(k: &KernelParams, s: &SpaceParams) -> Self {
        let one = Scalar::one();
        let inv_q = s.q.reciprocal();
        let inv_r = s.r.reciprocal();
        let target = &(&s.beta + &one) * &inv_r;
        let source = &(&s.alpha + &one) * &inv_q;
        let p_hi = &target + &k.nu;
        let q_lo = &(&k.mu + &one) - &source;
        Self {
            c_coeff: &(&one + &inv_r) - &inv_q,
            p_lo: &p_hi - &k.lambda,
            q_hi: &q_lo - &k.lambda,
            p_hi,
            q_lo,
        }
    }

    /// Exact coefficient of `ln p` in `ln M[m,γ]`.
    pub fn log_p_coeff(&self, m: i64, gamma: i64) -> Scalar {
        let (pc, qc) = if gamma <= m {
            (&self.p_lo, &self.q_lo)
        } else {
            (&self.p_hi, &self.q_hi)
        };
        &(&Scalar::integer(m) * pc) + &(&Scalar::integer(gamma) * qc)
    }

    fn ln_entry(&self, m: i64, gamma: i64, ln_c: f64, ln_p: f64) -> f64 {
        let (pc, qc) = if gamma <= m {
            (self.p_lo.value(), self.q_lo.value())
        } else {
            (self.p_hi.value(), self.q_hi.value())
        };
        self.c_coeff.value() * ln_c + (m as f64 * pc + gamma as f64 * qc) * ln_p
    }
}

/// Matrix of `H` in isometric coordinates, rows indexed by `out_window`
/// (target `L^r_β`), columns by `in_window` (source `L^q_α`).
pub fn build_matrix_rect(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    out_window: ValuationWindow,
    in_window: ValuationWindow,
) -> DMatrix<f64> {
    let e = MatrixExponents::new(k, s);
    let ln_p = base.ln();
    let ln_c = base.unit_sphere_measure().ln();
    let (m0, g0) = (out_window.min(), in_window.min());
    DMatrix::from_fn(out_window.len(), in_window.len(), |i, j| {
        e.ln_entry(m0 + i as i64, g0 + j as i64, ln_c, ln_p).exp()
    })
}

/// Square matrix of `H` over `window × window`.
pub fn build_matrix(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    window: ValuationWindow,
) -> DMatrix<f64> {
    build_matrix_rect(k, s, base, window, window)
}

/// `M u` without forming `M`: O(n) via the two one-sided geometric
/// recurrences. `u` is indexed by `in_window`, the result by `out_window`.
pub fn apply_coords(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    in_window: ValuationWindow,
    u: &[f64],
    out_window: ValuationWindow,
) -> Result<Vec<f64>, OperatorError> {
    if u.len() != in_window.len() {
        return Err(OperatorError::LengthMismatch {
            expected: in_window.len(),
            got: u.len(),
        });
    }
    let e = MatrixExponents::new(k, s);
    let ln_p = base.ln();
    let ln_k = e.c_coeff.value() * base.unit_sphere_measure().ln();
    let tau = e.p_lo.value() + e.q_lo.value();
    let down = (-e.q_lo.value() * ln_p).exp();
    let up = (e.q_hi.value() * ln_p).exp();
    let at = |g: i64| in_window.index_of(g).map_or(0.0, |i| u[i]);

    let lo_start = out_window.min().min(in_window.min());
    let hi_start = out_window.max().max(in_window.max());

    // lo(m) = Σ_{γ≤m} p^{(γ-m) q_lo} u_γ
    let mut lo = vec![0.0; out_window.len()];
    let mut acc = 0.0;
    for m in lo_start..=out_window.max() {
        acc = acc * down + at(m);
        if let Some(i) = out_window.index_of(m) {
            lo[i] = acc;
        }
    }
    // hi(m) = Σ_{γ>m} p^{(γ-m) q_hi} u_γ
    let mut hi = vec![0.0; out_window.len()];
    let mut acc = 0.0;
    for m in (out_window.min()..=hi_start).rev() {
        if let Some(i) = out_window.index_of(m) {
            hi[i] = acc;
        }
        acc = up * (acc + at(m));
    }

    out_window
        .iter()
        .zip(lo.iter().zip(&hi))
        .map(|(m, (l, h))| {
            let v = (ln_k + m as f64 * tau * ln_p).exp() * (l + h);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(OperatorError::Overflow { gamma: m })
            }
        })
        .collect()
}

/// Kernel parameters of the adjoint with respect to the weight `|x|^α`:
/// `(λ, μ, ν) ↦ (λ, ν, μ - α)`.
pub fn adjoint_params(k: &KernelParams, alpha: &Scalar) -> KernelParams {
    KernelParams {
        lambda: k.lambda.clone(),
        mu: k.nu.clone(),
        nu: &k.mu - alpha,
    }
}

/// Decay exponents of the coordinate matrix away from the diagonal: entries
/// below fall like `p^{-below·(m-γ)}`, entries above like `p^{-above·(γ-m)}`.
/// For `q = r` and balanced parameters these are
/// `A1 = μ+1-(α+1)/q` and `B1 = ν+(β+1)/q`.
pub fn decay_rates(k: &KernelParams, s: &SpaceParams) -> (Scalar, Scalar) {
    let e = MatrixExponents::new(k, s);
    (e.q_lo, -e.q_hi)
}

/// Mass of a Toeplitz row `m` that lies outside `window`:
/// `c[p^{-A(m-γmin+1)}/(1-p^{-A}) + p^{-B(γmax-m+1)}/(1-p^{-B})]`.
pub fn toeplitz_row_tail(base: PrimeBase, below: f64, above: f64, window: ValuationWindow, m: i64) -> f64 {
    let c = base.unit_sphere_measure();
    let side = |rate: f64, steps: i64| {
        let ratio = base.pow(-rate);
        base.pow(-rate * steps as f64) / (1.0 - ratio)
    };
    c * (side(below, m - window.min() + 1) + side(above, window.max() - m + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum SupBound {
    Finite(f64),
    /// The sufficient conditions `λ = a - b`, `a ≥ 0`, `b ≤ 0` fail.
    NotCertified,
}

/// Grid span (in valuation differences) used by [`kernel_sup_bound`].
pub const SUP_GRID_SPAN: i64 = 64;

/// `sup |x|^a |y|^{-b} / max(|x|,|y|)^λ` over p-power norms, when
/// `λ = a - b`, `a ≥ 0`, `b ≤ 0`. The expression then only depends on
/// `d = v(y) - v(x)`, which is scanned over `[-SUP_GRID_SPAN, SUP_GRID_SPAN]`.
pub fn kernel_sup_bound(a: f64, b: f64, lambda: f64, base: PrimeBase) -> SupBound {
    let tol = crate::scalar::FLOAT_TOLERANCE;
    let scale = a.abs().max(b.abs()).max(lambda.abs()).max(1.0);
    if (lambda - (a - b)).abs() > tol * scale || a < -tol || b > tol {
        return SupBound::NotCertified;
    }
    let best = (-SUP_GRID_SPAN..=SUP_GRID_SPAN)
        .map(|d| {
            // |x| = p^d, |y| = 1
            d as f64 * a - lambda * d.max(0) as f64
        })
        .fold(f64::NEG_INFINITY, f64::max);
    SupBound::Finite(base.pow(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::weighted_inner_product;

    fn p(n: u64) -> PrimeBase {
        PrimeBase::new(n).unwrap()
    }

    fn w(a: i64, b: i64) -> ValuationWindow {
        ValuationWindow::new(a, b).unwrap()
    }

    fn fin(q: i64) -> ExtendedExponent {
        ExtendedExponent::finite(q)
    }

    #[test]
    fn kernel_values() {
        let k = KernelParams::new(1, 0, 0);
        assert_eq!(kernel_eval(1.0, 1.0, &k), 1.0);
        assert!((kernel_eval(2.0, 4.0, &k) - 0.25).abs() < 1e-15);
        let k = KernelParams::new(2, 1, 0);
        assert!((kernel_eval(0.5, 0.5, &k) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_sphere_image() {
        let k = KernelParams::new(1, 0, 0);
        let f = RadialFunction::sphere_indicator(p(2), 0);
        let h = apply_hlp(&k, &f, w(-2, 2)).unwrap();
        assert!((h.at(0) - 0.5).abs() < 1e-15);
        assert!((h.at(1) - 0.25).abs() < 1e-15);
        assert!((h.at(-2) - 0.5).abs() < 1e-15);
        let zero = apply_hlp(&k, &RadialFunction::zero(p(2), w(-3, 3)), w(-3, 3)).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn overflow_is_flagged() {
        let k = KernelParams::new(-900, 0, 0);
        let f = RadialFunction::sphere_indicator(p(2), 5);
        assert!(matches!(
            apply_hlp(&k, &f, w(0, 0)),
            Err(OperatorError::Overflow { .. })
        ));
    }

    #[test]
    fn single_entry_matrix() {
        let k = KernelParams::new(1, 0, 0);
        let s = SpaceParams::diagonal(fin(2), 0);
        let m = build_matrix(&k, &s, p(2), w(0, 0));
        assert_eq!(m.shape(), (1, 1));
        assert!((m[(0, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn toeplitz_entries_match_decay_form() {
        let k = KernelParams::new(1, 0, 0);
        let s = SpaceParams::diagonal(fin(2), 0);
        let base = p(2);
        let m = build_matrix(&k, &s, base, w(-2, 2));
        let (a1, b1) = (0.5, 0.5);
        for i in 0..5 {
            for j in 0..5 {
                let d = i as f64 - j as f64;
                let expected = 0.5 * if j <= i { 2f64.powf(-a1 * d) } else { 2f64.powf(b1 * d) };
                assert!((m[(i, j)] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn matrix_coords_match_apply_hlp() {
        let base = p(3);
        let k = KernelParams::new(Scalar::ratio(7, 4), Scalar::ratio(1, 3), Scalar::ratio(-1, 5));
        let s = SpaceParams::new(
            fin(2),
            ExtendedExponent::finite(Scalar::ratio(5, 2)),
            Scalar::ratio(1, 2),
            Scalar::ratio(-1, 3),
        );
        let win = w(-4, 5);
        let out = w(-6, 7);
        let f = RadialFunction::from_fn(base, win, |g| 1.0 + (g as f64 * 0.7).sin().abs());
        let u = crate::radial::to_sequence_coords(&f, &s.q, s.alpha.value()).unwrap();
        let hf = apply_hlp(&k, &f, out).unwrap();
        let expected = crate::radial::to_sequence_coords(&hf, &s.r, s.beta.value()).unwrap();
        let mat = build_matrix_rect(&k, &s, base, out, win);
        let via_matrix = &mat * nalgebra::DVector::from_column_slice(&u);
        let fast = apply_coords(&k, &s, base, win, &u, out).unwrap();
        for i in 0..out.len() {
            let e = expected[i];
            assert!((via_matrix[i] - e).abs() <= 1e-12 * e.abs());
            assert!((fast[i] - e).abs() <= 1e-12 * e.abs());
        }
    }

    #[test]
    fn sup_norm_target_uses_raw_values() {
        let base = p(2);
        let k = KernelParams::new(3, 1, 1);
        let s = SpaceParams::new(ExtendedExponent::Infinite, ExtendedExponent::Infinite, 5, -7);
        let win = w(-3, 3);
        let f = RadialFunction::from_fn(base, win, |g| g as f64 * 0.25 + 1.0);
        let hf = apply_hlp(&k, &f, win).unwrap();
        let fast = apply_coords(&k, &s, base, win, f.values(), win).unwrap();
        for (a, b) in hf.values().iter().zip(&fast) {
            assert!((a - b).abs() <= 1e-13 * a.abs());
        }
    }

    #[test]
    fn adjoint_examples() {
        let k = adjoint_params(&KernelParams::new(1, 0, 0), &Scalar::zero());
        assert_eq!(k, KernelParams::new(1, 0, 0));
        let k = adjoint_params(&KernelParams::new(2, 1, 0), &Scalar::one());
        assert_eq!(k, KernelParams::new(2, 0, 0));
    }

    #[test]
    fn adjoint_duality_on_small_windows() {
        let base = p(5);
        let k = KernelParams::new(2.3, 0.4, 0.6);
        let alpha = Scalar::float(0.35);
        let adj = adjoint_params(&k, &alpha);
        let win = w(-5, 5);
        let f = RadialFunction::from_fn(base, win, |g| 1.0 / (1.0 + (g * g) as f64));
        let g = RadialFunction::from_fn(base, win, |g| (g as f64 * 0.3).cos() + 1.5);
        let lhs = weighted_inner_product(&apply_hlp(&k, &f, win).unwrap(), &g, 0.0).unwrap();
        let rhs =
            weighted_inner_product(&f, &apply_hlp(&adj, &g, win).unwrap(), alpha.value()).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs());
    }

    #[test]
    fn sup_bound_examples() {
        let base = p(2);
        assert_eq!(kernel_sup_bound(1.0, -1.0, 2.0, base), SupBound::Finite(1.0));
        assert_eq!(kernel_sup_bound(0.0, 0.0, 0.0, base), SupBound::Finite(1.0));
        assert_eq!(kernel_sup_bound(1.0, 0.0, 1.0, base), SupBound::Finite(1.0));
        assert_eq!(kernel_sup_bound(-1.0, -2.0, 1.0, base), SupBound::NotCertified);
        assert_eq!(kernel_sup_bound(1.0, 0.0, 2.0, base), SupBound::NotCertified);
    }
}
