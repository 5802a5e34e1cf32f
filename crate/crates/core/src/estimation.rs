//! Numerical evidence: lower bounds on `‖H‖` from truncated matrices and from
//! near-extremal power functions, and growth witnesses for unbounded points.
//!
//! Everything here is a *lower* bound. Upper bounds come only from
//! [`crate::analysis`] (closed forms and Schur certificates).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    check_boundedness, optimize_schur_bound, sharp_norm, Criterion, SchurCertificate, SharpNorm,
    Status, Verdict,
};
use crate::operator::{apply_coords, build_matrix_rect, decay_rates, KernelParams, OperatorError, SpaceParams};
use crate::padic::PrimeBase;
use crate::radial::{extremal_coords, lq_norm, ExtendedExponent, ExtremalKind, ExtremalSpec, RadialError, ValuationWindow};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum EstimationError {
    #[error("power iteration stopped after {iterations} steps; last lower bound {lower}")]
    NoConvergence { lower: f64, iterations: usize },
    #[error("window too shallow for epsilon {epsilon}: {missing:.3e} of the norm lies outside")]
    WindowTooShallow { epsilon: f64, missing: f64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Radial(#[from] RadialError),
}

/// Outcome of [`matrix_norm_lower`].
#[derive(Clone, Debug, PartialEq)]
pub struct PowerIteration {
    pub value: f64,
    pub iterations: usize,
    /// Maximizing vector found, normalized in `l^q`.
    pub vector: Vec<f64>,
    /// `‖M x_k‖_r` after each step; non-decreasing.
    pub history: Vec<f64>,
}

/// The `y` with `‖y‖_{r'} = 1` maximizing `y·v` for `v ≥ 0`.
fn dual_map(v: &[f64], r: f64) -> Vec<f64> {
    let n = v.len();
    if r.is_infinite() {
        let (i, _) = v
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, &x)| if x > b.1 { (i, x) } else { b });
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        return e;
    }
    if r == 1.0 {
        return vec![1.0; n];
    }
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return vec![0.0; n];
    }
    let y: Vec<f64> = v.iter().map(|x| (x.abs() / scale).powf(r - 1.0)).collect();
    let norm = lq_norm(&y, r / (r - 1.0));
    y.into_iter().map(|x| x / norm).collect()
}

fn conjugate(q: f64) -> f64 {
    if q == 1.0 {
        f64::INFINITY
    } else if q.is_infinite() {
        1.0
    } else {
        q / (q - 1.0)
    }
}

fn image_norm(m: &DMatrix<f64>, x: &[f64], r: f64) -> f64 {
    let v = m * DVector::from_column_slice(x);
    lq_norm(v.as_slice(), r)
}

/// Lower bound on `‖M‖_{l^q → l^r}` for entrywise non-negative `M`, by
/// alternating maximization of `y·Mx` (nonlinear power iteration).
/// Starts from the all-ones vector.
pub fn matrix_norm_lower(
    m: &DMatrix<f64>,
    q: f64,
    r: f64,
    tol: f64,
    max_iter: usize,
) -> Result<PowerIteration, EstimationError> {
    matrix_norm_lower_from(m, q, r, tol, max_iter, None)
}

/// As [`matrix_norm_lower`], optionally warm-started from `start`.
/// The result is never below `‖M start‖_r / ‖start‖_q`.
pub fn matrix_norm_lower_from(
    m: &DMatrix<f64>,
    q: f64,
    r: f64,
    tol: f64,
    max_iter: usize,
    start: Option<&[f64]>,
) -> Result<PowerIteration, EstimationError> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(PowerIteration {
            value: 0.0,
            iterations: 0,
            vector: vec![0.0; cols],
            history: vec![0.0],
        });
    }
    let qp = conjugate(q);

    // Exact one-shot answers: extreme points of the l^1 ball are basis
    // vectors, and an l^∞ target is a max over rows.
    if q == 1.0 {
        let (j, value) = (0..cols)
            .map(|j| (j, lq_norm(m.column(j).as_slice(), r)))
            .fold((0, 0.0), |b, c| if c.1 > b.1 { c } else { b });
        let mut e = vec![0.0; cols];
        e[j] = 1.0;
        return Ok(PowerIteration {
            value,
            iterations: 1,
            vector: e,
            history: vec![value],
        });
    }
    if r.is_infinite() {
        let (i, value) = (0..rows)
            .map(|i| {
                let row: Vec<f64> = m.row(i).iter().copied().collect();
                (i, lq_norm(&row, qp))
            })
            .fold((0, 0.0), |b, c| if c.1 > b.1 { c } else { b });
        let row: Vec<f64> = m.row(i).iter().copied().collect();
        let x = dual_map(&row, qp);
        return Ok(PowerIteration {
            value,
            iterations: 1,
            vector: x,
            history: vec![value],
        });
    }

    let mut x: Vec<f64> = match start {
        Some(s) if s.len() == cols && s.iter().any(|&v| v != 0.0) => {
            s.iter().map(|v| v.abs()).collect()
        }
        _ => vec![1.0; cols],
    };
    let n0 = lq_norm(&x, q);
    x.iter_mut().for_each(|v| *v /= n0);
    let mt = m.transpose();
    let mut value = image_norm(m, &x, r);
    let mut history = vec![value];
    if value == 0.0 {
        return Ok(PowerIteration {
            value,
            iterations: 0,
            vector: x,
            history,
        });
    }
    for it in 1..=max_iter {
        let v = m * DVector::from_column_slice(&x);
        let y = dual_map(v.as_slice(), r);
        let z = &mt * DVector::from_column_slice(&y);
        let next = dual_map(z.as_slice(), qp);
        let next_value = image_norm(m, &next, r);
        if !(next_value > value) {
            // fixed point reached (up to rounding)
            return Ok(PowerIteration {
                value,
                iterations: it,
                vector: x,
                history,
            });
        }
        let gain = (next_value - value) / next_value;
        value = next_value;
        x = next;
        history.push(value);
        if gain < tol {
            return Ok(PowerIteration {
                value,
                iterations: it,
                vector: x,
                history,
            });
        }
    }
    Err(EstimationError::NoConvergence {
        lower: value,
        iterations: max_iter,
    })
}

/// Extra output rows on each side of an input window so that the omitted
/// part of every column is below `e^{-37}` relative (`below`, `above` are the
/// off-diagonal decay exponents; non-positive rates get `cap` rows).
pub fn output_padding(base: PrimeBase, below: f64, above: f64, cap: u32) -> (u32, u32) {
    let rows = |rate: f64| {
        if rate > 0.0 {
            ((37.0 / (rate * base.ln())).ceil() as u32).min(cap)
        } else {
            cap
        }
    };
    // rows under the window see entries above the diagonal, and vice versa
    (rows(above), rows(below))
}

/// Largest output padding used when estimating on a window.
pub const MAX_PADDING: u32 = 2048;

/// Matrix lower bound with its truncation metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixLower {
    pub value: f64,
    pub in_window: ValuationWindow,
    pub out_window: ValuationWindow,
    pub iterations: usize,
    pub tolerance: f64,
    pub converged: bool,
}

fn padded_out_window(k: &KernelParams, s: &SpaceParams, base: PrimeBase, window: ValuationWindow) -> ValuationWindow {
    let (below, above) = decay_rates(k, s);
    let cap = (window.len() as u32).clamp(1, MAX_PADDING);
    let (lo, hi) = output_padding(base, below.value(), above.value(), cap);
    window.expand(lo, hi)
}

fn matrix_lower_on(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    window: ValuationWindow,
    tol: f64,
    max_iter: usize,
    start: Option<&[f64]>,
) -> (MatrixLower, Vec<f64>) {
    let out = padded_out_window(k, s, base, window);
    let m = build_matrix_rect(k, s, base, out, window);
    let (value, iterations, vector, converged) =
        match matrix_norm_lower_from(&m, s.q.value(), s.r.value(), tol, max_iter, start) {
            Ok(p) => (p.value, p.iterations, p.vector, true),
            Err(EstimationError::NoConvergence { lower, iterations }) => {
                (lower, iterations, vec![], false)
            }
            Err(_) => unreachable!("matrix iteration only reports non-convergence"),
        };
    (
        MatrixLower {
            value,
            in_window: window,
            out_window: out,
            iterations,
            tolerance: tol,
            converged,
        },
        vector,
    )
}

/// Matrix lower bounds over nested windows (each must contain the previous),
/// warm-starting each run from the previous maximizer so the sequence is
/// non-decreasing.
pub fn matrix_lower_over_windows(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    windows: &[ValuationWindow],
    tol: f64,
    max_iter: usize,
) -> Vec<MatrixLower> {
    let mut out = Vec::with_capacity(windows.len());
    let mut prev: Option<(ValuationWindow, Vec<f64>)> = None;
    for &w in windows {
        let start = prev.as_ref().and_then(|(pw, v)| {
            if v.is_empty() || !w.contains_window(pw) {
                return None;
            }
            let mut x = vec![0.0; w.len()];
            let off = (pw.min() - w.min()) as usize;
            x[off..off + v.len()].copy_from_slice(v);
            Some(x)
        });
        let (report, vector) = matrix_lower_on(k, s, base, w, tol, max_iter, start.as_deref());
        prev = Some((w, vector));
        out.push(report);
    }
    out
}

/// `ε = 2^{-k}`, `k = 1..=12`.
pub fn default_epsilons() -> Vec<f64> {
    (1..=12).map(|k| 2f64.powi(-k)).collect()
}

/// `max(40, ceil(8/ε_min))` valuations on the support side.
pub fn default_depth(epsilons: &[f64]) -> u32 {
    let eps_min = epsilons.iter().copied().fold(f64::INFINITY, f64::min);
    (8.0 / eps_min).ceil().max(40.0) as u32
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalPoint {
    pub epsilon: f64,
    pub ratio: f64,
    /// Number of spheres of support kept.
    pub depth: u32,
    /// Fraction of `‖f_ε‖^q` cut off by the truncation.
    pub missing_fraction: f64,
}

/// `‖H f‖_{r,β} / ‖f‖_{q,α}` for the truncated normalized power family of
/// the given kind, `depth + 1` spheres deep. Truncation keeps it a valid
/// lower bound on the norm.
pub fn extremal_ratio(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    kind: ExtremalKind,
    epsilon: f64,
    depth: u32,
) -> Result<ExtremalPoint, EstimationError> {
    let (q, r) = match (&s.q, &s.r) {
        (ExtendedExponent::Finite(q), ExtendedExponent::Finite(r)) => (q.value(), r.value()),
        _ => {
            return Err(EstimationError::NotApplicable(
                "extremal families need finite q and r".into(),
            ))
        }
    };
    let d = depth as i64;
    let in_window = match kind {
        ExtremalKind::Inner => ValuationWindow::new(-d, 0)?,
        ExtremalKind::Outer => ValuationWindow::new(0, d)?,
    };
    let spec = ExtremalSpec {
        kind,
        epsilon,
        q,
        alpha: s.alpha.value(),
        normalized: true,
    };
    let u = extremal_coords(spec, base, in_window)?;
    let (below, above) = decay_rates(k, s);
    let (lo, hi) = output_padding(base, below.value(), above.value(), depth.max(1));
    let out = in_window.expand(lo, hi);
    let image = apply_coords(k, s, base, in_window, &u, out)?;
    Ok(ExtremalPoint {
        epsilon,
        ratio: lq_norm(&image, r) / lq_norm(&u, q),
        depth,
        missing_fraction: spec.missing_fraction(base, in_window),
    })
}

/// Ratios of the normalized family supported on `|x| ≥ 1` along a schedule of
/// ε, for bounded points with `q = r < ∞`. With `depth = None` the depth is
/// [`default_depth`].
pub fn extremal_ratio_sweep(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    epsilons: &[f64],
    depth: Option<u32>,
) -> Result<Vec<ExtremalPoint>, EstimationError> {
    let v = check_boundedness(k, s);
    if v.status != Status::Bounded || v.criterion != Criterion::FiniteDiagonal {
        return Err(EstimationError::NotApplicable(format!(
            "extremal sweep needs a bounded point with q = r < inf (got {}, {})",
            v.status,
            v.criterion.tag()
        )));
    }
    let depth = depth.unwrap_or_else(|| default_depth(epsilons));
    epsilons
        .iter()
        .map(|&eps| {
            let point = extremal_ratio(k, s, base, ExtremalKind::Outer, eps, depth)?;
            if point.missing_fraction > 0.1 {
                return Err(EstimationError::WindowTooShallow {
                    epsilon: eps,
                    missing: point.missing_fraction,
                });
            }
            Ok(point)
        })
        .collect()
}

/// `(1-1/p)^{1/r-1/q} (p^ε-1)^{1/q} / (p^{rε/q}-1)^{1/r}`: the norm ratio of
/// the power family `|x|^{-(α+1+ε)/q}` on `|x| ≥ 1` pushed into `L^r`, which
/// blows up as `ε → 0` when `r < q`.
pub fn growth_factor(base: PrimeBase, q: f64, r: f64, epsilon: f64) -> f64 {
    let c = base.unit_sphere_measure();
    let ln_p = base.ln();
    c.powf(1.0 / r - 1.0 / q) * (epsilon * ln_p).exp_m1().powf(1.0 / q)
        / (r * epsilon / q * ln_p).exp_m1().powf(1.0 / r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum WitnessMethod {
    /// Matrix lower bounds over symmetric windows `±h`.
    Matrix { half_widths: Vec<u32> },
    /// Normalized extremal family ratios as ε decreases.
    Extremal { family: ExtremalKind, epsilons: Vec<f64> },
    /// The closed-form growth factor for `r < q`.
    GrowthFactor { epsilons: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStatus {
    Confirmed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub method: WitnessMethod,
    /// `(window half-width or ε, lower bound)` pairs in schedule order.
    pub sequence: Vec<(f64, f64)>,
    pub growth: f64,
    pub threshold: f64,
    pub status: WitnessStatus,
}

/// Default growth factor required to call a witness confirmed.
pub const GROWTH_THRESHOLD: f64 = 4.0;

/// Tracks how a lower bound grows along `method`'s schedule.
/// Growth `last / first ≥ threshold` is reported as confirmed.
pub fn divergence_witness(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    method: WitnessMethod,
    threshold: f64,
) -> Result<DivergenceReport, EstimationError> {
    let sequence: Vec<(f64, f64)> = match &method {
        WitnessMethod::Matrix { half_widths } => {
            let windows: Vec<_> = half_widths.iter().map(|&h| ValuationWindow::symmetric(h)).collect();
            matrix_lower_over_windows(k, s, base, &windows, 1e-10, 20_000)
                .into_iter()
                .zip(half_widths)
                .map(|(m, &h)| (h as f64, m.value))
                .collect()
        }
        WitnessMethod::Extremal { family, epsilons } => {
            let depth = default_depth(epsilons);
            epsilons
                .iter()
                .map(|&eps| extremal_ratio(k, s, base, *family, eps, depth).map(|p| (eps, p.ratio)))
                .collect::<Result<_, _>>()?
        }
        WitnessMethod::GrowthFactor { epsilons } => {
            let (q, r) = (s.q.value(), s.r.value());
            if !(q.is_finite() && r < q) {
                return Err(EstimationError::NotApplicable(
                    "growth factor needs 1 <= r < q < inf".into(),
                ));
            }
            epsilons.iter().map(|&e| (e, growth_factor(base, q, r, e))).collect()
        }
    };
    let first = sequence.first().map_or(f64::NAN, |x| x.1);
    let last = sequence.last().map_or(f64::NAN, |x| x.1);
    let growth = if first > 0.0 { last / first } else if last > 0.0 { f64::INFINITY } else { 1.0 };
    let status = if growth >= threshold {
        WitnessStatus::Confirmed
    } else {
        WitnessStatus::Inconclusive
    };
    Ok(DivergenceReport {
        method,
        sequence,
        growth,
        threshold,
        status,
    })
}

/// The witness [`estimate_norm`] runs for an unbounded point.
pub fn default_witness(s: &SpaceParams, verdict: &Verdict) -> WitnessMethod {
    if let Some(family) = verdict.boundary {
        return WitnessMethod::Extremal {
            family,
            epsilons: (1..=8).map(|k| 2f64.powi(-k)).collect(),
        };
    }
    let (q, r) = (s.q.value(), s.r.value());
    if q.is_finite() && r < q {
        WitnessMethod::GrowthFactor {
            epsilons: (4..=12).map(|k| 2f64.powi(-k)).collect(),
        }
    } else {
        WitnessMethod::Matrix {
            half_widths: vec![5, 10, 20, 40],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub window: ValuationWindow,
    pub tol: f64,
    pub max_iter: usize,
    pub epsilons: Vec<f64>,
    pub schur_resolution: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            window: ValuationWindow::symmetric(40),
            tol: 1e-12,
            max_iter: 200_000,
            epsilons: default_epsilons(),
            schur_resolution: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub verdict: Verdict,
    pub closed_form: Option<SharpNorm>,
    pub schur: Option<SchurCertificate>,
    pub matrix_lower: Option<MatrixLower>,
    pub extremal: Vec<ExtremalPoint>,
    pub divergence: Option<DivergenceReport>,
}

impl NormReport {
    pub fn max_extremal_ratio(&self) -> Option<f64> {
        self.extremal.iter().map(|e| e.ratio).reduce(f64::max)
    }
}

/// Everything known about `‖H‖` at one parameter point.
pub fn estimate_norm(
    k: &KernelParams,
    s: &SpaceParams,
    base: PrimeBase,
    opts: &EstimateOptions,
) -> Result<NormReport, EstimationError> {
    let verdict = check_boundedness(k, s);
    let mut report = NormReport {
        verdict: verdict.clone(),
        closed_form: None,
        schur: None,
        matrix_lower: None,
        extremal: vec![],
        divergence: None,
    };
    match verdict.status {
        Status::OutOfScope => {}
        Status::Unbounded => {
            let method = default_witness(s, &verdict);
            report.divergence = Some(divergence_witness(k, s, base, method, GROWTH_THRESHOLD)?);
        }
        Status::Bounded => {
            report.closed_form = sharp_norm(k, s, base).ok();
            report.schur = optimize_schur_bound(k, s, base, opts.schur_resolution).ok();
            let (m, _) = matrix_lower_on(k, s, base, opts.window, opts.tol, opts.max_iter, None);
            report.matrix_lower = Some(m);
            if verdict.criterion == Criterion::FiniteDiagonal && !opts.epsilons.is_empty() {
                report.extremal = extremal_ratio_sweep(k, s, base, &opts.epsilons, None)?;
            }
        }
    }
    Ok(report)
}
