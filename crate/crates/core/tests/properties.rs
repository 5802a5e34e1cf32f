use nalgebra::DVector;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use padic_hlp::analysis::{check_boundedness, closed_form_i, sharp_norm, Criterion, Status};
use padic_hlp::estimation::{matrix_lower_over_windows, matrix_norm_lower};
use padic_hlp::operator::{
    adjoint_params, apply_hlp, build_matrix, build_matrix_rect, decay_rates, toeplitz_row_tail, KernelParams,
    MatrixExponents, SpaceParams,
};
use padic_hlp::padic::{padic_norm_exact, valuation, Valuation};
use padic_hlp::radial::{
    from_sequence_coords, lq_norm, to_sequence_coords, weighted_inner_product, weighted_norm, ExtendedExponent,
    RadialFunction,
};
use padic_hlp::{PrimeBase, Scalar, ValuationWindow};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = PrimeBase> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]).prop_map(|p| PrimeBase::new(p).unwrap())
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-10_000i64..10_000, 1i64..10_000, 0u32..12)
        .prop_map(|(n, d, e)| BigRational::new(BigInt::from(n) * BigInt::from(6).pow(e), BigInt::from(d)))
}

/// Multiples of 1/12 in `[lo, hi]`.
fn twelfths(lo: i64, hi: i64) -> impl Strategy<Value = Scalar> {
    (12 * lo..=12 * hi).prop_map(|n| Scalar::ratio(n, 12))
}

fn exponent_strategy() -> impl Strategy<Value = Scalar> {
    prop::sample::select(vec![(1, 1), (3, 2), (2, 1), (5, 2), (3, 1), (4, 1)]).prop_map(|(n, d)| Scalar::ratio(n, d))
}

/// A balanced rational point with `q = r`, solving τ = 0 for β.
fn diagonal_point() -> impl Strategy<Value = (KernelParams, SpaceParams)> {
    (exponent_strategy(), twelfths(1, 3), twelfths(-1, 1), twelfths(-1, 1), twelfths(-1, 1)).prop_map(
        |(q, lambda, mu, nu, alpha)| {
            let one = Scalar::one();
            // β + 1 = q(λ - μ - ν - 1 + (α+1)/q)
            let beta = &(&q * &(&(&(&(&lambda - &mu) - &nu) - &one) + &(&(&alpha + &one) / &q))) - &one;
            let e = ExtendedExponent::Finite(q);
            (KernelParams::new(lambda, mu, nu), SpaceParams::new(e.clone(), e, alpha, beta))
        },
    )
}

fn radial(base: PrimeBase, window: ValuationWindow, values: Vec<f64>) -> RadialFunction {
    RadialFunction::new(base, window, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_multiplicative_and_ultrametric(x in rational(), y in rational(), p in prime()) {
        let (nx, ny) = (padic_norm_exact(&x, p), padic_norm_exact(&y, p));
        prop_assert_eq!(padic_norm_exact(&(&x * &y), p), &nx * &ny);
        prop_assert!(padic_norm_exact(&(&x + &y), p) <= nx.clone().max(ny.clone()));
        if nx != ny {
            prop_assert_eq!(padic_norm_exact(&(&x + &y), p), nx.max(ny));
        }
    }

    #[test]
    fn valuation_is_additive(x in rational(), y in rational(), p in prime()) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let v = |z: &BigRational| match valuation(z, p) {
            Valuation::Finite(g) => g,
            Valuation::Infinite => unreachable!(),
        };
        prop_assert_eq!(v(&(&x * &y)), v(&x) + v(&y));
        prop_assert_eq!(v(&(&x / &y)), v(&x) - v(&y));
    }

    #[test]
    fn sequence_coords_are_isometric(
        p in prime(),
        lo in -15i64..0,
        values in prop::collection::vec(-5.0f64..5.0, 1..30),
        q in exponent_strategy(),
        theta in -2.0f64..2.0,
    ) {
        let window = ValuationWindow::new(lo, lo + values.len() as i64 - 1).unwrap();
        let f = radial(p, window, values.clone());
        let qv = q.value();
        let e = ExtendedExponent::Finite(q);
        // direct: ((1-1/p) Σ p^{γ(θ+1)} |φ_γ|^q)^{1/q}
        let direct = (p.unit_sphere_measure()
            * window.iter().zip(&values).map(|(g, v)| p.pow(g as f64 * (theta + 1.0)) * v.abs().powf(qv)).sum::<f64>())
            .powf(1.0 / qv);
        let coords = to_sequence_coords(&f, &e, theta).unwrap();
        let via_coords = lq_norm(&coords, qv);
        prop_assert!((via_coords - direct).abs() <= 1e-10 * direct.max(1e-300));
        prop_assert!((weighted_norm(&f, &e, theta) - direct).abs() <= 1e-10 * direct.max(1e-300));
        let back = from_sequence_coords(p, window, &coords, qv, theta).unwrap();
        for (a, b) in back.values().iter().zip(&values) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn matrix_acts_like_the_operator(
        p in prime(),
        (k, s) in diagonal_point(),
        values in prop::collection::vec(0.0f64..3.0, 3..12),
    ) {
        let window = ValuationWindow::new(-4, values.len() as i64 - 5).unwrap();
        let out = ValuationWindow::new(-6, 6).unwrap();
        let f = radial(p, window, values);
        let (q, r) = (s.q.value(), s.r.value());
        let hf = apply_hlp(&k, &f, out).unwrap();
        let direct = weighted_norm(&hf, &s.r, s.beta.value());
        let u = DVector::from_vec(to_sequence_coords(&f, &s.q, s.alpha.value()).unwrap());
        let mu = build_matrix_rect(&k, &s, p, out, window) * u;
        let via_matrix = lq_norm(mu.as_slice(), r);
        prop_assert!((direct - via_matrix).abs() <= 1e-9 * direct.max(1e-300), "{} vs {} (q={q})", direct, via_matrix);
    }

    #[test]
    fn closed_form_matches_sphere_sums(
        p in prime(),
        a in -0.95f64..3.0,
        gap in 0.05f64..3.0,
        g in -5i64..=5,
    ) {
        let lambda = a + 1.0 + gap;
        let c = p.unit_sphere_measure();
        let term = |gamma: i64| c * p.pow(gamma as f64 * (1.0 + a) - lambda * gamma.max(g) as f64);
        let mut direct = term(g);
        for dir in [-1i64, 1] {
            let mut gamma = g + dir;
            loop {
                let t = term(gamma);
                direct += t;
                if t < 1e-20 * direct {
                    break;
                }
                gamma += dir;
            }
        }
        let closed = closed_form_i(a, lambda, p.pow(g as f64), p).unwrap();
        prop_assert!(((closed - direct) / direct).abs() <= 1e-10);
    }

    #[test]
    fn adjoint_pairs_with_weighted_product(
        p in prime(),
        lambda in 0.5f64..3.0,
        mu in -0.5f64..1.0,
        nu in -0.5f64..1.0,
        alpha in -0.5f64..0.5,
        fv in prop::collection::vec(0.0f64..2.0, 9),
        gv in prop::collection::vec(0.0f64..2.0, 9),
    ) {
        let window = ValuationWindow::symmetric(4);
        let k = KernelParams::new(lambda, mu, nu);
        let adj = adjoint_params(&k, &Scalar::float(alpha));
        let (f, g) = (radial(p, window, fv), radial(p, window, gv));
        let lhs = weighted_inner_product(&apply_hlp(&k, &f, window).unwrap(), &g, 0.0).unwrap();
        let rhs = weighted_inner_product(&f, &apply_hlp(&adj, &g, window).unwrap(), alpha).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn balanced_matrix_is_exactly_toeplitz((k, s) in diagonal_point(), m in -20i64..20, g in -20i64..20, shift in -20i64..20) {
        let e = MatrixExponents::new(&k, &s);
        prop_assert_eq!(e.log_p_coeff(m, g), e.log_p_coeff(m + shift, g + shift));
        prop_assert!(e.log_p_coeff(m, g).is_exact());
    }

    #[test]
    fn rows_sum_to_the_sharp_constant(p in prime(), (k, s) in diagonal_point()) {
        prop_assume!(check_boundedness(&k, &s).status == Status::Bounded);
        let constant = sharp_norm(&k, &s, p).unwrap().value;
        let window = ValuationWindow::symmetric(12);
        let (below, above) = decay_rates(&k, &s);
        let m = build_matrix(&k, &s, p, window);
        for (i, gamma) in window.iter().enumerate() {
            let sum: f64 = m.row(i).iter().sum();
            let tail = toeplitz_row_tail(p, below.value(), above.value(), window, gamma);
            prop_assert!((sum + tail - constant).abs() <= 1e-10 * constant);
        }
    }

    #[test]
    fn lower_bounds_grow_with_the_window_and_stay_below_the_norm(p in prime(), (k, s) in diagonal_point()) {
        prop_assume!(check_boundedness(&k, &s).status == Status::Bounded);
        let constant = sharp_norm(&k, &s, p).unwrap().value;
        let windows: Vec<_> = [2, 4, 8].into_iter().map(ValuationWindow::symmetric).collect();
        let bounds = matrix_lower_over_windows(&k, &s, p, &windows, 1e-12, 20_000);
        for w in bounds.windows(2) {
            prop_assert!(w[1].value >= w[0].value * (1.0 - 1e-12));
        }
        prop_assert!(bounds.last().unwrap().value <= constant * (1.0 + 1e-9));
    }

    #[test]
    fn power_iteration_history_never_decreases(p in prime(), (k, s) in diagonal_point(), r_bump in 0usize..3) {
        let window = ValuationWindow::symmetric(5);
        let m = build_matrix(&k, &s, p, window);
        let r = s.q.value() * [1.0, 1.5, 3.0][r_bump];
        if let Ok(run) = matrix_norm_lower(&m, s.q.value(), r, 1e-12, 10_000) {
            for w in run.history.windows(2) {
                prop_assert!(w[1] >= w[0] * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn target_linf_matches_the_adjoint_from_l1(
        lambda in twelfths(0, 3),
        mu in twelfths(-1, 2),
        alpha in twelfths(-1, 2),
        q in exponent_strategy(),
        nudge in -2i64..=2,
    ) {
        prop_assume!(q.value() > 1.0);
        let one = Scalar::one();
        // balanced ν = λ - μ - 1 + (α+1)/q, optionally nudged off balance
        let nu = &(&(&(&lambda - &mu) - &one) + &(&(&alpha + &one) / &q)) + &Scalar::ratio(nudge, 12);
        let k = KernelParams::new(lambda, mu, nu);
        let s = SpaceParams::new(ExtendedExponent::Finite(q.clone()), ExtendedExponent::Infinite, alpha.clone(), Scalar::zero());
        let dual = SpaceParams::new(
            ExtendedExponent::Finite(one),
            ExtendedExponent::Finite(q.clone()).conjugate(),
            Scalar::zero(),
            alpha.clone(),
        );
        let direct = check_boundedness(&k, &s);
        let via_adjoint = check_boundedness(&adjoint_params(&k, &alpha), &dual);
        prop_assert_eq!(direct.criterion, Criterion::LqToLinf);
        prop_assert_eq!(direct.status, via_adjoint.status);
        prop_assert_eq!(direct.tau, via_adjoint.tau);
    }

    #[test]
    fn l1_to_linf_endpoints_are_closed(lambda in twelfths(0, 3), mu in twelfths(-2, 2), inside in 0i64..=12) {
        // α ranges over [μ-λ, μ]; balance fixes ν = λ - μ + α
        let s_at = |alpha: Scalar| {
            let nu = &(&lambda - &mu) + &alpha;
            let k = KernelParams::new(lambda.clone(), mu.clone(), nu);
            let s = SpaceParams::new(ExtendedExponent::Finite(Scalar::one()), ExtendedExponent::Infinite, alpha, Scalar::zero());
            check_boundedness(&k, &s)
        };
        let low = &mu - &lambda;
        let alpha = &low + &(&lambda * &Scalar::ratio(inside, 12));
        let v = s_at(alpha);
        prop_assert_eq!(v.status, Status::Bounded);
        prop_assert_eq!(v.criterion, Criterion::L1ToLinf);
        let eps = Scalar::ratio(1, 24);
        prop_assert_eq!(s_at(&low - &eps).status, Status::Unbounded);
        prop_assert_eq!(s_at(&mu + &eps).status, Status::Unbounded);
    }
}
