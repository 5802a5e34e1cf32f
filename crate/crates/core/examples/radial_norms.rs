//! Radial functions: integrals, weighted norms and the isometric sequence
//! coordinates the matrix methods work in.

use padic_hlp::radial::{integrate_radial, lq_norm, to_sequence_coords, weighted_norm, ExtendedExponent, RadialFunction};
use padic_hlp::{PrimeBase, ValuationWindow};

fn main() {
    let base = PrimeBase::new(3).unwrap();
    let window = ValuationWindow::new(-10, 10).unwrap();

    let ball = RadialFunction::ball_indicator(base, window, 0);
    println!("∫ 1_B0 = {:.12} (Haar measure 1)", integrate_radial(&ball));

    // |x|^{-1/2} on |x| ≤ 1: the L²_0 norm² is (1-1/p) Σ_{γ≤0} p^γ p^{-γ} = (1-1/p)·(#spheres)
    let f = RadialFunction::from_fn(base, window, |g| if g <= 0 { base.pow(-0.5 * g as f64) } else { 0.0 });
    let q = ExtendedExponent::finite(2);
    let norm = weighted_norm(&f, &q, 0.0);
    let coords = to_sequence_coords(&f, &q, 0.0).unwrap();
    println!("‖|x|^(-1/2) 1_B0‖_2 on 11 spheres = {norm:.12}");
    println!("expected sqrt(11·2/3)               = {:.12}", (11.0 * 2.0 / 3.0f64).sqrt());
    println!("l² norm of coordinates              = {:.12}", lq_norm(&coords, 2.0));
    println!("sup norm                            = {}", weighted_norm(&f, &ExtendedExponent::Infinite, 0.0));
}
