//! Applying the operator three ways: sphere sums on radial functions, the
//! coordinate matrix, and the O(n) recurrence.

use nalgebra::DVector;
use padic_hlp::operator::{apply_coords, apply_hlp, build_matrix_rect, KernelParams, SpaceParams};
use padic_hlp::radial::{to_sequence_coords, ExtendedExponent, RadialFunction};
use padic_hlp::{PrimeBase, ValuationWindow};

fn main() {
    let base = PrimeBase::new(2).unwrap();
    let k = KernelParams::new(1, 0, 0);
    let s = SpaceParams::diagonal(ExtendedExponent::finite(2), 0);
    let input = ValuationWindow::symmetric(3);
    let output = ValuationWindow::symmetric(5);

    // indicator of the unit sphere |x| = 1
    let f = RadialFunction::sphere_indicator(base, 0);
    let f = RadialFunction::from_fn(base, input, |g| f.at(g));
    let hf = apply_hlp(&k, &f, output).unwrap();
    println!("H 1_S0 by spheres:");
    for (g, v) in hf.iter() {
        println!("  |x| = 2^{g:<3} {v:.6}");
    }

    let u = to_sequence_coords(&f, &s.q, 0.0).unwrap();
    let m = build_matrix_rect(&k, &s, base, output, input);
    let via_matrix = &m * DVector::from_vec(u.clone());
    let via_recurrence = apply_coords(&k, &s, base, input, &u, output).unwrap();
    let diff = via_matrix.iter().zip(&via_recurrence).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("matrix {}x{}; max |M u - recurrence| = {diff:.2e}", m.nrows(), m.ncols());
}
