//! Closed-form norms: q = r < ∞, the L∞ → L∞ column route, and the
//! one-sided endpoint routes.

use padic_hlp::analysis::{exact_norm_endpoint, sharp_norm};
use padic_hlp::operator::{KernelParams, SpaceParams};
use padic_hlp::radial::ExtendedExponent;
use padic_hlp::{PrimeBase, Scalar};

fn main() {
    let k = KernelParams::new(1, 0, 0);
    for p in [2, 3, 5, 7] {
        let base = PrimeBase::new(p).unwrap();
        let n = sharp_norm(&k, &SpaceParams::diagonal(ExtendedExponent::finite(2), 0), base).unwrap();
        println!(
            "p={p}: ‖H‖ on L² = {:.9}  (c={:.4}, below {:.4}, above {:.4})",
            n.value, n.prefactor, n.below_term, n.above_term
        );
    }

    let base = PrimeBase::new(2).unwrap();
    let linf = SpaceParams::diagonal(ExtendedExponent::Infinite, 0);
    let k = KernelParams::new(3, 1, 1);
    println!("L∞ → L∞, λ=3 μ=1 ν=1: closed form {:.6}", sharp_norm(&k, &linf, base).unwrap().value);
    println!("                       column route {:?}", exact_norm_endpoint(&k, &linf, base).unwrap());
    let k = KernelParams::new(2, 1, 0);
    println!("L∞ → L∞, λ=2 μ=1 ν=0: {:?}", exact_norm_endpoint(&k, &linf, base).unwrap());

    let half = Scalar::ratio(-1, 2);
    let l1 = SpaceParams::new(ExtendedExponent::finite(1), ExtendedExponent::finite(1), half.clone(), half);
    println!("L¹ → L¹ row route, α=β=-1/2: {:?}", exact_norm_endpoint(&KernelParams::new(1, 0, 0), &l1, base).unwrap());
}
