//! Schur-test upper bounds: the analytic choice at q = r, the grid search,
//! the optimizer, and the q = 1 case.

use padic_hlp::analysis::{optimize_schur_bound, schur_grid_search, schur_upper_bound, sharp_norm, SchurFree};
use padic_hlp::operator::{KernelParams, SpaceParams};
use padic_hlp::radial::ExtendedExponent;
use padic_hlp::{PrimeBase, Scalar};

fn main() {
    let base = PrimeBase::new(2).unwrap();
    let k = KernelParams::new(1, 0, 0);
    let s = SpaceParams::diagonal(ExtendedExponent::finite(2), 0);
    println!("sharp norm            {:.12}", sharp_norm(&k, &s, base).unwrap().value);
    let at = schur_upper_bound(&k, &s, base, SchurFree::CaseI { t: 2.0, a: -0.25 }).unwrap();
    println!("t=2, A=-1/4           {:.12}", at.bound);
    for res in [4, 16, 64] {
        println!("grid {res:>3}              {:.12}", schur_grid_search(&k, &s, base, res).unwrap().bound);
    }
    let best = optimize_schur_bound(&k, &s, base, 32).unwrap();
    println!("optimized             {:.12}  {:?}", best.bound, best.constants);
    match schur_upper_bound(&k, &s, base, SchurFree::CaseI { t: 2.0, a: 5.0 }) {
        Err(e) => println!("A = 5: {e}"),
        Ok(c) => println!("A = 5: unexpectedly feasible, {}", c.bound),
    }

    // q = 1 < r = 2
    let k = KernelParams::new(Scalar::ratio(3, 2), 0, Scalar::ratio(1, 2));
    let s = SpaceParams::new(ExtendedExponent::finite(1), ExtendedExponent::finite(2), Scalar::ratio(-1, 2), 0);
    let best = optimize_schur_bound(&k, &s, base, 32).unwrap();
    println!("q=1, r=2: bound {:.6}  {:?}", best.bound, best.constants);
}
