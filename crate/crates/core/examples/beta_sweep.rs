//! Sweeping β with μ re-balanced: bounded exactly on -1 < β < 1, with the
//! sharp constant blowing up at the edges. Same grid as
//! `padic-hlp sweep --vary beta --from -2 --to 2 --steps 16 --balance-by mu`.

use padic_hlp::analysis::{check_boundedness, sharp_norm};
use padic_hlp::operator::{KernelParams, SpaceParams};
use padic_hlp::radial::ExtendedExponent;
use padic_hlp::{PrimeBase, Scalar};

fn main() {
    let base = PrimeBase::new(2).unwrap();
    for i in 0..=16 {
        let beta = Scalar::ratio(i - 8, 4);
        // τ = μ + β/2 on this line, so μ = -β/2 balances it
        let mu = &beta / &Scalar::integer(-2);
        let k = KernelParams::new(1, mu, 0);
        let s = SpaceParams::new(ExtendedExponent::finite(2), ExtendedExponent::finite(2), 0, beta.clone());
        let v = check_boundedness(&k, &s);
        let norm = sharp_norm(&k, &s, base).map_or("-".to_string(), |n| format!("{:.6}", n.value));
        println!("β = {:>5}  {:<10} {norm}", beta.to_string(), v.status.to_string());
    }
}
