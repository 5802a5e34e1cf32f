//! Divergence witnesses for unbounded points: the r < q growth factor, the
//! boundary extremal family, and windowed matrix bounds off balance.

use padic_hlp::analysis::check_boundedness;
use padic_hlp::estimation::{default_witness, divergence_witness, GROWTH_THRESHOLD};
use padic_hlp::operator::{KernelParams, SpaceParams};
use padic_hlp::radial::ExtendedExponent;
use padic_hlp::{PrimeBase, Scalar};

fn main() {
    let base = PrimeBase::new(2).unwrap();
    let half = Scalar::ratio(1, 2);
    let points = [
        ("q=2 → r=1", KernelParams::new(2, 0, 0), SpaceParams::new(ExtendedExponent::finite(2), ExtendedExponent::finite(1), 0, half.clone())),
        ("boundary β+1 = r(λ-ν)", KernelParams::new(1, -half.clone(), 0), SpaceParams::new(ExtendedExponent::finite(2), ExtendedExponent::finite(2), 0, 1)),
        ("off balance α=1", KernelParams::new(1, 0, 0), SpaceParams::new(ExtendedExponent::finite(2), ExtendedExponent::finite(2), 1, 0)),
    ];
    for (name, k, s) in points {
        let verdict = check_boundedness(&k, &s);
        let report = divergence_witness(&k, &s, base, default_witness(&s, &verdict), GROWTH_THRESHOLD).unwrap();
        println!("{name}: {} → {:?}, growth ×{:.2}", verdict.status, report.status, report.growth);
        for (x, v) in &report.sequence {
            println!("    {x:<12} {v:.5}");
        }
    }
}
