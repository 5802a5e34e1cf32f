//! One point from each regime of the decision table, with its condition trace.

use padic_hlp::analysis::check_boundedness;
use padic_hlp::operator::{KernelParams, SpaceParams};
use padic_hlp::radial::ExtendedExponent;
use padic_hlp::Scalar;

fn r(s: &str) -> Scalar {
    s.parse().unwrap()
}

fn e(s: &str) -> ExtendedExponent {
    s.parse().unwrap()
}

fn main() {
    let rows = [
        ("1", "0", "0", "2", "2", "0", "0"),
        ("3/4", "0", "0", "2", "4", "0", "0"),
        ("1", "0", "0", "2", "2", "1", "0"),
        ("1", "-1/2", "0", "2", "2", "0", "1"),
        ("0", "0", "0", "1", "inf", "0", "0"),
        ("1", "0", "1/2", "2", "inf", "0", "0"),
        ("3", "1", "1", "inf", "inf", "0", "0"),
        ("2", "0", "0", "2", "1", "0", "1/2"),
        ("1", "0", "0", "1/2", "2", "0", "0"),
    ];
    for (lambda, mu, nu, q, rr, alpha, beta) in rows {
        let k = KernelParams::new(r(lambda), r(mu), r(nu));
        let s = SpaceParams::new(e(q), e(rr), r(alpha), r(beta));
        let v = check_boundedness(&k, &s);
        println!(
            "λ={lambda:<4} μ={mu:<4} ν={nu:<4} q={q:<3} r={rr:<3} α={alpha:<2} β={beta:<4} → {:<12} [{}] τ={}{}",
            v.status.to_string(),
            v.criterion.tag(),
            v.tau,
            v.boundary.map_or(String::new(), |b| format!(" boundary {b:?}"))
        );
        for c in v.conditions.iter().filter(|c| !c.satisfied) {
            println!("      fails: {} ({} {} {})", c.name, c.lhs, c.relation, c.rhs);
        }
    }
}
