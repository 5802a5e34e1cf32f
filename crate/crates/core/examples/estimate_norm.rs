//! The full report for a bounded point: closed form between the numerical
//! lower bounds and the Schur upper bound.

use padic_hlp::estimation::{estimate_norm, EstimateOptions};
use padic_hlp::operator::{KernelParams, SpaceParams};
use padic_hlp::radial::ExtendedExponent;
use padic_hlp::{PrimeBase, Scalar, ValuationWindow};

fn main() {
    let base = PrimeBase::new(2).unwrap();
    let opts = EstimateOptions {
        window: ValuationWindow::symmetric(60),
        ..EstimateOptions::default()
    };
    let points = [
        (KernelParams::new(1, 0, 0), SpaceParams::diagonal(ExtendedExponent::finite(2), 0)),
        (
            KernelParams::new(Scalar::ratio(3, 4), 0, 0),
            SpaceParams::new(ExtendedExponent::finite(2), ExtendedExponent::finite(4), 0, 0),
        ),
    ];
    for (k, s) in points {
        let report = estimate_norm(&k, &s, base, &opts).unwrap();
        println!("q={} r={}: {}", s.q, s.r, report.verdict.status);
        if let Some(m) = &report.matrix_lower {
            println!("  matrix lower   {:.6}  ({} iterations, outputs {}..{})", m.value, m.iterations, m.out_window.min(), m.out_window.max());
        }
        if let Some(x) = report.max_extremal_ratio() {
            println!("  extremal lower {x:.6}");
        }
        if let Some(c) = &report.closed_form {
            println!("  closed form    {:.6}", c.value);
        }
        if let Some(c) = &report.schur {
            println!("  Schur upper    {:.6}", c.bound);
        }
    }
}
