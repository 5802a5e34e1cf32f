//! Valuations, norms, digit expansions and Haar measures for a few rationals.

use padic_hlp::padic::{digit_expansion, haar_measure, padic_norm_exact, parse_rational, valuation, Region};
use padic_hlp::PrimeBase;

fn main() {
    for p in [2, 3, 5] {
        let base = PrimeBase::new(p).unwrap();
        println!("p = {p}");
        for text in ["12/5", "-1", "1/3", "250/7"] {
            let x = parse_rational(text).unwrap();
            let digits = digit_expansion(&x, base, 8).unwrap();
            println!(
                "  {text:>6}: v = {:>2}, |x| = {:>5}, {digits}",
                valuation(&x, base),
                padic_norm_exact(&x, base)
            );
        }
        println!(
            "  |B_0| = {}, |S_0| = {}, |S_2| = {}",
            haar_measure(Region::Ball(0), base),
            haar_measure(Region::Sphere(0), base),
            haar_measure(Region::Sphere(2), base)
        );
    }
}
