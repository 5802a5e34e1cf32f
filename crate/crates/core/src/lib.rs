//! p-adic Hardy–Littlewood–Pólya operators on radial functions.
//!
//! The crate answers three questions about the integral operator
//! `Hf(x) = ∫ k(x,y) f(y) dy` on `Q_p` with kernel
//! `k(x,y) = |x|^μ |y|^ν / max(|x|,|y|)^λ` between power-weighted Lebesgue
//! spaces `L^q(|x|^α) → L^r(|x|^β)`:
//!
//! * is it bounded? ([`analysis::check_boundedness`])
//! * what is its norm? ([`analysis::sharp_norm`], [`analysis::optimize_schur_bound`])
//! * what does the computer see? ([`estimation::estimate_norm`],
//!   [`estimation::extremal_ratio_sweep`], [`estimation::divergence_witness`])
//!
//! Runnable walkthroughs live in `examples/`: `padic_digits`, `radial_norms`,
//! `hlp_operator`, `boundedness_table`, `sharp_norms`, `schur_bounds`,
//! `estimate_norm`, `divergence` and `beta_sweep`.

pub mod analysis;
pub mod cli;
pub mod estimation;
pub mod operator;
pub mod padic;
pub mod radial;
pub mod scalar;

pub use padic::{PadicError, PrimeBase, Valuation};
pub use radial::{ExtendedExponent, RadialFunction, ValuationWindow};
pub use scalar::Scalar;
