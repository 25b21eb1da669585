//! Exact scalars: rationals, first-order dual numbers over them and
//! residues modulo a word-sized prime.

mod dual;
mod modp;
mod rational;
mod scalar;

pub use dual::{describe_point, gradient, Dual};
pub use modp::{ModP, P61, P64};
pub use rational::{content, Rational};
pub use scalar::Scalar;

/// Shorthand for `Rational::from_int`.
pub fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Shorthand for `Rational::frac`; panics on a zero denominator.
pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::frac(numer, denom)
}
