use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Rational, Scalar};
use crate::error::{Error, Result};

/// `2^61 - 1`.
pub const P61: u64 = (1 << 61) - 1;
/// `2^64 - 59`.
pub const P64: u64 = u64::MAX - 58;

/// Residue modulo the prime `P`.
///
/// Reducing a rational computation modulo `P` commutes with the field
/// operations as long as no denominator is divisible by `P`, so running a
/// rational map over `ModP` gives the exact reduction of the rational orbit
/// at a cost independent of its height.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModP<const P: u64>(u64);

impl<const P: u64> ModP<P> {
    pub fn new(n: u64) -> Self {
        ModP(n % P)
    }

    pub fn residue(self) -> u64 {
        self.0
    }

    fn reduce_big(n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(P))
            .to_u64()
            .expect("residue fits in u64")
    }

    /// Fails when the denominator is divisible by `P`.
    pub fn try_from_rational(r: &Rational) -> Result<Self> {
        let den = ModP::<P>(Self::reduce_big(r.denom()));
        let num = ModP::<P>(Self::reduce_big(r.numer()));
        Ok(num.times(&den.inverse()?))
    }

    fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = ModP(1 % P);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            exp >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Debug for ModP<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {P})", self.0)
    }
}

impl<const P: u64> fmt::Display for ModP<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Scalar for ModP<P> {
    fn zero() -> Self {
        ModP(0)
    }
    fn one() -> Self {
        ModP(1 % P)
    }
    /// Panics if `P` divides the denominator; use
    /// [`ModP::try_from_rational`] for untrusted input.
    fn from_rational(r: Rational) -> Self {
        ModP::try_from_rational(&r)
            .unwrap_or_else(|_| panic!("denominator of {r} vanishes modulo {P}"))
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, other: &Self) -> Self {
        ModP(((self.0 as u128 + other.0 as u128) % P as u128) as u64)
    }
    fn minus(&self, other: &Self) -> Self {
        ModP(((self.0 as u128 + P as u128 - other.0 as u128) % P as u128) as u64)
    }
    fn times(&self, other: &Self) -> Self {
        ModP(((self.0 as u128 * other.0 as u128) % P as u128) as u64)
    }
    fn negated(&self) -> Self {
        ModP((P - self.0) % P)
    }
    fn inverse(&self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(P - 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};

    #[test]
    fn reduction_commutes_with_field_ops() {
        let a = frac(-7, 12);
        let b = frac(35, 9);
        type F = ModP<P61>;
        let fa = F::from_rational(a.clone());
        let fb = F::from_rational(b.clone());
        assert_eq!(fa.times(&fb), F::from_rational(&a * &b));
        assert_eq!(fa.minus(&fb), F::from_rational(&a - &b));
        assert_eq!(fa.divide(&fb).unwrap(), F::from_rational(&a / &b));
        assert_eq!(fa.inverse().unwrap().times(&fa), F::one());
    }

    #[test]
    fn wide_prime_has_no_overflow() {
        type F = ModP<P64>;
        let big = F::new(P64 - 1);
        assert_eq!(big.times(&big), F::one());
        assert_eq!(big.plus(&big), F::new(P64 - 2));
        assert_eq!(F::from_rational(int(-1)), big);
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(ModP::<P61>::zero().inverse().is_err());
        assert!(ModP::<P61>::try_from_rational(&Rational::new(1, P61).unwrap()).is_err());
    }
}
