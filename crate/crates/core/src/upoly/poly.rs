use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{Dual, Rational, Scalar};

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// The coefficient vector never ends in an exact zero; the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<T: Scalar = Rational> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c · X^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `X^i`; zero outside the stored range.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs
            .last()
            .is_some_and(|c| c.minus(&T::one()).is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.coeff(i).plus(&other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.coeff(i).minus(&other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(Scalar::negated).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.lead().inverse()?;
        let mut rem = self.coeffs.clone();
        let Some(top) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if top < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); top - dd + 1];
        for k in (0..=top - dd).rev() {
            let c = rem[k + dd].times(&lead_inv);
            if !c.is_zero() {
                for (i, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = rem[k + i].minus(&c.times(b));
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient, or `None` if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Option<Self>> {
        let (q, r) = self.divmod(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.times(x).plus(c))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&Rational::from_int(i as i64)))
                .collect(),
        )
    }

    /// `self(X + c)`.
    pub fn shift(&self, c: &T) -> Self {
        // Horner in the ring of polynomials: p(X+c) = (...(a_n (X+c) + a_{n-1})(X+c) ...).
        let lin = Poly::new(vec![c.clone(), T::one()]);
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, a| {
            acc.mul(&lin).add(&Poly::constant(a.clone()))
        })
    }

    /// `self(c·X)`.
    pub fn rescale_argument(&self, c: &T) -> Self {
        let mut pow = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.times(&pow));
            pow = pow.times(c);
        }
        Poly::new(out)
    }
}

impl Poly<Rational> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    /// Lifts to dual coefficients with no active variables.
    pub fn to_dual(&self) -> Poly<Dual> {
        Poly::new(self.coeffs.iter().cloned().map(Dual::constant).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| {
            acc.mul(&Poly::new(vec![-r, Rational::one()]))
        })
    }

    /// The polynomial of degree below `points.len()` through the given
    /// points (Newton divided differences).
    pub fn interpolate(points: &[(Rational, Rational)]) -> Result<Self> {
        let xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
        let mut table: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
        let n = points.len();
        for level in 1..n {
            for i in (level..n).rev() {
                let den = xs[i] - xs[i - level];
                if den.is_zero() {
                    return Err(Error::InvalidArgument(format!("repeated node {}", xs[i])));
                }
                table[i] = (&table[i] - &table[i - 1]) / &den;
            }
        }
        let mut acc = Poly::zero();
        for i in (0..n).rev() {
            acc = acc
                .mul(&Poly::new(vec![-xs[i], Rational::one()]))
                .add(&Poly::constant(table[i].clone()));
        }
        Ok(acc)
    }
}

impl Poly<Dual> {
    pub fn values(&self) -> Poly<Rational> {
        Poly::new(self.coeffs.iter().map(|c| c.value.clone()).collect())
    }
}

impl<T: Scalar> Default for Poly<T> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<T: Scalar> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() || i == 0 {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident) => {
        impl<'a, 'b, T: Scalar> $trait<&'b Poly<T>> for &'a Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: &'b Poly<T>) -> Poly<T> {
                Poly::$method(self, rhs)
            }
        }
    };
}

poly_binop!(Add, add);
poly_binop!(Sub, sub);
poly_binop!(Mul, mul);

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::neg(self)
    }
}

impl Serialize for Poly<Rational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly<Rational> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly::new(Vec::<Rational>::deserialize(deserializer)?))
    }
}
