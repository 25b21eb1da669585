use std::fmt;

use super::{Rational, Scalar};
use crate::error::{Error, Result};

/// First-order dual number: an exact value plus exact partial derivatives
/// with respect to a fixed list of active variables.
///
/// An empty `derivs` vector means "constant"; shorter vectors are padded
/// with zeros when combined, so constants never need to know the dimension.
#[derive(Clone, PartialEq, Eq)]
pub struct Dual {
    pub value: Rational,
    pub derivs: Vec<Rational>,
}

impl Dual {
    pub fn constant(value: Rational) -> Self {
        Dual {
            value,
            derivs: Vec::new(),
        }
    }

    /// The `index`-th of `dim` active variables, evaluated at `value`.
    pub fn variable(value: Rational, index: usize, dim: usize) -> Self {
        let mut derivs = vec![Rational::zero(); dim];
        derivs[index] = Rational::one();
        Dual { value, derivs }
    }

    /// Lifts a point into duals, one active variable per coordinate.
    pub fn variables(point: &[Rational]) -> Vec<Dual> {
        point
            .iter()
            .enumerate()
            .map(|(i, x)| Dual::variable(x.clone(), i, point.len()))
            .collect()
    }

    pub fn with_derivs(value: Rational, derivs: Vec<Rational>) -> Self {
        Dual { value, derivs }
    }

    /// Partial derivative with respect to variable `i` (zero when absent).
    pub fn deriv(&self, i: usize) -> Rational {
        self.derivs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Gradient padded to `dim` entries.
    pub fn gradient(&self, dim: usize) -> Vec<Rational> {
        (0..dim).map(|i| self.deriv(i)).collect()
    }

    fn zip_with(
        &self,
        other: &Dual,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Vec<Rational> {
        let n = self.derivs.len().max(other.derivs.len());
        let zero = Rational::zero();
        (0..n)
            .map(|i| {
                f(
                    self.derivs.get(i).unwrap_or(&zero),
                    other.derivs.get(i).unwrap_or(&zero),
                )
            })
            .collect()
    }
}

impl fmt::Debug for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {:?}·ε", self.value, self.derivs)
    }
}

impl Scalar for Dual {
    fn zero() -> Self {
        Dual::constant(Rational::zero())
    }
    fn one() -> Self {
        Dual::constant(Rational::one())
    }
    fn from_rational(r: Rational) -> Self {
        Dual::constant(r)
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.derivs.iter().all(Rational::is_zero)
    }
    fn plus(&self, other: &Self) -> Self {
        Dual {
            value: &self.value + &other.value,
            derivs: self.zip_with(other, |a, b| a + b),
        }
    }
    fn minus(&self, other: &Self) -> Self {
        Dual {
            value: &self.value - &other.value,
            derivs: self.zip_with(other, |a, b| a - b),
        }
    }
    fn times(&self, other: &Self) -> Self {
        let (x, y) = (&self.value, &other.value);
        Dual {
            value: x * y,
            derivs: self.zip_with(other, |a, b| a * y + x * b),
        }
    }
    fn negated(&self) -> Self {
        Dual {
            value: -&self.value,
            derivs: self.derivs.iter().map(|d| -d).collect(),
        }
    }
    fn inverse(&self) -> Result<Self> {
        let inv = self.value.recip().map_err(|_| Error::DivisionByZero)?;
        let factor = -(&inv * &inv);
        Ok(Dual {
            derivs: self.derivs.iter().map(|d| d * &factor).collect(),
            value: inv,
        })
    }
}

/// Evaluates `f` at `point` together with its exact gradient.
///
/// A division by zero inside `f` is reported as a pole at the given point.
pub fn gradient<F>(f: F, point: &[Rational]) -> Result<(Rational, Vec<Rational>)>
where
    F: FnOnce(&[Dual]) -> Result<Dual>,
{
    let vars = Dual::variables(point);
    match f(&vars) {
        Ok(d) => {
            let grad = d.gradient(point.len());
            Ok((d.value, grad))
        }
        Err(Error::DivisionByZero) => Err(Error::Pole {
            at: describe_point(point),
        }),
        Err(e) => Err(e),
    }
}

pub fn describe_point(point: &[Rational]) -> String {
    let parts: Vec<String> = point
        .iter()
        .enumerate()
        .map(|(i, x)| format!("x{i}={x}"))
        .collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};

    #[test]
    fn product_rule() {
        let (v, g) = gradient(|x| Ok(x[0].times(&x[1])), &[int(2), int(3)]).unwrap();
        assert_eq!(v, int(6));
        assert_eq!(g, vec![int(3), int(2)]);
    }

    #[test]
    fn genus_one_invariant_gradient() {
        // H = d v^2 - u v + d^2 + f d with u = -1, f = -3.
        let u = Dual::constant(int(-1));
        let f = Dual::constant(int(-3));
        let h = |x: &[Dual]| {
            let (d, v) = (&x[0], &x[1]);
            Ok(d.times(&v.times(v))
                .minus(&u.times(v))
                .plus(&d.times(d))
                .plus(&f.times(d)))
        };
        let (v, g) = gradient(h, &[int(1), int(0)]).unwrap();
        assert_eq!(v, int(-2));
        assert_eq!(g, vec![int(-1), int(1)]);
    }

    #[test]
    fn constant_has_zero_gradient() {
        let (v, g) = gradient(|_| Ok(Dual::constant(frac(7, 3))), &[int(1), int(5)]).unwrap();
        assert_eq!(v, frac(7, 3));
        assert_eq!(g, vec![int(0), int(0)]);
    }

    #[test]
    fn quotient_rule() {
        // d/dx (1/x) = -1/x^2 at x = 2.
        let (v, g) = gradient(|x| x[0].inverse(), &[int(2)]).unwrap();
        assert_eq!(v, frac(1, 2));
        assert_eq!(g, vec![frac(-1, 4)]);
    }

    #[test]
    fn pole_names_the_point() {
        let err = gradient(|x| x[0].minus(&x[1]).inverse(), &[int(1), int(1)]).unwrap_err();
        match err {
            Error::Pole { at } => assert_eq!(at, "(x0=1, x1=1)"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
