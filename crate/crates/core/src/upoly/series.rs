use crate::error::{Error, Result};
use crate::exactnum::Rational;

use super::Poly;

/// Truncated Laurent series in `X^{-1}`.
///
/// `coeffs[i]` is the coefficient of `X^{top - i}`; every coefficient down to
/// `X^{low()}` is known exactly and nothing below it is.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Laurent {
    top: i64,
    coeffs: Vec<Rational>,
}

/// Series with no polynomial part: `c_1 X^{-1} + ... + c_N X^{-N} + O(X^{-N-1})`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentTail {
    coeffs: Vec<Rational>,
}

impl LaurentTail {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LaurentTail { coeffs }
    }

    /// `coeffs()[j]` multiplies `X^{-(j+1)}`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn to_laurent(&self) -> Laurent {
        Laurent::new(-1, self.coeffs.clone())
    }
}

impl Laurent {
    /// Series with leading exponent `top` and the given descending coefficients.
    pub fn new(top: i64, coeffs: Vec<Rational>) -> Self {
        Laurent { top, coeffs }
    }

    /// The exact polynomial `p`, with precision recorded down to `X^{low}`.
    pub fn from_poly(p: &Poly, low: i64) -> Self {
        let top = p.degree().map_or(low.max(0), |d| (d as i64).max(low));
        let coeffs = (low..=top)
            .rev()
            .map(|e| {
                if e >= 0 {
                    p.coeff(e as usize)
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Laurent { top, coeffs }
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    /// Lowest exponent whose coefficient is known.
    pub fn low(&self) -> i64 {
        self.top - self.coeffs.len() as i64 + 1
    }

    pub fn terms(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `X^e`; `None` below the known precision.
    pub fn coeff(&self, e: i64) -> Option<Rational> {
        if e > self.top {
            Some(Rational::zero())
        } else if e < self.low() {
            None
        } else {
            Some(self.coeffs[(self.top - e) as usize].clone())
        }
    }

    /// Drops leading zero coefficients so that `top` is the true leading exponent.
    pub fn normalized(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Laurent {
            top: self.top - skip as i64,
            coeffs: self.coeffs[skip..].to_vec(),
        }
    }

    /// Forgets every coefficient below `X^{low}`.
    pub fn truncate(&self, low: i64) -> Self {
        let keep = (self.top - low + 1).clamp(0, self.coeffs.len() as i64) as usize;
        Laurent {
            top: self.top,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        let top = self.top.max(other.top);
        let low = self.low().max(other.low());
        let coeffs = (low..=top)
            .rev()
            .map(|e| {
                let a = self.coeff(e).expect("within precision");
                let b = other.coeff(e).expect("within precision");
                if sign {
                    a + b
                } else {
                    a - b
                }
            })
            .collect();
        Laurent { top, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn neg(&self) -> Self {
        Laurent {
            top: self.top,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Laurent {
            top: self.top,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let top = self.top + other.top;
        let low = (self.low() + other.top).max(self.top + other.low());
        let len = (top - low + 1).max(0) as usize;
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len.saturating_sub(i)) {
                coeffs[i + j] += &(a * b);
            }
        }
        Laurent { top, coeffs }
    }

    /// Multiplicative inverse with the same relative precision.
    pub fn inverse(&self) -> Result<Self> {
        let s = self.normalized();
        let lead = s.coeffs.first().ok_or(Error::DivisionByZero)?;
        let lead_inv = lead.recip()?;
        let n = s.coeffs.len();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        out.push(lead_inv.clone());
        for k in 1..n {
            let acc: Rational = (1..=k).map(|i| &s.coeffs[i] * &out[k - i]).sum();
            out.push(-(acc * &lead_inv));
        }
        Ok(Laurent {
            top: -s.top,
            coeffs: out,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// The part with nonnegative exponents. Fails if the constant term is not known.
    pub fn polynomial_part(&self) -> Result<Poly> {
        if self.low() > 0 {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if self.top < 0 {
            return Ok(Poly::zero());
        }
        Ok(Poly::new(
            (0..=self.top)
                .map(|e| self.coeff(e).expect("known"))
                .collect(),
        ))
    }

    /// The first `n` coefficients of the negative-exponent part.
    pub fn tail(&self, n: usize) -> Result<LaurentTail> {
        let needed_low = -(n as i64);
        if self.low() > needed_low {
            let got = (-self.low()).max(0) as usize;
            return Err(Error::InsufficientData { needed: n, got });
        }
        Ok(LaurentTail::new(
            (1..=n as i64)
                .map(|j| self.coeff(-j).expect("known"))
                .collect(),
        ))
    }

    /// True when every known coefficient is zero.
    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }
}

/// Inverse of `t` computed to `terms` coefficients.
pub fn series_invert(t: &Laurent, terms: usize) -> Result<Laurent> {
    let s = t.normalized();
    if s.coeffs.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let padded = if s.coeffs.len() >= terms {
        s.truncate(s.top - terms as i64 + 1)
    } else {
        return Err(Error::InsufficientData {
            needed: terms,
            got: s.coeffs.len(),
        });
    };
    padded.inverse()
}

/// Square root of a monic even-degree polynomial at the branch with leading
/// term `+X^{deg/2}`, to `terms` coefficients.
pub fn sqrt_series(f: &Poly, terms: usize) -> Result<Laurent> {
    let deg = f
        .degree()
        .ok_or_else(|| Error::InvalidCurve("zero polynomial has no square root".into()))?;
    if deg % 2 != 0 {
        return Err(Error::InvalidCurve(format!(
            "square root needs even degree, got {deg}"
        )));
    }
    if !f.is_monic() {
        return Err(Error::InvalidCurve(
            "square root needs a monic polynomial".into(),
        ));
    }
    let half = (deg / 2) as i64;
    // f / X^deg = 1 + f_1 X^{-1} + ... ; y_0 = 1, 2 y_k = f_k - sum_{i=1}^{k-1} y_i y_{k-i}.
    let fk = |k: usize| {
        if k <= deg {
            f.coeff(deg - k)
        } else {
            Rational::zero()
        }
    };
    let half_r = Rational::frac(1, 2);
    let mut y = Vec::with_capacity(terms);
    if terms > 0 {
        y.push(Rational::one());
    }
    for k in 1..terms {
        let cross: Rational = (1..k).map(|i| &y[i] * &y[k - i]).sum();
        y.push((fk(k) - cross) * &half_r);
    }
    Ok(Laurent::new(half, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn invert_x() {
        let x = Laurent::new(1, vec![int(1), int(0), int(0)]);
        let inv = x.inverse().unwrap();
        assert_eq!(inv.top(), -1);
        assert_eq!(inv.terms(), &[int(1), int(0), int(0)]);
    }

    #[test]
    fn invert_geometric() {
        let s = Laurent::new(0, vec![int(1), int(1), int(0), int(0)]);
        let inv = series_invert(&s, 4).unwrap();
        assert_eq!(inv.terms(), &[int(1), int(-1), int(1), int(-1)]);
        let prod = s.mul(&inv);
        assert_eq!(prod.terms(), &[int(1), int(0), int(0), int(0)]);
    }

    #[test]
    fn invert_zero_fails() {
        let z = Laurent::new(0, vec![int(0), int(0)]);
        assert!(z.inverse().is_err());
    }

    #[test]
    fn sqrt_of_pure_power() {
        let f = Poly::from_ints(&[0, 0, 0, 0, 1]);
        let y = sqrt_series(&f, 5).unwrap();
        assert_eq!(y.top(), 2);
        assert_eq!(y.terms(), &[int(1), int(0), int(0), int(0), int(0)]);
    }

    #[test]
    fn sqrt_of_perfect_square_is_exact() {
        let a = Poly::from_ints(&[-1, -5, 0, 1]);
        let y = sqrt_series(&a.square(), 12).unwrap();
        let exact = Laurent::from_poly(&a, y.low());
        assert_eq!(y, exact);
    }

    #[test]
    fn sqrt_squares_back() {
        // F = (X^2 - 3)^2 - 4(X + 2)
        let f = Poly::from_ints(&[1, -4, -6, 0, 1]);
        let y = sqrt_series(&f, 8).unwrap();
        let sq = y.mul(&y);
        let target = Laurent::from_poly(&f, sq.low());
        assert_eq!(sq, target);
        assert_eq!(sq.low(), 4 - 7);
    }

    #[test]
    fn sqrt_rejects_bad_input() {
        assert!(sqrt_series(&Poly::from_ints(&[1, 0, 0, 1]), 4).is_err());
        assert!(sqrt_series(&Poly::from_ints(&[1, 0, 2]), 4).is_err());
    }

    #[test]
    fn tail_and_polynomial_part() {
        let s = Laurent::new(1, vec![int(2), int(3), int(4), int(5)]);
        assert_eq!(s.polynomial_part().unwrap(), Poly::from_ints(&[3, 2]));
        assert_eq!(s.tail(2).unwrap().coeffs(), &[int(4), int(5)]);
        assert!(s.tail(3).is_err());
    }
}
