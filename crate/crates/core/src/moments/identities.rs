use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::linalg::hankel_minor;

/// The Hankel minors used by the determinant identities, all of size `m`
/// built from rows/columns of `(s_{i+j})`.
struct Minors<'a> {
    s: &'a [Rational],
}

impl Minors<'_> {
    fn run(m: usize) -> Vec<usize> {
        (0..m).collect()
    }

    /// `{0..m-2} ∪ {last}`
    fn skip_one(m: usize, last: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..m - 1).collect();
        v.push(last);
        v
    }

    fn delta(&self, m: usize) -> Result<Rational> {
        hankel_minor(self.s, &Self::run(m), &Self::run(m))
    }

    fn star(&self, m: usize) -> Result<Rational> {
        if m == 0 {
            return Ok(Rational::zero());
        }
        hankel_minor(self.s, &Self::run(m), &Self::skip_one(m, m))
    }

    /// Columns `{0..m-3, m-1, m}`.
    fn star2(&self, m: usize) -> Result<Rational> {
        let mut cols: Vec<usize> = (0..m - 2).collect();
        cols.extend([m - 1, m]);
        hankel_minor(self.s, &Self::run(m), &cols)
    }

    /// Rows and columns `{0..m-2, m}`.
    fn prime(&self, m: usize) -> Result<Rational> {
        let idx = Self::skip_one(m, m);
        hankel_minor(self.s, &idx, &idx)
    }

    /// Columns `{0..m-2, m+1}`.
    fn prime2(&self, m: usize) -> Result<Rational> {
        hankel_minor(self.s, &Self::run(m), &Self::skip_one(m, m + 1))
    }
}

/// Both sides of each identity at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: usize,
    /// `Δ_nΔ_{n-2}` and `Δ_{n-1}Δ'_{n-1} - (Δ*_{n-1})^2`.
    pub desnanot_jacobi: (Rational, Rational),
    /// `Δ**_nΔ_{n-1} - Δ*_nΔ*_{n-1} + Δ_nΔ''_{n-1}`, expected zero.
    pub laplace: Rational,
    /// `Δ''_n - Δ'_n + Δ**_n`, expected zero.
    pub telescoping: Rational,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.desnanot_jacobi.0 == self.desnanot_jacobi.1
            && self.laplace.is_zero()
            && self.telescoping.is_zero()
    }

    /// Name of the first failing identity.
    pub fn failure(&self) -> Option<&'static str> {
        if self.desnanot_jacobi.0 != self.desnanot_jacobi.1 {
            Some("desnanot-jacobi")
        } else if !self.laplace.is_zero() {
            Some("laplace")
        } else if !self.telescoping.is_zero() {
            Some("telescoping")
        } else {
            None
        }
    }
}

/// Evaluates the three identities at `n ≥ 2`; needs `s_0..s_{2n}`.
pub fn appendix_identities(s: &[Rational], n: usize) -> Result<IdentityReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "identities are stated for n ≥ 2".into(),
        ));
    }
    if s.len() < 2 * n + 1 {
        return Err(Error::InsufficientData {
            needed: 2 * n + 1,
            got: s.len(),
        });
    }
    let h = Minors { s };
    let dj_lhs = h.delta(n)? * h.delta(n - 2)?;
    let star_prev = h.star(n - 1)?;
    let dj_rhs = h.delta(n - 1)? * h.prime(n - 1)? - &star_prev * &star_prev;
    let laplace =
        h.star2(n)? * h.delta(n - 1)? - h.star(n)? * &star_prev + h.delta(n)? * h.prime2(n - 1)?;
    let telescoping = h.prime2(n)? - h.prime(n)? + h.star2(n)?;
    Ok(IdentityReport {
        n,
        desnanot_jacobi: (dj_lhs, dj_rhs),
        laplace,
        telescoping,
    })
}

/// Checks every identity for `2 ≤ n ≤ max_n`, failing with the identity
/// name, `n` and the Hankel matrix on the first violation.
pub fn check_identities(s: &[Rational], max_n: usize) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let r = appendix_identities(s, n)?;
        if let Some(name) = r.failure() {
            let rows: Vec<String> = (0..=n)
                .map(|i| {
                    let row: Vec<String> = (0..=n + 1)
                        .map(|j| s[(i + j).min(s.len() - 1)].to_string())
                        .collect();
                    row.join(" ")
                })
                .collect();
            return Err(Error::VerificationFailed(format!(
                "{name} identity fails at n = {n}: {r:?}\nHankel rows:\n{}",
                rows.join("\n")
            )));
        }
        out.push(r);
    }
    Ok(out)
}
