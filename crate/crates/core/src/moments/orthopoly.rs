use crate::cfrac::CFLine;
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::linalg::hankel_minor;
use crate::upoly::Poly;

/// `⟨p, q⟩ = L(p·q)` where the moment functional sends `X^j` to `s_j`.
pub fn pairing(s: &[Rational], p: &Poly, q: &Poly) -> Result<Rational> {
    let prod = p.mul(q);
    let deg = prod.degree().map_or(0, |d| d + 1);
    if deg > s.len() {
        return Err(Error::InsufficientData {
            needed: deg,
            got: s.len(),
        });
    }
    Ok(prod.coeffs().iter().zip(s).map(|(c, m)| c * m).sum())
}

/// Monic orthogonal polynomial of degree `n` from the determinant formula:
/// the Hankel rows `s_i..s_{i+n}` for `i < n` stacked over `1, X, ..., X^n`,
/// divided by `Δ_n`.
pub fn orthopoly_q(s: &[Rational], n: usize) -> Result<Poly> {
    if n == 0 {
        return Ok(Poly::one());
    }
    if s.len() < 2 * n {
        return Err(Error::InsufficientData {
            needed: 2 * n,
            got: s.len(),
        });
    }
    let rows: Vec<usize> = (0..n).collect();
    let delta = hankel_minor(s, &rows, &rows)?;
    if delta.is_zero() {
        return Err(Error::Degenerate(format!("Δ_{n} vanishes")));
    }
    // Laplace expansion along the bottom row.
    let coeffs = (0..=n)
        .map(|j| {
            let cols: Vec<usize> = (0..=n).filter(|&c| c != j).collect();
            let minor = hankel_minor(s, &rows, &cols)?;
            let signed = if (n + j).is_multiple_of(2) { minor } else { -minor };
            Ok(signed / &delta)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs))
}

/// `q_0..q_n` from `q_k = (X + v_k) q_{k-1} - d_k q_{k-2}`, reading `v_k, d_k`
/// from lines `1..=n` of the expansion.
pub fn orthopoly_recurrence(lines: &[CFLine], n: usize) -> Result<Vec<Poly>> {
    if lines.len() <= n {
        return Err(Error::InsufficientData {
            needed: n + 1,
            got: lines.len(),
        });
    }
    let mut out = vec![Poly::one()];
    let mut prev = Poly::zero();
    for line in &lines[1..=n] {
        let cur = out.last().expect("nonempty").clone();
        let lin = Poly::new(vec![line.v.clone(), Rational::one()]);
        let next = lin.mul(&cur).sub(&prev.scale(&line.d));
        prev = cur;
        out.push(next);
    }
    // q_1 = X + v_1 has no d-term; the loop used prev = 0 for it.
    Ok(out)
}
