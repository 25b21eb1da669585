//! Moments of the continued fraction at either point at infinity, their
//! Hankel determinants, the associated orthogonal polynomials, and the
//! two-sided tau sequence obtained by gluing both directions.

mod hankel;
mod identities;
mod orthopoly;
mod tau;

pub use hankel::{verify_theorem2, verify_theorem3, HankelTable, Mismatch, TheoremReport};
pub use identities::{appendix_identities, check_identities, IdentityReport};
pub use orthopoly::{orthopoly_q, orthopoly_recurrence, pairing};
pub use tau::{glue_tau, Gauge, TauSeq};

use serde::{Deserialize, Serialize};

use crate::cfrac::{step_forward, Branch, Expansion};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::upoly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Expansion at `∞₁`; moments `s_j`.
    Forward,
    /// Expansion at `∞₂`; moments `s†_j`.
    Backward,
}

impl Direction {
    pub fn branch(self) -> Branch {
        match self {
            Direction::Forward => Branch::Infinity1,
            Direction::Backward => Branch::Infinity2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentSeq {
    pub direction: Direction,
    pub s: Vec<Rational>,
}

impl MomentSeq {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// Inputs of the quadratic moment recursion, shared by both directions.
struct RecursionData<'a> {
    genus: usize,
    a: &'a Poly,
    /// `P_1` forward, `P_0` backward.
    p: &'a Poly,
    /// `Q_0` in both directions; enters through its normalized coefficients.
    q_inner: &'a Poly,
    /// `Q_1` forward, `Q_{-1}` backward; feeds the first `g` moments.
    q_outer: &'a Poly,
    d: Rational,
    s0: Rational,
}

fn run_recursion(data: &RecursionData<'_>, count: usize) -> Result<Vec<Rational>> {
    let g = data.genus;
    if count == 0 {
        return Ok(Vec::new());
    }
    if data.s0.is_zero() {
        return Err(Error::Degenerate("leading moment vanishes".into()));
    }
    let delta = data.p.sub(data.a);
    let shift: Vec<Rational> = (0..=g).map(|j| data.a.coeff(j) + delta.coeff(j)).collect();
    let inner_lead = data.q_inner.coeff(g);
    let outer_lead = data.q_outer.coeff(g);
    if inner_lead.is_zero() || outer_lead.is_zero() {
        return Err(Error::Degenerate(
            "Q has a vanishing leading coefficient".into(),
        ));
    }
    let rho: Vec<Rational> = (0..=g)
        .map(|j| data.q_inner.coeff(j) / &inner_lead)
        .collect();
    let rho_bar: Vec<Rational> = (0..=g)
        .map(|j| data.q_outer.coeff(j) / &outer_lead)
        .collect();
    let ratio = &data.d / &data.s0;

    let mut s: Vec<Rational> = Vec::with_capacity(count);
    s.push(data.s0.clone());
    // conv[m] = Σ_{i=0}^{m} s_i s_{m-i}, filled as s grows.
    let mut conv: Vec<Rational> = Vec::with_capacity(count);
    for j in 1..count {
        let m = j - 1;
        conv.push((0..=m).map(|i| &s[i] * &s[m - i]).sum());
        let mut t = Rational::zero();
        for i in 2..=g + 1 {
            if j >= i {
                t -= &(&shift[g + 1 - i] * &s[j - i]);
            }
        }
        let mut quad = if j >= 2 {
            conv[j - 2].clone()
        } else {
            Rational::zero()
        };
        for l in 3..=g + 2 {
            if j >= l {
                quad += &(&rho[g + 2 - l] * &conv[j - l]);
            }
        }
        t += &(&ratio * &quad);
        if j <= g {
            t += &(&data.s0 * &rho_bar[g - j]);
        }
        s.push(t);
    }
    Ok(s)
}

/// Moments `s_0..s_{count-1}` of `G` at `∞₁`, from the quadratic recursion.
pub fn moments_forward(exp: &Expansion, count: usize) -> Result<MomentSeq> {
    let curve = exp.curve();
    let seed = exp.seed();
    let line1 = step_forward(curve, seed)?;
    let data = RecursionData {
        genus: curve.genus(),
        a: curve.a(),
        p: &line1.p,
        q_inner: &seed.q,
        q_outer: &line1.q,
        d: line1.d.clone(),
        s0: &line1.u * &Rational::frac(1, 2),
    };
    Ok(MomentSeq {
        direction: Direction::Forward,
        s: run_recursion(&data, count)?,
    })
}

/// Moments `s†_0..s†_{count-1}` of `G† = Y_0` at `∞₂`.
pub fn moments_backward(exp: &Expansion, count: usize) -> Result<MomentSeq> {
    let curve = exp.curve();
    let seed = exp.seed();
    let g = curve.genus();
    let u_prev = seed.u_prev(g);
    if u_prev.is_zero() {
        return Err(Error::Singular { index: 0 });
    }
    let data = RecursionData {
        genus: g,
        a: curve.a(),
        p: &seed.p,
        q_inner: &seed.q,
        q_outer: &seed.q_prev,
        d: seed.d.clone(),
        s0: -(&u_prev * &Rational::frac(1, 2)),
    };
    Ok(MomentSeq {
        direction: Direction::Backward,
        s: run_recursion(&data, count)?,
    })
}

/// Moments read directly off the series expansion; an independent route
/// used to cross-check the recursion.
pub fn moments_from_series(
    exp: &Expansion,
    count: usize,
    direction: Direction,
) -> Result<MomentSeq> {
    let tail = exp.expand_g(count, direction.branch())?;
    Ok(MomentSeq {
        direction,
        s: tail.coeffs().to_vec(),
    })
}
