//! Pointwise checks for Poisson structures given as coefficient matrices.
//!
//! A structure supplies its bracket matrix `Π(x)` over any [`Scalar`], so
//! evaluating it at dual numbers yields the derivatives needed for the
//! Jacobi identity and for pushing the bracket forward along a map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Dual, Rational, Scalar};

pub trait PoissonMatrix {
    fn dim(&self) -> usize;
    /// `Π_{ij}(x) = {x_i, x_j}`.
    fn matrix<T: Scalar>(&self, x: &[T]) -> Result<Vec<Vec<T>>>;
}

pub trait PointMap {
    fn apply<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>>;
}

/// `∇aᵀ Π ∇b` for explicit gradients.
pub fn bracket_from_gradients(
    pi: &[Vec<Rational>],
    grad_a: &[Rational],
    grad_b: &[Rational],
) -> Rational {
    let mut acc = Rational::zero();
    for (i, ga) in grad_a.iter().enumerate() {
        if ga.is_zero() {
            continue;
        }
        for (j, gb) in grad_b.iter().enumerate() {
            if gb.is_zero() || pi[i][j].is_zero() {
                continue;
            }
            acc += &(ga * &pi[i][j] * gb);
        }
    }
    acc
}

/// `{a, b}(x)` for functions given as dual-number programs.
pub fn eval_bracket<S, A, B>(structure: &S, a: A, b: B, x: &[Rational]) -> Result<Rational>
where
    S: PoissonMatrix,
    A: FnOnce(&[Dual]) -> Result<Dual>,
    B: FnOnce(&[Dual]) -> Result<Dual>,
{
    let (_, ga) = crate::exactnum::gradient(a, x)?;
    let (_, gb) = crate::exactnum::gradient(b, x)?;
    let pi = structure.matrix(x).map_err(|e| pole_at(e, x))?;
    Ok(bracket_from_gradients(&pi, &ga, &gb))
}

/// Bracket of two functions whose values already carry gradients with
/// respect to the structure's coordinates.
pub fn bracket_of_duals(pi: &[Vec<Rational>], a: &Dual, b: &Dual) -> Rational {
    let n = pi.len();
    bracket_from_gradients(pi, &a.gradient(n), &b.gradient(n))
}

/// Location and size of the first failure of a pointwise check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub indices: Vec<usize>,
    pub value: Rational,
}

pub fn antisymmetry_defect(pi: &[Vec<Rational>]) -> Option<Defect> {
    for i in 0..pi.len() {
        for j in i..pi.len() {
            let s = &pi[i][j] + &pi[j][i];
            if !s.is_zero() {
                return Some(Defect {
                    indices: vec![i, j],
                    value: s,
                });
            }
        }
    }
    None
}

/// Cyclic sum `Σ_l Π_il ∂_lΠ_jk + Π_jl ∂_lΠ_ki + Π_kl ∂_lΠ_ij` at `x`.
pub fn jacobi_defect<S: PoissonMatrix>(structure: &S, x: &[Rational]) -> Result<Option<Defect>> {
    let n = structure.dim();
    let vars = Dual::variables(x);
    let pi_dual = structure.matrix(&vars).map_err(|e| pole_at(e, x))?;
    let pi: Vec<Vec<Rational>> = pi_dual
        .iter()
        .map(|r| r.iter().map(|d| d.value.clone()).collect())
        .collect();
    let term = |i: usize, j: usize, k: usize| -> Rational {
        let grad = &pi_dual[j][k];
        (0..n)
            .filter(|&l| !pi[i][l].is_zero())
            .map(|l| &pi[i][l] * &grad.deriv(l))
            .sum()
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = term(i, j, k) + term(j, k, i) + term(k, i, j);
                if !s.is_zero() {
                    return Ok(Some(Defect {
                        indices: vec![i, j, k],
                        value: s,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Jacobian of `map` at `x`, row `i` holding the gradient of component `i`.
pub fn jacobian<M: PointMap>(
    map: &M,
    x: &[Rational],
) -> Result<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let out = map.apply(&Dual::variables(x)).map_err(|e| pole_at(e, x))?;
    let values = out.iter().map(|d| d.value.clone()).collect();
    let jac = out.iter().map(|d| d.gradient(x.len())).collect();
    Ok((values, jac))
}

/// Compares `J Π(x) Jᵀ` with `Π(φ(x))` entrywise.
pub fn pushforward_defect<S, M>(structure: &S, map: &M, x: &[Rational]) -> Result<Option<Defect>>
where
    S: PoissonMatrix,
    M: PointMap,
{
    let (image, jac) = jacobian(map, x)?;
    let pi = structure.matrix(x).map_err(|e| pole_at(e, x))?;
    let pi_image = structure.matrix(&image).map_err(|e| pole_at(e, &image))?;
    let n = jac.len();
    for i in 0..n {
        for j in 0..n {
            let lhs = bracket_from_gradients(&pi, &jac[i], &jac[j]);
            let diff = lhs - &pi_image[i][j];
            if !diff.is_zero() {
                return Ok(Some(Defect {
                    indices: vec![i, j],
                    value: diff,
                }));
            }
        }
    }
    Ok(None)
}

fn pole_at(e: Error, x: &[Rational]) -> Error {
    match e {
        Error::DivisionByZero => Error::Pole {
            at: crate::exactnum::describe_point(x),
        },
        other => other,
    }
}
