//! Exact dense linear algebra over the rationals.

use crate::error::{Error, Result};
use crate::exactnum::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Determinant by fraction-free elimination with row pivoting.
pub fn det(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    if n == 0 {
        return Rational::one();
    }
    let mut a: Matrix = matrix.to_vec();
    let mut sign = false;
    let mut prev = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Determinant of the Hankel minor `(s[i + j])` for the given row and column
/// index sets.
pub fn hankel_minor(s: &[Rational], rows: &[usize], cols: &[usize]) -> Result<Rational> {
    debug_assert_eq!(rows.len(), cols.len());
    let need =
        rows.iter().max().copied().unwrap_or(0) + cols.iter().max().copied().unwrap_or(0) + 1;
    if !rows.is_empty() && s.len() < need {
        return Err(Error::InsufficientData {
            needed: need,
            got: s.len(),
        });
    }
    let m: Matrix = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| s[i + j].clone()).collect())
        .collect();
    Ok(det(&m))
}

/// Leading minors `Δ_n = det(s_{i+j})_{0≤i,j<n}` and the shifted minors
/// `Δ*_n` (last column advanced by one) for `n = 0..=size`.
///
/// One fraction-free pass over the `size × (size+1)` Hankel array yields both
/// sequences: after `k` elimination steps, the pivot is `Δ_{k+1}` and its right
/// neighbour is `Δ*_{k+1}`. A zero pivot stops the pass; the remaining values
/// are computed one determinant at a time.
pub fn hankel_leading(s: &[Rational], size: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let needed = 2 * size;
    if s.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: s.len(),
        });
    }
    let mut delta = vec![Rational::one()];
    let mut star = vec![Rational::zero()];
    if size == 0 {
        return Ok((delta, star));
    }
    let cols = size + 1;
    let mut a: Matrix = (0..size)
        .map(|i| {
            (0..cols)
                .map(|j| s.get(i + j).cloned().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect();
    let mut prev = Rational::one();
    let mut k = 0;
    while k < size {
        delta.push(a[k][k].clone());
        // Δ*_{k+1} uses column k+1, which for k+1 = size touches s[2·size - 1].
        star.push(a[k][k + 1].clone());
        if k + 1 == size || a[k][k].is_zero() {
            k += 1;
            break;
        }
        for i in k + 1..size {
            for j in k + 1..cols {
                let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
        k += 1;
    }
    for n in k + 1..=size {
        let rows: Vec<usize> = (0..n).collect();
        let mut shifted: Vec<usize> = (0..n - 1).collect();
        shifted.push(n);
        delta.push(hankel_minor(s, &rows, &rows)?);
        star.push(hankel_minor(s, &rows, &shifted)?);
    }
    Ok((delta, star))
}

/// Hankel determinants `H[k][m] = det(s_{m+i+j})_{0≤i,j<k}` by Dodgson
/// condensation, for `k = 0..=depth` and every `m` the data allows.
///
/// Fails with `Degenerate` when an interior divisor vanishes.
pub fn dodgson_hankel(s: &[Rational], depth: usize) -> Result<Vec<Vec<Rational>>> {
    let mut table: Vec<Vec<Rational>> = vec![vec![Rational::one(); s.len() + 1], s.to_vec()];
    for k in 1..depth {
        let cur = &table[k];
        let below = &table[k - 1];
        if cur.len() < 3 {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() - 2);
        for m in 0..cur.len() - 2 {
            let divisor = &below[m + 2];
            if divisor.is_zero() {
                return Err(Error::Degenerate(format!(
                    "condensation divisor H[{}][{}] vanishes",
                    k - 1,
                    m + 2
                )));
            }
            let num = &cur[m] * &cur[m + 2] - &cur[m + 1] * &cur[m + 1];
            next.push(num / divisor);
        }
        table.push(next);
    }
    table.truncate(depth + 1);
    Ok(table)
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(matrix: &mut Matrix) -> Vec<usize> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !matrix[i][c].is_zero()) else {
            continue;
        };
        matrix.swap(r, p);
        let inv = matrix[r][c].recip().expect("nonzero pivot");
        for x in matrix[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = matrix[r].clone();
        for (i, row) in matrix.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    rref(&mut matrix.to_vec()).len()
}

/// Basis of the right nullspace, one vector per free column, in the order of
/// the free columns. Each vector has a 1 in its free column.
pub fn nullspace(matrix: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = matrix.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][fc].clone();
            }
            v
        })
        .collect()
}

pub fn mat_vec(matrix: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(&m(&[&[2, 1], &[1, 3]])), int(5));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), int(0));
        assert_eq!(det(&[]), int(1));
        let a = m(&[&[0, 2, 1], &[3, 0, 1], &[1, 1, 0]]);
        // 0(0-1) - 2(0-1) + 1(3-0) = 5
        assert_eq!(det(&a), int(5));
    }

    #[test]
    fn leading_minors_match_direct() {
        let s: Vec<Rational> = [1, 0, 2, 1, 6, 7, 24, 41, 115, 236, 613, 1380]
            .iter()
            .map(|&x| int(x))
            .collect();
        let (d, st) = hankel_leading(&s, 6).unwrap();
        assert_eq!(
            d,
            [1, 1, 2, 3, 7, 23, 59]
                .iter()
                .map(|&x| int(x))
                .collect::<Vec<_>>()
        );
        for n in 1..=6 {
            let rows: Vec<usize> = (0..n).collect();
            let mut cols: Vec<usize> = (0..n - 1).collect();
            cols.push(n);
            assert_eq!(st[n], hankel_minor(&s, &rows, &cols).unwrap());
        }
    }

    #[test]
    fn leading_minors_with_zero_pivot() {
        // s = 0, 1, 0, ... makes Δ_1 = 0.
        let s: Vec<Rational> = [0, 1, 1, 2, 3, 5, 8, 13].iter().map(|&x| int(x)).collect();
        let (d, st) = hankel_leading(&s, 4).unwrap();
        for n in 1..=4 {
            let rows: Vec<usize> = (0..n).collect();
            let mut cols: Vec<usize> = (0..n - 1).collect();
            cols.push(n);
            assert_eq!(d[n], hankel_minor(&s, &rows, &rows).unwrap());
            assert_eq!(st[n], hankel_minor(&s, &rows, &cols).unwrap());
        }
    }

    #[test]
    fn insufficient_moments() {
        let s = vec![int(1); 5];
        assert!(matches!(
            hankel_leading(&s, 3),
            Err(Error::InsufficientData { needed: 6, got: 5 })
        ));
    }

    #[test]
    fn condensation_agrees() {
        let s: Vec<Rational> = [1, 0, 2, 1, 6, 7, 24, 41, 115, 236, 613, 1380]
            .iter()
            .map(|&x| int(x))
            .collect();
        let t = dodgson_hankel(&s, 6).unwrap();
        let (d, _) = hankel_leading(&s, 6).unwrap();
        for k in 0..=6 {
            assert_eq!(t[k][0], d[k]);
        }
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&a, v).iter().all(Rational::is_zero));
        }
        assert_eq!(rank(&a), 1);
        assert_eq!(ns[0], vec![int(-2), int(1), int(0)]);
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        let a = vec![vec![frac(1, 2), int(0)], vec![int(0), frac(3, 5)]];
        assert!(nullspace(&a, 2).is_empty());
    }
}
