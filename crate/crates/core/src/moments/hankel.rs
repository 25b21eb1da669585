use serde::{Deserialize, Serialize};

use super::{moments_backward, moments_forward};
use crate::cfrac::Expansion;
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::linalg::{dodgson_hankel, hankel_leading};

/// `Δ_n` and `Δ*_n` for `n = 0..=size`, with `Δ_0 = 1` and `Δ*_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HankelTable {
    pub delta: Vec<Rational>,
    pub delta_star: Vec<Rational>,
}

impl HankelTable {
    /// Needs `2·size` moments.
    pub fn from_moments(s: &[Rational], size: usize) -> Result<Self> {
        let (delta, delta_star) = hankel_leading(s, size)?;
        Ok(HankelTable { delta, delta_star })
    }

    pub fn size(&self) -> usize {
        self.delta.len() - 1
    }

    /// Compares `Δ_n` against Dodgson condensation for every `n` the
    /// condensation reaches before hitting a zero divisor.
    pub fn condensation_check(&self, s: &[Rational]) -> Result<usize> {
        let depth = self.size();
        let mut table = vec![];
        // Condensation stops at the first vanishing interior minor; use the
        // deepest prefix that succeeds.
        for d in (1..=depth).rev() {
            if let Ok(t) = dodgson_hankel(&s[..(2 * d).min(s.len())], d) {
                table = t;
                break;
            }
        }
        let reached = table.len().saturating_sub(1);
        for k in 0..=reached {
            if table[k][0] != self.delta[k] {
                return Err(Error::VerificationFailed(format!(
                    "Δ_{k}: elimination gives {}, condensation gives {}",
                    self.delta[k], table[k][0]
                )));
            }
        }
        Ok(reached)
    }
}

/// First disagreement between the continued fraction and a determinant formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: i64,
    pub quantity: String,
    pub from_expansion: Rational,
    pub from_determinants: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub checked: usize,
    pub mismatch: Option<Mismatch>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn ratio_d(t: &HankelTable, n: usize) -> Option<Rational> {
    let den = &t.delta[n - 1] * &t.delta[n - 1];
    (&t.delta[n] * &t.delta[n - 2]).checked_div(&den).ok()
}

fn ratio_v(t: &HankelTable, n: usize) -> Option<Rational> {
    let a = t.delta_star[n - 1].checked_div(&t.delta[n - 1]).ok()?;
    let b = t.delta_star[n].checked_div(&t.delta[n]).ok()?;
    Some(a - b)
}

/// Checks `d_n = Δ_nΔ_{n-2}/Δ_{n-1}^2` (`2 ≤ n ≤ depth`) and
/// `v_n = Δ*_{n-1}/Δ_{n-1} - Δ*_n/Δ_n` (`1 ≤ n ≤ depth`).
pub fn verify_theorem2(exp: &Expansion, depth: usize) -> Result<TheoremReport> {
    let lines = exp.forward(depth)?;
    let m = moments_forward(exp, 2 * depth)?;
    let table = HankelTable::from_moments(&m.s, depth)?;
    Ok(compare(
        depth,
        &table,
        |n| (&lines[n].d, &lines[n].v),
        |n| n as i64,
        |n| n as i64,
    ))
}

/// Checks `d_{1-n} = Δ†_nΔ†_{n-2}/(Δ†_{n-1})^2` and
/// `v_{-n} = Δ†*_{n-1}/Δ†_{n-1} - Δ†*_n/Δ†_n`.
pub fn verify_theorem3(exp: &Expansion, depth: usize) -> Result<TheoremReport> {
    let lines = exp.backward(depth)?;
    let m = moments_backward(exp, 2 * depth)?;
    let table = HankelTable::from_moments(&m.s, depth)?;
    // lines[k] is line -k: d_{1-n} is lines[n-1], v_{-n} is lines[n].
    Ok(compare(
        depth,
        &table,
        |n| (&lines[n.saturating_sub(1)].d, &lines[n].v),
        |n| 1 - n as i64,
        |n| -(n as i64),
    ))
}

fn compare<'a>(
    depth: usize,
    table: &HankelTable,
    line: impl Fn(usize) -> (&'a Rational, &'a Rational),
    d_index: impl Fn(usize) -> i64,
    v_index: impl Fn(usize) -> i64,
) -> TheoremReport {
    let mut checked = 0;
    for n in 1..=depth {
        let (d, v) = line(n);
        let hv = ratio_v(table, n);
        if hv.as_ref() != Some(v) {
            let mismatch = Mismatch {
                n: v_index(n),
                quantity: "v".into(),
                from_expansion: v.clone(),
                from_determinants: hv,
            };
            return TheoremReport {
                checked,
                mismatch: Some(mismatch),
            };
        }
        checked += 1;
        if n >= 2 {
            let hd = ratio_d(table, n);
            if hd.as_ref() != Some(d) {
                let mismatch = Mismatch {
                    n: d_index(n),
                    quantity: "d".into(),
                    from_expansion: d.clone(),
                    from_determinants: hd,
                };
                return TheoremReport {
                    checked,
                    mismatch: Some(mismatch),
                };
            }
            checked += 1;
        }
    }
    TheoremReport {
        checked,
        mismatch: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};
    use crate::moments::tests::{example3, example4};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn example3_hankel() {
        let m = moments_forward(&example3(), 28).unwrap();
        let t = HankelTable::from_moments(&m.s, 14).unwrap();
        assert_eq!(&t.delta[..5], &ints(&[1, 1, 2, 3, 7])[..]);
        // The Somos-4 sequence 1,1,1,1,2,3,... from its third term on.
        assert_eq!(
            t.delta,
            ints(&[
                1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209, 83313, 620297, 7869898, 126742987,
                1687054711
            ])
        );
        assert_eq!(t.condensation_check(&m.s).unwrap(), 14);
    }

    #[test]
    fn example4_hankel() {
        let m = moments_forward(&example4(), 16).unwrap();
        let t = HankelTable::from_moments(&m.s, 8).unwrap();
        assert_eq!(t.delta, ints(&[1, 1, 2, 6, 31, 319, 5810, 147719, 8526736]));
        assert_eq!(
            t.delta_star,
            ints(&[0, 0, 0, 4, 16, 200, 6987, 161401, 11022617])
        );
    }

    #[test]
    fn example5_hankel() {
        let m = moments_backward(&example4(), 12).unwrap();
        let t = HankelTable::from_moments(&m.s, 6).unwrap();
        let expected = vec![
            int(1),
            frac(-5, 8),
            frac(7, 8),
            frac(-303, 128),
            frac(4091, 512),
            frac(-63805, 1024),
            frac(3496637, 4096),
        ];
        assert_eq!(t.delta, expected);
        for w in t.delta.windows(2) {
            assert!(w[0].signum() * w[1].signum() < 0);
        }
    }

    #[test]
    fn theorem2_examples() {
        let r = verify_theorem2(&example3(), 12).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.checked, 12 + 11);
        assert!(verify_theorem2(&example4(), 10).unwrap().passed());
    }

    #[test]
    fn theorem3_examples() {
        assert!(verify_theorem3(&example4(), 8).unwrap().passed());
        assert!(verify_theorem3(&example3(), 8).unwrap().passed());
    }

    #[test]
    fn first_v_is_ratio_of_first_moments() {
        // With Δ_0 = 1, Δ*_0 = 0 the n = 1 case reads v_1 = -s_1/s_0.
        for exp in [example3(), example4()] {
            let m = moments_forward(&exp, 4).unwrap();
            let t = HankelTable::from_moments(&m.s, 2).unwrap();
            assert_eq!(t.delta[0], int(1));
            assert_eq!(t.delta_star[0], int(0));
            let v1 = exp.forward(1).unwrap()[1].v.clone();
            assert_eq!(v1, -(&m.s[1] / &m.s[0]));
            assert_eq!(ratio_v(&t, 1).unwrap(), v1);
        }
    }
}
