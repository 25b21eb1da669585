use serde::{Deserialize, Serialize};

use super::{moments_backward, moments_forward, HankelTable};
use crate::cfrac::{CFLine, Expansion};
use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Gauge `τ_n → a·b^n·τ_n`, `τ*_n → a·b^n·(τ*_n + c·τ_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gauge {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Gauge {
    pub fn identity() -> Self {
        Gauge {
            a: Rational::one(),
            b: Rational::one(),
            c: Rational::zero(),
        }
    }

    /// `other` applied after `self`.
    pub fn then(&self, other: &Gauge) -> Gauge {
        Gauge {
            a: &self.a * &other.a,
            b: &self.b * &other.b,
            c: &self.c + &other.c,
        }
    }
}

/// Two-sided tau sequence `τ_n`, `τ*_n` for `n = start .. start + len`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauSeq {
    pub start: i64,
    pub tau: Vec<Rational>,
    pub tau_star: Vec<Rational>,
    /// Gauge applied relative to the glued normalization.
    pub gauge: Gauge,
}

impl TauSeq {
    pub fn end(&self) -> i64 {
        self.start + self.tau.len() as i64
    }

    pub fn tau(&self, n: i64) -> Option<&Rational> {
        usize::try_from(n - self.start)
            .ok()
            .and_then(|i| self.tau.get(i))
    }

    pub fn tau_star(&self, n: i64) -> Option<&Rational> {
        usize::try_from(n - self.start)
            .ok()
            .and_then(|i| self.tau_star.get(i))
    }

    /// `d_n = τ_nτ_{n-2}/τ_{n-1}^2`.
    pub fn d(&self, n: i64) -> Result<Rational> {
        let get = |k: i64| {
            self.tau(k)
                .ok_or(Error::InsufficientData { needed: 1, got: 0 })
        };
        let den = get(n - 1)? * get(n - 1)?;
        (get(n)? * get(n - 2)?).checked_div(&den)
    }

    /// `v_n = τ*_{n-1}/τ_{n-1} - τ*_n/τ_n`.
    pub fn v(&self, n: i64) -> Result<Rational> {
        let get = |k: i64| {
            self.tau(k)
                .ok_or(Error::InsufficientData { needed: 1, got: 0 })
        };
        let star = |k: i64| {
            self.tau_star(k)
                .ok_or(Error::InsufficientData { needed: 1, got: 0 })
        };
        Ok(star(n - 1)?.checked_div(get(n - 1)?)? - star(n)?.checked_div(get(n)?)?)
    }

    pub fn apply_gauge(&self, g: &Gauge) -> Result<TauSeq> {
        if g.a.is_zero() || g.b.is_zero() {
            return Err(Error::InvalidArgument(
                "gauge factors a and b must be nonzero".into(),
            ));
        }
        let mut tau = Vec::with_capacity(self.tau.len());
        let mut tau_star = Vec::with_capacity(self.tau.len());
        for (i, (t, ts)) in self.tau.iter().zip(&self.tau_star).enumerate() {
            let n = self.start + i as i64;
            let factor = &g.a * &g.b.pow(n)?;
            tau_star.push(&factor * &(ts + &(&g.c * t)));
            tau.push(factor * t);
        }
        Ok(TauSeq {
            start: self.start,
            tau,
            tau_star,
            gauge: self.gauge.then(g),
        })
    }

    /// Checks that `d_n` and `v_n` computed from the sequence agree with the
    /// given lines wherever both are defined; returns the number of checks.
    pub fn reproduces(&self, lines: &[CFLine]) -> Result<usize> {
        let mut checked = 0;
        for line in lines {
            let n = line.n;
            if n - 2 >= self.start && n < self.end() {
                let d = self.d(n)?;
                if d != line.d {
                    return Err(Error::VerificationFailed(format!(
                        "d_{n}: tau gives {d}, expansion gives {}",
                        line.d
                    )));
                }
                checked += 1;
            }
            if n > self.start && n < self.end() {
                let v = self.v(n)?;
                if v != line.v {
                    return Err(Error::VerificationFailed(format!(
                        "v_{n}: tau gives {v}, expansion gives {}",
                        line.v
                    )));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }

    /// `τ_n` for `n` in `[lo, hi)`, if the whole range is present.
    pub fn window(&self, lo: i64, hi: i64) -> Option<Vec<Rational>> {
        (lo..hi).map(|n| self.tau(n).cloned()).collect()
    }
}

/// Glues the Hankel tables at both points at infinity into one sequence:
/// `τ_n = Δ_n` for `0 ≤ n ≤ forward`, and
/// `τ_n = (-1)^n (2/u_0)^{2n+1} Δ†_{-n-1}` for `-backward-1 ≤ n ≤ -1`.
///
/// `τ*_n = Δ*_n` for `n ≥ 0` and `τ*_n = τ_n (v_0 - Δ†*_{-n-1}/Δ†_{-n-1})`
/// for `n ≤ -1`, which is the choice that makes `v_0` come out right.
pub fn glue_tau(exp: &Expansion, forward: usize, backward: usize) -> Result<TauSeq> {
    let seed = exp.seed();
    let u0 = &seed.u;
    if u0.is_zero() {
        return Err(Error::Degenerate("u_0 vanishes".into()));
    }
    let fwd = HankelTable::from_moments(&moments_forward(exp, 2 * forward)?.s, forward)?;
    let bwd = HankelTable::from_moments(&moments_backward(exp, 2 * backward + 2)?.s, backward + 1)?;
    let ratio = Rational::from_int(2) / u0;
    let start = -(backward as i64) - 1;
    let mut tau = Vec::new();
    let mut tau_star = Vec::new();
    for n in start..0 {
        let k = (-n - 1) as usize;
        let sign = if n % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let t = sign * ratio.pow(2 * n + 1)? * &bwd.delta[k];
        let shifted = bwd.delta_star[k].checked_div(&bwd.delta[k])?;
        tau_star.push(&t * &(&seed.v - &shifted));
        tau.push(t);
    }
    tau.extend(fwd.delta.iter().cloned());
    tau_star.extend(fwd.delta_star.iter().cloned());
    Ok(TauSeq {
        start,
        tau,
        tau_star,
        gauge: Gauge::identity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};
    use crate::moments::tests::{example3, example4};

    #[test]
    fn glued_example45_window() {
        let exp = example4();
        let t = glue_tau(&exp, 7, 8).unwrap();
        let expected: Vec<Rational> = [
            562196701i64,
            6993274,
            127610,
            4091,
            303,
            28,
            5,
            2,
            1,
            1,
            2,
            6,
            31,
            319,
            5810,
            147719,
        ]
        .iter()
        .map(|&x| int(x))
        .collect();
        assert_eq!(t.window(-8, 8).unwrap(), expected);
        assert_eq!(t.tau(-9).unwrap(), &int(89628659609));
    }

    #[test]
    fn glued_sequence_reproduces_both_directions() {
        for exp in [example3(), example4()] {
            let t = glue_tau(&exp, 8, 8).unwrap();
            let lines = exp.window(8, 8).unwrap();
            let checked = t.reproduces(&lines).unwrap();
            assert!(checked >= 30, "{checked}");
            // Seam: n = 0 and n = 1 both need values from both tables.
            assert_eq!(t.d(0).unwrap(), exp.seed().d);
            assert_eq!(t.d(1).unwrap(), lines.iter().find(|l| l.n == 1).unwrap().d);
            assert_eq!(t.v(0).unwrap(), exp.seed().v);
        }
    }

    #[test]
    fn gauge_leaves_lines_unchanged() {
        let exp = example4();
        let t = glue_tau(&exp, 6, 6).unwrap();
        let g = Gauge {
            a: frac(-3, 7),
            b: frac(5, 2),
            c: frac(11, 3),
        };
        let gt = t.apply_gauge(&g).unwrap();
        let lines = exp.window(6, 6).unwrap();
        assert_eq!(
            gt.reproduces(&lines).unwrap(),
            t.reproduces(&lines).unwrap()
        );
        assert_eq!(gt.gauge, g);
        assert!(t
            .apply_gauge(&Gauge {
                a: int(0),
                b: int(1),
                c: int(0)
            })
            .is_err());
    }

    #[test]
    fn example3_glued_is_somos4_up_to_gauge() {
        // The two-sided sequence ...,2,1,1,1,1,2,3,7,... has the same d_n stream.
        let exp = example3();
        let t = glue_tau(&exp, 10, 6).unwrap();
        let offset = 12i64;
        let mut a: Vec<i64> = vec![0; 30];
        for i in 0..4 {
            a[(offset + i) as usize] = 1;
        }
        for n in (offset + 4) as usize..30 {
            a[n] = (a[n - 1] * a[n - 3] + a[n - 2] * a[n - 2]) / a[n - 4];
        }
        for n in (0..offset as usize).rev() {
            a[n] = (a[n + 1] * a[n + 3] + a[n + 2] * a[n + 2]) / a[n + 4];
        }
        // τ_k lines up with a_{k+2}.
        let mut checked = 0;
        for k in (t.start + 2)..t.end() {
            let idx = (k + 2 + offset) as usize;
            let dn = frac(a[idx] * a[idx - 2], a[idx - 1] * a[idx - 1]);
            assert_eq!(t.d(k).unwrap(), dn, "n = {k}");
            checked += 1;
        }
        assert!(checked >= 15);
    }
}
