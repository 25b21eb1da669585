//! Somos relations: the QRT reduction in genus one, Somos-4 with explicit
//! coefficients, the alternative moment recursion giving the same Hankel
//! determinants, Somos-8 detection through Casorati determinants, and a
//! general finder for the minimal Somos-k relation of a sequence.

use serde::{Deserialize, Serialize};

use crate::cfrac::Expansion;
use crate::error::{Error, Result};
use crate::exactnum::{content, Rational};
use crate::linalg::{det, hankel_leading, nullspace};
use crate::maps::G1Map;
use crate::moments::{moments_forward, HankelTable, TauSeq};

/// A finite stretch `τ_start, τ_{start+1}, …` of a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequence {
    pub start: i64,
    pub terms: Vec<Rational>,
}

impl Sequence {
    pub fn new(start: i64, terms: Vec<Rational>) -> Self {
        Sequence { start, terms }
    }

    /// One past the last index.
    pub fn end(&self) -> i64 {
        self.start + self.terms.len() as i64
    }

    pub fn get(&self, n: i64) -> Option<&Rational> {
        usize::try_from(n - self.start)
            .ok()
            .and_then(|i| self.terms.get(i))
    }

    fn at(&self, n: i64) -> Result<&Rational> {
        self.get(n).ok_or_else(|| Error::InsufficientData {
            needed: (n - self.start + 1).max(0) as usize,
            got: self.terms.len(),
        })
    }

    /// Sub-sequence on `[lo, hi)`.
    pub fn slice(&self, lo: i64, hi: i64) -> Result<Sequence> {
        let lo = lo.max(self.start);
        let hi = hi.min(self.end());
        if hi <= lo {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let a = (lo - self.start) as usize;
        let b = (hi - self.start) as usize;
        Ok(Sequence {
            start: lo,
            terms: self.terms[a..b].to_vec(),
        })
    }

    /// Longest run of nonzero terms, as a half-open index range.
    pub fn longest_nonzero_run(&self) -> (i64, i64) {
        let mut best = (self.start, self.start);
        let mut run_start = self.start;
        for (i, t) in self.terms.iter().enumerate() {
            let n = self.start + i as i64;
            if t.is_zero() {
                run_start = n + 1;
            } else if n + 1 - run_start > best.1 - best.0 {
                best = (run_start, n + 1);
            }
        }
        best
    }
}

impl From<&TauSeq> for Sequence {
    fn from(t: &TauSeq) -> Self {
        Sequence {
            start: t.start,
            terms: t.tau.clone(),
        }
    }
}

impl From<&HankelTable> for Sequence {
    fn from(t: &HankelTable) -> Self {
        Sequence {
            start: 0,
            terms: t.delta.clone(),
        }
    }
}

/// `Σ_i c_i τ_{n+k-i} τ_{n+i} = 0` for every `n` in `window`,
/// with `i = 0..=⌊k/2⌋`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SomosRelation {
    pub k: usize,
    pub coefficients: Vec<Rational>,
    /// Inclusive range of `n` on which the relation has been checked;
    /// optional in input files.
    #[serde(default = "unchecked")]
    pub window: (i64, i64),
}

fn unchecked() -> (i64, i64) {
    (0, -1)
}

impl SomosRelation {
    pub fn new(k: usize, coefficients: Vec<Rational>) -> Result<Self> {
        if coefficients.len() != k / 2 + 1 {
            return Err(Error::InvalidArgument(format!(
                "a Somos-{k} relation has {} coefficients, got {}",
                k / 2 + 1,
                coefficients.len()
            )));
        }
        if coefficients.iter().all(Rational::is_zero) {
            return Err(Error::InvalidArgument("all coefficients vanish".into()));
        }
        Ok(SomosRelation {
            k,
            coefficients,
            window: unchecked(),
        })
    }

    /// Index pairs `(k - i, i)` multiplying each coefficient.
    pub fn offsets(&self) -> Vec<(usize, usize)> {
        (0..=self.k / 2).map(|i| (self.k - i, i)).collect()
    }

    /// Divided by the content, with the first nonzero coefficient positive.
    pub fn normalized(&self) -> SomosRelation {
        let c = content(&self.coefficients);
        let lead_negative = self
            .coefficients
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(Rational::is_negative);
        let c = if lead_negative { -c } else { c };
        let coefficients = self.coefficients.iter().map(|x| x / &c).collect();
        SomosRelation {
            k: self.k,
            coefficients,
            window: self.window,
        }
    }

    /// Scaled so the first nonzero coefficient is 1.
    pub fn monic(&self) -> SomosRelation {
        let lead = self
            .coefficients
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .unwrap_or_else(Rational::one);
        let coefficients = self.coefficients.iter().map(|x| x / &lead).collect();
        SomosRelation {
            k: self.k,
            coefficients,
            window: self.window,
        }
    }

    pub fn residual(&self, seq: &Sequence, n: i64) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (c, (a, b)) in self.coefficients.iter().zip(self.offsets()) {
            if !c.is_zero() {
                acc += &(c * seq.at(n + a as i64)? * seq.at(n + b as i64)?);
            }
        }
        Ok(acc)
    }

    /// Every `n` for which `τ_n … τ_{n+k}` lie in `seq`.
    pub fn full_window(&self, seq: &Sequence) -> (i64, i64) {
        (seq.start, seq.end() - 1 - self.k as i64)
    }

    /// Checks the relation for `lo ≤ n ≤ hi`; on success records the
    /// window and returns the number of checks.
    pub fn verify(&mut self, seq: &Sequence, lo: i64, hi: i64) -> Result<usize> {
        if hi < lo {
            return Err(Error::InsufficientData {
                needed: self.k + 1,
                got: seq.terms.len(),
            });
        }
        for n in lo..=hi {
            let r = self.residual(seq, n)?;
            if !r.is_zero() {
                return Err(Error::VerificationFailed(format!(
                    "Somos-{} relation fails at n = {n} (residual {r})",
                    self.k
                )));
            }
        }
        self.window = if self.window.1 < self.window.0 {
            (lo, hi)
        } else {
            (self.window.0.min(lo), self.window.1.max(hi))
        };
        Ok((hi - lo + 1) as usize)
    }

    pub fn verify_all(&mut self, seq: &Sequence) -> Result<usize> {
        let (lo, hi) = self.full_window(seq);
        self.verify(seq, lo, hi)
    }
}

/// Row of products `τ_{n+k-i} τ_{n+i}`, `i = 0..=⌊k/2⌋`.
pub fn casorati_row(seq: &Sequence, k: usize, n: i64) -> Result<Vec<Rational>> {
    (0..=k / 2)
        .map(|i| Ok(seq.at(n + (k - i) as i64)? * seq.at(n + i as i64)?))
        .collect()
}

/// Outcome of [`qrt_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QrtReport {
    pub alpha: Rational,
    pub beta: Rational,
    pub checked: usize,
}

/// `α = u²`, `β = u²(v² + f)`.
pub fn somos4_coefficients(map: &G1Map) -> (Rational, Rational) {
    let u2 = &map.u * &map.u;
    let beta = &u2 * &(&map.v * &map.v + &map.f);
    (u2, beta)
}

/// Checks `d_{n+1} d_n² d_{n-1} = α d_n + β` along a stream of `d_n`.
pub fn qrt_check(map: &G1Map, d: &[Rational]) -> Result<QrtReport> {
    if d.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: d.len(),
        });
    }
    if let Some(i) = d.iter().position(Rational::is_zero) {
        return Err(Error::Degenerate(format!("d vanishes at position {i}")));
    }
    let (alpha, beta) = somos4_coefficients(map);
    for n in 1..d.len() - 1 {
        let lhs = &d[n + 1] * &d[n] * &d[n] * &d[n - 1];
        let rhs = &alpha * &d[n] + &beta;
        if lhs != rhs {
            return Err(Error::VerificationFailed(format!(
                "QRT relation fails at position {n}: {lhs} ≠ {rhs}"
            )));
        }
    }
    Ok(QrtReport {
        alpha,
        beta,
        checked: d.len() - 2,
    })
}

/// Checks `τ_{n+4}τ_n = α τ_{n+3}τ_{n+1} + β τ_{n+2}²` on every window of `seq`.
pub fn somos4_verify(seq: &Sequence, alpha: &Rational, beta: &Rational) -> Result<SomosRelation> {
    if seq.terms.len() < 8 {
        return Err(Error::InsufficientData {
            needed: 8,
            got: seq.terms.len(),
        });
    }
    let mut rel = SomosRelation::new(4, vec![Rational::one(), -alpha, -beta])?;
    rel.verify_all(seq)?;
    Ok(rel)
}

/// Parameters and determinants of the alternative moment recursion
/// `s̃_j = α̃ s̃_{j-1} + β̃ s̃_{j-2} + γ̃ Σ s̃_i s̃_{j-2-i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bridge {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub s0: Rational,
    pub s1: Rational,
    pub moments: Vec<Rational>,
    /// `D_n` from the alternative moments.
    pub d: Vec<Rational>,
    /// `Δ_n` from the continued-fraction moments.
    pub delta: Vec<Rational>,
}

/// Runs the alternative recursion for a genus-one expansion and compares its
/// Hankel determinants `D_0..=D_depth` with `Δ_0..=Δ_depth`.
pub fn chx_bridge(exp: &Expansion, depth: usize) -> Result<Bridge> {
    if exp.curve().genus() != 1 {
        return Err(Error::InvalidArgument(
            "the bridge is defined in genus one".into(),
        ));
    }
    let lines = exp.forward(2)?;
    let (l0, l1) = (&lines[0], &lines[1]);
    let s0 = &l1.u / &Rational::from_int(2);
    if s0.is_zero() {
        return Err(Error::Degenerate("u_1 vanishes".into()));
    }
    let s1 = -(&s0 * &(&l0.v + &l1.v));
    let alpha = Rational::from_int(-2) * &l0.v;
    let beta = &l0.d - &l1.d;
    let gamma = &l1.d / &s0;
    let count = 2 * depth.max(1);
    let mut s = vec![s0.clone(), s1.clone()];
    while s.len() < count {
        let j = s.len();
        let conv: Rational = (0..=j - 2).map(|i| &s[i] * &s[j - 2 - i]).sum();
        s.push(&alpha * &s[j - 1] + &beta * &s[j - 2] + &gamma * &conv);
    }
    s.truncate(count);
    let (d, _) = hankel_leading(&s, depth)?;
    let cf = moments_forward(exp, count)?;
    let (delta, _) = hankel_leading(&cf.s, depth)?;
    if let Some(n) = (0..=depth).find(|&n| d[n] != delta[n]) {
        return Err(Error::VerificationFailed(format!(
            "D_{n} = {} but Δ_{n} = {}",
            d[n], delta[n]
        )));
    }
    Ok(Bridge {
        alpha,
        beta,
        gamma,
        s0,
        s1,
        moments: s,
        d,
        delta,
    })
}

/// Outcome of [`somos8_detect`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Somos8Report {
    /// Detected relation; order 8, or 6 or 4 when the 5×5 system is rank
    /// deficient and a shorter relation is present.
    pub relation: SomosRelation,
    /// Centres `n` at which the 5×5 determinant was found to vanish.
    pub determinants_checked: usize,
    /// Number of `(j, n)` pairs for which the minor cross-products vanish.
    pub minor_checks: usize,
    /// `α_j/α_1` for `j = 2..=5` from signed 4×4 minors, when `α_1 ≠ 0`.
    pub ratios: Option<Vec<Rational>>,
    pub nullity: usize,
}

/// The 5×5 matrix with entries `τ_{n+4+r-j} τ_{n-4+r+j}`.
pub fn somos8_matrix(seq: &Sequence, n: i64) -> Result<Vec<Vec<Rational>>> {
    (0..5).map(|r| casorati_row(seq, 8, n - 4 + r)).collect()
}

/// Minor of the first four rows of [`somos8_matrix`] with column `j`
/// (1-based) removed.
pub fn somos8_minor(seq: &Sequence, n: i64, j: usize) -> Result<Rational> {
    let m = somos8_matrix(seq, n)?;
    let sub: Vec<Vec<Rational>> = m[..4]
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|&(c, _)| c + 1 != j)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect();
    Ok(det(&sub))
}

/// Detects a Somos-8 relation on centres `lo..=hi`: every 5×5 determinant
/// must vanish, the minor cross-products must vanish for consecutive
/// centres, and the coefficients are read off the nullspace.
///
/// The determinant at centre `n` uses `τ_{n-4} … τ_{n+8}`.
pub fn somos8_detect(seq: &Sequence, lo: i64, hi: i64) -> Result<Somos8Report> {
    if hi < lo {
        return Err(Error::InvalidArgument("empty window".into()));
    }
    let needed = (hi - lo + 13) as usize;
    if seq.get(lo - 4).is_none() || seq.get(hi + 8).is_none() {
        return Err(Error::InsufficientData {
            needed,
            got: seq.terms.len(),
        });
    }
    for n in lo..=hi {
        let d = det(&somos8_matrix(seq, n)?);
        if !d.is_zero() {
            return Err(Error::VerificationFailed(format!(
                "no Somos-8 on window: determinant at n = {n} is {d}"
            )));
        }
    }
    let mut minor_checks = 0;
    let mut minors: Vec<Vec<Rational>> = Vec::new();
    for n in lo..=hi {
        minors.push(
            (1..=5)
                .map(|j| somos8_minor(seq, n, j))
                .collect::<Result<_>>()?,
        );
    }
    for w in minors.windows(2) {
        for j in 1..5 {
            let cross = &w[0][j] * &w[1][0] - &w[1][j] * &w[0][0];
            if !cross.is_zero() {
                return Err(Error::VerificationFailed(format!(
                    "minor ratio {} is not shift invariant",
                    j + 1
                )));
            }
            minor_checks += 1;
        }
    }
    let ratios = if minors[0][0].is_zero() {
        None
    } else {
        Some(
            (1..5)
                .map(|j| {
                    let r = &minors[0][j] / &minors[0][0];
                    if j % 2 == 1 {
                        -r
                    } else {
                        r
                    }
                })
                .collect(),
        )
    };
    // Exactly the rows of the 5×5 matrices at the tested centres.
    let rows: Vec<Vec<Rational>> = (lo - 4..=hi)
        .map(|n| casorati_row(seq, 8, n))
        .collect::<Result<_>>()?;
    let nullity = nullspace(&rows, 5).len();
    let (lz, coeffs) = most_leading_zeros(&rows, 5).ok_or_else(|| {
        Error::VerificationFailed("no Somos-8 on window: Casorati rows have full rank".into())
    })?;
    let k = 8 - 2 * lz;
    let mut relation = SomosRelation::new(k, coeffs[lz..].to_vec())?.normalized();
    relation.verify(seq, lo - 4 + lz as i64, hi + lz as i64)?;
    Ok(Somos8Report {
        relation,
        determinants_checked: (hi - lo + 1) as usize,
        minor_checks,
        ratios,
        nullity,
    })
}

/// Nullspace vector of `rows` with the largest number of leading zeros.
fn most_leading_zeros(rows: &[Vec<Rational>], cols: usize) -> Option<(usize, Vec<Rational>)> {
    for lz in (0..cols).rev() {
        let tail: Vec<Vec<Rational>> = rows.iter().map(|r| r[lz..].to_vec()).collect();
        if let Some(v) = nullspace(&tail, cols - lz).into_iter().next() {
            let mut full = vec![Rational::zero(); lz];
            full.extend(v);
            return Some((lz, full));
        }
    }
    None
}

/// Knobs for [`somos_k_find`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindOptions {
    pub k_min: usize,
    pub k_max: usize,
    /// Casorati rows beyond the column count used for the nullspace.
    pub margin: usize,
    /// Trailing values of `n` kept out of the nullspace and used only to
    /// certify the relation.
    pub holdout: usize,
}

impl FindOptions {
    pub fn up_to(k_max: usize) -> Self {
        FindOptions {
            k_min: 4,
            k_max,
            margin: 2,
            holdout: 3,
        }
    }

    /// Terms needed to test order `k`.
    pub fn terms_needed(&self, k: usize) -> usize {
        k + (k / 2 + 1) + self.margin + self.holdout
    }
}

/// Default `k_max = 2^{g+1}`.
pub fn default_k_max(genus: usize) -> usize {
    1usize << (genus + 1)
}

/// Smallest `k` in `k_min..=k_max` for which the Casorati matrix of
/// `τ_{n+k-i}τ_{n+i}` over the training rows has a nullspace vector that
/// also annihilates the held-out rows. Only the longest zero-free stretch of
/// `seq` is used.
pub fn somos_k_find(seq: &Sequence, opts: &FindOptions) -> Result<Option<SomosRelation>> {
    let (lo, hi) = seq.longest_nonzero_run();
    let clean = seq.slice(lo, hi)?;
    let needed = opts.terms_needed(opts.k_max);
    if clean.terms.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: clean.terms.len(),
        });
    }
    for k in opts.k_min.max(1)..=opts.k_max {
        let last_n = clean.end() - 1 - k as i64;
        let train_last = last_n - opts.holdout as i64;
        let rows: Vec<Vec<Rational>> = (clean.start..=train_last)
            .map(|n| casorati_row(&clean, k, n))
            .collect::<Result<_>>()?;
        let cols = k / 2 + 1;
        if rows.len() < cols + opts.margin {
            continue;
        }
        let Some((_, v)) = most_leading_zeros(&rows, cols) else {
            continue;
        };
        let mut rel = SomosRelation::new(k, v)?.normalized();
        if rel.verify(&clean, clean.start, last_n).is_ok() {
            return Ok(Some(rel));
        }
    }
    Ok(None)
}
