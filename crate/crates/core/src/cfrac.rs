//! Continued-fraction expansion of `(Y + P_0)/Q_0` on `Y^2 = A^2 + 4R`.
//!
//! Each line `n` carries `P_n`, `Q_n` and `Q_{n-1}` with
//! `F - P_n^2 = Q_{n-1} Q_n`. Partial quotients are linear,
//! `a_n = 2(X + v_n)/u_n`, and the iteration runs by exact polynomial
//! division in either direction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SeedDefect};
use crate::exactnum::Rational;
use crate::upoly::{sqrt_series, Laurent, LaurentTail, Poly};

/// Curve `Y^2 = F(X) = A(X)^2 + 4R(X)` with `A` monic of degree `g+1` and no
/// `X^g` term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    genus: usize,
    a: Poly,
    r: Poly,
    f: Poly,
}

impl CurveSpec {
    /// `R` may have degree below `g`; its `X^g` coefficient is then `u = 0`.
    pub fn new(genus: usize, a: Poly, r: Poly) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidCurve("genus must be positive".into()));
        }
        if a.degree() != Some(genus + 1) || !a.is_monic() {
            return Err(Error::InvalidCurve(format!(
                "A must be monic of degree {}",
                genus + 1
            )));
        }
        if !a.coeff(genus).is_zero() {
            return Err(Error::InvalidCurve(format!(
                "A must have no X^{genus} term"
            )));
        }
        if r.degree().is_some_and(|d| d > genus) {
            return Err(Error::InvalidCurve(format!(
                "R must have degree at most {genus}"
            )));
        }
        let f = a.square().add(&r.scale(&Rational::from_int(4)));
        Ok(CurveSpec { genus, a, r, f })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn r(&self) -> &Poly {
        &self.r
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    /// Coefficient of `X^g` in `R`.
    pub fn u(&self) -> Rational {
        self.r.coeff(self.genus)
    }
}

/// Initial data `(P_0, Q_0)` of the expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedLine {
    #[serde(rename = "P0")]
    pub p0: Poly,
    #[serde(rename = "Q0")]
    pub q0: Poly,
}

impl SeedLine {
    pub fn new(p0: Poly, q0: Poly) -> Self {
        SeedLine { p0, q0 }
    }

    /// Seed written in line coordinates: `P_0 = A + δ`, `Q_0 = u_0·monic`.
    pub fn from_parts(curve: &CurveSpec, delta: &Poly, q0: Poly) -> Self {
        SeedLine {
            p0: curve.a().add(delta),
            q0,
        }
    }
}

/// One line of the expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFLine {
    pub n: i64,
    pub p: Poly,
    pub q: Poly,
    /// `Q_{n-1}`, so that `F - P^2 = q_prev · q`.
    pub q_prev: Poly,
    /// Leading coefficient of `Q_n`.
    pub u: Rational,
    /// `Q_n = u(X^g - v X^{g-1} + ...)`.
    pub v: Rational,
    /// `P_n - A = 2d X^{g-1} + ...`.
    pub d: Rational,
}

impl CFLine {
    fn build(curve: &CurveSpec, n: i64, p: Poly, q: Poly, q_prev: Poly) -> Result<Self> {
        let g = curve.genus();
        let u = q.coeff(g);
        if u.is_zero() || q.degree() != Some(g) {
            return Err(Error::Singular { index: n });
        }
        let v = -(q.coeff(g - 1) / &u);
        let d = p.sub(curve.a()).coeff(g - 1) * Rational::frac(1, 2);
        Ok(CFLine {
            n,
            p,
            q,
            q_prev,
            u,
            v,
            d,
        })
    }

    /// `u_{n-1}`, the leading coefficient of `Q_{n-1}` (may be zero at a seed).
    pub fn u_prev(&self, genus: usize) -> Rational {
        self.q_prev.coeff(genus)
    }

    /// Partial quotient `a_n = 2(X + v_n)/u_n`.
    pub fn partial_quotient(&self) -> Poly {
        let two_over_u = Rational::from_int(2) / &self.u;
        Poly::new(vec![&self.v * &two_over_u, two_over_u])
    }
}

/// Checks the seed and returns line 0 with `Q_{-1} = (F - P_0^2)/Q_0`.
pub fn validate_seed(curve: &CurveSpec, seed: &SeedLine) -> Result<CFLine> {
    let g = curve.genus();
    let delta = seed.p0.sub(curve.a());
    if delta.degree().is_some_and(|d| d + 1 > g) {
        return Err(Error::InvalidSeed(SeedDefect::WrongPDegree {
            degree: delta.degree(),
        }));
    }
    if seed.q0.degree() != Some(g) {
        return Err(Error::InvalidSeed(SeedDefect::WrongQDegree {
            degree: seed.q0.degree(),
        }));
    }
    let rhs = curve.f().sub(&seed.p0.square());
    let q_prev = rhs
        .div_exact(&seed.q0)?
        .ok_or(Error::InvalidSeed(SeedDefect::NotDivisible))?;
    CFLine::build(curve, 0, seed.p0.clone(), seed.q0.clone(), q_prev)
}

/// Line `n+1` from line `n`. Fails with `Singular { index: n+1 }` when
/// `d_{n+1} = 0`, since `Q_{n+1}` then loses its leading term.
pub fn step_forward(curve: &CurveSpec, line: &CFLine) -> Result<CFLine> {
    let p_next = line.partial_quotient().mul(&line.q).sub(&line.p);
    let rem = curve.f().sub(&p_next.square());
    let q_next = rem.div_exact(&line.q)?.ok_or_else(|| {
        Error::VerificationFailed(format!(
            "Q_{} does not divide F - P_{}^2",
            line.n,
            line.n + 1
        ))
    })?;
    CFLine::build(curve, line.n + 1, p_next, q_next, line.q.clone())
}

/// Line `n-1` from line `n`. Fails with `Singular { index: n }` when `d_n = 0`.
pub fn step_backward(curve: &CurveSpec, line: &CFLine) -> Result<CFLine> {
    let g = curve.genus();
    let u_prev = line.q_prev.coeff(g);
    if u_prev.is_zero() || line.q_prev.degree() != Some(g) {
        return Err(Error::Singular { index: line.n });
    }
    // Matching the top two coefficients forces a = 2(X + v_{n-1})/u_{n-1}.
    let v_prev = -(line.q_prev.coeff(g - 1) / &u_prev);
    let two_over_u = Rational::from_int(2) / &u_prev;
    let a = Poly::new(vec![&v_prev * &two_over_u, two_over_u]);
    let p_prev = a.mul(&line.q_prev).sub(&line.p);
    let q_prev_prev = curve
        .f()
        .sub(&p_prev.square())
        .div_exact(&line.q_prev)?
        .ok_or_else(|| {
            Error::VerificationFailed(format!(
                "Q_{} does not divide F - P_{}^2",
                line.n - 1,
                line.n - 1
            ))
        })?;
    CFLine::build(curve, line.n - 1, p_prev, line.q_prev.clone(), q_prev_prev)
}

/// Which point at infinity a series is expanded at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `Y ~ +X^{g+1}`.
    Infinity1,
    /// `Y ~ -X^{g+1}`.
    Infinity2,
}

/// The curve together with its seed, stepping in both directions.
#[derive(Clone, Debug)]
pub struct Expansion {
    curve: CurveSpec,
    seed: CFLine,
}

impl Expansion {
    pub fn new(curve: CurveSpec, seed: &SeedLine) -> Result<Self> {
        let line = validate_seed(&curve, seed)?;
        Ok(Expansion { curve, seed: line })
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    pub fn seed(&self) -> &CFLine {
        &self.seed
    }

    /// Lines `0..=count`, stopping at the first singular step.
    /// The error (if any) is returned alongside the lines produced so far.
    pub fn forward_partial(&self, count: usize) -> (Vec<CFLine>, Option<Error>) {
        let mut lines = vec![self.seed.clone()];
        for _ in 0..count {
            match step_forward(&self.curve, lines.last().expect("nonempty")) {
                Ok(l) => lines.push(l),
                Err(e) => return (lines, Some(e)),
            }
        }
        (lines, None)
    }

    /// Lines `0..=count`.
    pub fn forward(&self, count: usize) -> Result<Vec<CFLine>> {
        match self.forward_partial(count) {
            (lines, None) => Ok(lines),
            (_, Some(e)) => Err(e),
        }
    }

    /// Lines `0, -1, ..., -count`, stopping at the first singular step.
    pub fn backward_partial(&self, count: usize) -> (Vec<CFLine>, Option<Error>) {
        let mut lines = vec![self.seed.clone()];
        for _ in 0..count {
            match step_backward(&self.curve, lines.last().expect("nonempty")) {
                Ok(l) => lines.push(l),
                Err(e) => return (lines, Some(e)),
            }
        }
        (lines, None)
    }

    /// Lines `0, -1, ..., -count`.
    pub fn backward(&self, count: usize) -> Result<Vec<CFLine>> {
        match self.backward_partial(count) {
            (lines, None) => Ok(lines),
            (_, Some(e)) => Err(e),
        }
    }

    /// Lines `-back..=fwd` in increasing order of `n`.
    pub fn window(&self, back: usize, fwd: usize) -> Result<Vec<CFLine>> {
        let mut lines = self.backward(back)?;
        lines.reverse();
        lines.extend(self.forward(fwd)?.into_iter().skip(1));
        Ok(lines)
    }

    /// `P_1 = a_0 Q_0 - P_0`, defined even when line 1 itself is singular.
    pub fn p1(&self) -> Poly {
        self.seed
            .partial_quotient()
            .mul(&self.seed.q)
            .sub(&self.seed.p)
    }

    /// `√F` at the requested branch, known down to `X^{low}`.
    fn root(&self, low: i64) -> Result<Laurent> {
        let g = self.curve.genus() as i64;
        let terms = (g + 1 - low + 1) as usize;
        sqrt_series(self.curve.f(), terms)
    }

    /// `G = (Y - P_1)/Q_0` at `∞₁`, or `G† = (Y + P_0)/Q_0` at `∞₂`, to
    /// `order` negative powers.
    pub fn expand_g(&self, order: usize, branch: Branch) -> Result<LaurentTail> {
        let g = self.curve.genus() as i64;
        // Dividing by Q_0 costs g orders; keep a margin for cancellation.
        let low = g - order as i64 - (g + 4);
        let root = self.root(low)?;
        let numer = match branch {
            Branch::Infinity1 => root.sub(&Laurent::from_poly(&self.p1(), low)),
            Branch::Infinity2 => root.neg().add(&Laurent::from_poly(&self.seed.p, low)),
        };
        let q0 = Laurent::from_poly(&self.seed.q, low);
        numer.div(&q0)?.tail(order)
    }

    /// Complete quotient `Y_n = (Y + P_n)/Q_n` at `∞₁`, known down to `X^{low}`.
    pub fn complete_quotient(&self, line: &CFLine, low: i64) -> Result<Laurent> {
        let g = self.curve.genus() as i64;
        let work = low - g - 2;
        let numer = self.root(work)?.add(&Laurent::from_poly(&line.p, work));
        Ok(numer.div(&Laurent::from_poly(&line.q, work))?.truncate(low))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};

    pub(crate) fn example3() -> Expansion {
        let curve =
            CurveSpec::new(1, Poly::from_ints(&[-3, 0, 1]), Poly::from_ints(&[-2, -1])).unwrap();
        let seed = SeedLine::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[-2, -2]));
        Expansion::new(curve, &seed).unwrap()
    }

    pub(crate) fn example4() -> Expansion {
        let curve = CurveSpec::new(
            2,
            Poly::from_ints(&[-1, -5, 0, 1]),
            Poly::from_ints(&[-3, -2, -1]),
        )
        .unwrap();
        // d0 = 5/4, e0 = 3/5: P0 - A = 2 d0 (X + e0); Q0 = -4 (X^2 + X/2 - 3/2).
        let p0 = curve.a().add(&Poly::new(vec![frac(3, 2), frac(5, 2)]));
        let q0 = Poly::new(vec![int(6), int(-2), int(-4)]);
        Expansion::new(curve, &SeedLine::new(p0, q0)).unwrap()
    }

    #[test]
    fn example3_seed_values() {
        let e = example3();
        let s = e.seed();
        assert_eq!(
            (s.u.clone(), s.v.clone(), s.d.clone()),
            (int(-2), int(-1), int(1))
        );
    }

    #[test]
    fn example3_first_step() {
        let e = example3();
        let lines = e.forward(5).unwrap();
        let dv: Vec<_> = lines.iter().map(|l| (l.d.clone(), l.v.clone())).collect();
        assert_eq!(
            dv,
            vec![
                (int(1), int(-1)),
                (int(1), int(0)),
                (int(2), frac(-1, 2)),
                (frac(3, 4), frac(-5, 6)),
                (frac(14, 9), frac(4, 21)),
                (frac(69, 49), frac(-145, 161)),
            ]
        );
    }

    #[test]
    fn example3_divisibility_after_one_step() {
        let e = example3();
        let l1 = step_forward(e.curve(), e.seed()).unwrap();
        let (_, r) = e
            .curve()
            .f()
            .sub(&l1.p.square())
            .divmod(&e.seed().q)
            .unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn non_divisible_seed_is_rejected() {
        let e = example3();
        let seed = SeedLine::new(e.curve().a().clone(), Poly::from_ints(&[1, 1]));
        let err = validate_seed(e.curve(), &seed).unwrap_err();
        assert!(matches!(err, Error::InvalidSeed(SeedDefect::NotDivisible)));
    }

    #[test]
    fn wrong_degrees_are_rejected() {
        let e = example3();
        let bad_p = SeedLine::new(Poly::from_ints(&[-1, 1, 1]), Poly::from_ints(&[-2, -2]));
        assert!(matches!(
            validate_seed(e.curve(), &bad_p),
            Err(Error::InvalidSeed(SeedDefect::WrongPDegree {
                degree: Some(1)
            }))
        ));
        let bad_q = SeedLine::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[-2]));
        assert!(matches!(
            validate_seed(e.curve(), &bad_q),
            Err(Error::InvalidSeed(SeedDefect::WrongQDegree {
                degree: Some(0)
            }))
        ));
    }

    #[test]
    fn example4_seed_and_backward_step() {
        let e = example4();
        let s = e.seed();
        assert_eq!(
            (s.u.clone(), s.v.clone(), s.d.clone()),
            (int(-4), frac(-1, 2), frac(5, 4))
        );
        let back = step_backward(e.curve(), s).unwrap();
        assert_eq!(back.n, -1);
        assert_eq!(back.v, frac(-1, 10));
        // w_{-1} = Q_{-1}(0)/u_{-1}
        assert_eq!(&back.q.coeff(0) / &back.u, frac(-3, 2));
        assert_eq!(
            back.q,
            Poly::new(vec![frac(-15, 8), frac(1, 8), frac(5, 4)])
        );
    }

    #[test]
    fn round_trip_is_exact() {
        for e in [example3(), example4()] {
            let lines = e.forward(6).unwrap();
            for l in &lines[1..] {
                let back = step_backward(e.curve(), l).unwrap();
                let again = step_forward(e.curve(), &back).unwrap();
                assert_eq!(&again, l);
            }
            let b = step_backward(e.curve(), e.seed()).unwrap();
            assert_eq!(&step_forward(e.curve(), &b).unwrap(), e.seed());
        }
    }

    #[test]
    fn line_invariants() {
        for e in [example3(), example4()] {
            let g = e.curve().genus();
            for l in e.window(6, 8).unwrap() {
                assert_eq!(e.curve().f().sub(&l.p.square()), l.q_prev.mul(&l.q));
                let four_d = &l.d * &int(4);
                assert!((four_d + &l.u * &l.u_prev(g)).is_zero());
            }
        }
    }

    #[test]
    fn partial_quotients_match_series_floor() {
        for e in [example3(), example4()] {
            for l in e.forward(10).unwrap() {
                let y = e.complete_quotient(&l, -2).unwrap();
                assert_eq!(y.polynomial_part().unwrap(), l.partial_quotient());
            }
        }
    }

    #[test]
    fn example3_series() {
        let g = example3().expand_g(6, Branch::Infinity1).unwrap();
        assert_eq!(
            g.coeffs(),
            &[int(1), int(0), int(2), int(1), int(6), int(7)]
        );
    }

    #[test]
    fn example4_series() {
        let g = example4().expand_g(6, Branch::Infinity1).unwrap();
        assert_eq!(
            g.coeffs(),
            &[int(1), int(0), int(2), int(0), int(7), int(2)]
        );
    }

    #[test]
    fn example5_series() {
        let g = example4().expand_g(3, Branch::Infinity2).unwrap();
        assert_eq!(g.coeffs(), &[frac(-5, 8), frac(-1, 16), frac(-45, 32)]);
    }

    #[test]
    fn inverting_y1_gives_g() {
        let e = example3();
        let l1 = step_forward(e.curve(), e.seed()).unwrap();
        let y1 = e.complete_quotient(&l1, -8).unwrap();
        let g = crate::upoly::series_invert(&y1, 8).unwrap();
        assert_eq!(g.top(), -1);
        assert_eq!(
            &g.terms()[..6],
            &[int(1), int(0), int(2), int(1), int(6), int(7)]
        );
    }

    #[test]
    fn quadratic_identity_for_g() {
        // P_1 G + Q_0 G^2 / 2 = Q_1 / 2 up to truncation.
        for e in [example3(), example4()] {
            let n = 12;
            let g = e.expand_g(n, Branch::Infinity1).unwrap().to_laurent();
            let low = -(n as i64);
            let l1 = step_forward(e.curve(), e.seed()).unwrap();
            let half = frac(1, 2);
            let lhs = Laurent::from_poly(&l1.p, low).mul(&g).add(
                &Laurent::from_poly(&e.seed().q, low)
                    .mul(&g)
                    .mul(&g)
                    .scale(&half),
            );
            let rhs = Laurent::from_poly(&l1.q, low).scale(&half);
            let diff = lhs.sub(&rhs);
            assert!(diff.is_zero_to_precision(), "{diff:?}");
        }
    }

    #[test]
    fn perfect_square_curve_terminates() {
        let a = Poly::from_ints(&[-1, -5, 0, 1]);
        let curve = CurveSpec::new(2, a.clone(), Poly::zero()).unwrap();
        let seed = SeedLine::new(a, Poly::from_ints(&[1, 2, 3]));
        let e = Expansion::new(curve, &seed).unwrap();
        assert!(e.seed().d.is_zero());
        assert!(matches!(
            step_backward(e.curve(), e.seed()),
            Err(Error::Singular { index: 0 })
        ));
        let l1 = step_forward(e.curve(), e.seed()).unwrap();
        // F - P_1^2 = (A - P_1)(A + P_1) = Q_0 Q_1.
        let split = e.curve().a().sub(&l1.p).mul(&e.curve().a().add(&l1.p));
        assert_eq!(split, e.seed().q.mul(&l1.q));
        let (lines, err) = e.forward_partial(10);
        assert!(matches!(err, Some(Error::Singular { .. })));
        assert!(lines.len() <= 4);
    }

    #[test]
    fn invalid_curves() {
        assert!(CurveSpec::new(1, Poly::from_ints(&[-3, 1, 1]), Poly::from_ints(&[1])).is_err());
        assert!(CurveSpec::new(1, Poly::from_ints(&[-3, 0, 2]), Poly::from_ints(&[1])).is_err());
        assert!(
            CurveSpec::new(1, Poly::from_ints(&[-3, 0, 1]), Poly::from_ints(&[1, 1, 1])).is_err()
        );
        assert!(CurveSpec::new(0, Poly::from_ints(&[0, 1]), Poly::zero()).is_err());
    }
}
