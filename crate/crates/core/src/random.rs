//! Deterministic sampling of curves, seeds and Lax points for property
//! checks. Everything is driven by a ChaCha stream, so a fixed seed gives
//! identical samples on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cfrac::{CurveSpec, Expansion, SeedLine};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::poisson::LaxPoint;
use crate::upoly::Poly;

pub struct Sampler {
    rng: ChaCha8Rng,
    /// Numerators are drawn from `[-height, height]`.
    pub height: i64,
    /// Denominators are drawn from `[1, denominator]`.
    pub denominator: i64,
}

const MAX_ATTEMPTS: usize = 1000;

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            height: 5,
            denominator: 3,
        }
    }

    pub fn with_bounds(seed: u64, height: i64, denominator: i64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            height: height.max(1),
            denominator: denominator.max(1),
        }
    }

    pub fn integer(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-self.height..=self.height);
        let d = self.rng.gen_range(1..=self.denominator);
        Rational::frac(n, d)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// `X^{g+1}` plus random lower terms, without an `X^g` term.
    fn a_poly(&mut self, genus: usize) -> Poly {
        let mut c: Vec<Rational> = (0..genus).map(|_| self.rational()).collect();
        c.push(Rational::zero());
        c.push(Rational::one());
        Poly::new(c)
    }

    /// Random curve and seed with `F - P_0^2` divisible by `Q_0` by
    /// construction: `R = (r + tQ_0)/4` where `r` is the remainder of
    /// `δ(2A + δ)` modulo `Q_0`. With `u_zero` the scale `t` is zero, so
    /// `R` drops to degree below `g`.
    pub fn curve_and_seed(&mut self, genus: usize, u_zero: bool) -> Result<(CurveSpec, SeedLine)> {
        if genus == 0 {
            return Err(Error::InvalidArgument("genus must be at least 1".into()));
        }
        let a = self.a_poly(genus);
        let mut delta_c: Vec<Rational> = (0..genus - 1).map(|_| self.rational()).collect();
        delta_c.push(self.nonzero_rational());
        let delta = Poly::new(delta_c);
        let mut q_c: Vec<Rational> = (0..genus).map(|_| self.rational()).collect();
        q_c.push(self.nonzero_rational());
        let q0 = Poly::new(q_c);
        let t = if u_zero {
            Rational::zero()
        } else {
            self.nonzero_rational()
        };
        let two_a = a.scale(&Rational::from_int(2));
        let (_, r) = delta.mul(&two_a.add(&delta)).divmod(&q0)?;
        let big_r = r.add(&q0.scale(&t)).scale(&Rational::frac(1, 4));
        let curve = CurveSpec::new(genus, a.clone(), big_r)?;
        let seed = SeedLine::new(a.add(&delta), q0);
        Ok((curve, seed))
    }

    /// Random valid expansion whose first `lines` forward and backward
    /// steps are nonsingular.
    pub fn expansion(&mut self, genus: usize, u_zero: bool, lines: usize) -> Result<Expansion> {
        for _ in 0..MAX_ATTEMPTS {
            let (curve, seed) = self.curve_and_seed(genus, u_zero)?;
            let Ok(exp) = Expansion::new(curve, &seed) else {
                continue;
            };
            let (fwd, e1) = exp.forward_partial(lines);
            let (_, e2) = exp.backward_partial(lines);
            if e1.is_none() && e2.is_none() && fwd.iter().all(|l| !l.d.is_zero()) {
                return Ok(exp);
            }
        }
        Err(Error::Degenerate(format!(
            "no nonsingular genus {genus} sample in {MAX_ATTEMPTS} attempts"
        )))
    }

    /// Random point with `p_g = 0` and `q_g ≠ 0`.
    pub fn lax_point(&mut self, genus: usize) -> Result<LaxPoint> {
        let mut p: Vec<Rational> = (0..genus).map(|_| self.rational()).collect();
        p.extend([Rational::zero(), Rational::one()]);
        let mut q: Vec<Rational> = (0..genus).map(|_| self.rational()).collect();
        q.push(self.nonzero_rational());
        let mut r: Vec<Rational> = (0..genus).map(|_| self.rational()).collect();
        r.push(Rational::one());
        LaxPoint::new(genus, Poly::new(p), Poly::new(q), Poly::new(r))
    }

    /// Random point from which `steps` applications of the step stay
    /// nonsingular.
    pub fn lax_orbit_point(&mut self, genus: usize, steps: usize) -> Result<LaxPoint> {
        for _ in 0..MAX_ATTEMPTS {
            let start = self.lax_point(genus)?;
            let mut p = start.clone();
            if (0..steps).all(|_| p.bt_step().map(|next| p = next).is_ok()) {
                return Ok(start);
            }
        }
        Err(Error::Degenerate(format!(
            "no nonsingular genus {genus} Lax orbit in {MAX_ATTEMPTS} attempts"
        )))
    }

    /// Random point whose `R` has `genus` distinct rational roots, returned
    /// alongside it.
    pub fn factored_lax_point(&mut self, genus: usize) -> Result<(LaxPoint, Vec<Rational>)> {
        let base = self.lax_point(genus)?;
        let mut roots: Vec<Rational> = Vec::new();
        while roots.len() < genus {
            let x = self.rational();
            if !roots.contains(&x) {
                roots.push(x);
            }
        }
        let point = LaxPoint::new(
            genus,
            base.p().clone(),
            base.q().clone(),
            Poly::from_roots(&roots),
        )?;
        Ok((point, roots))
    }
}
