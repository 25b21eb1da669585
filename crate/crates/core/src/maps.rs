//! Explicit birational maps in genus one and two, their first integrals and
//! the genus-two bracket.

use serde::{Deserialize, Serialize};

use crate::bracket::{self, Defect, PointMap, PoissonMatrix};
use crate::cfrac::{CFLine, CurveSpec};
use crate::error::{Error, Result};
use crate::exactnum::{Dual, ModP, Rational, Scalar, P61, P64};

fn singular(step: usize, reason: &str) -> Error {
    Error::SingularOrbit {
        step,
        reason: reason.to_string(),
    }
}

fn require_genus(curve: &CurveSpec, genus: usize) -> Result<()> {
    if curve.genus() != genus {
        return Err(Error::InvalidArgument(format!(
            "expected a genus {genus} curve, got genus {}",
            curve.genus()
        )));
    }
    Ok(())
}

/// Curve constants of the genus-one map: `A = X^2 + f`, `R = u(X - v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G1Map {
    pub f: Rational,
    pub u: Rational,
    pub v: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G1State {
    pub d: Rational,
    pub v: Rational,
}

impl G1State {
    pub fn new(d: Rational, v: Rational) -> Self {
        G1State { d, v }
    }

    pub fn from_line(line: &CFLine) -> Self {
        G1State {
            d: line.d.clone(),
            v: line.v.clone(),
        }
    }
}

impl G1Map {
    pub fn from_curve(curve: &CurveSpec) -> Result<Self> {
        require_genus(curve, 1)?;
        let u = curve.u();
        let v = if u.is_zero() {
            Rational::zero()
        } else {
            -curve.r().coeff(0) / &u
        };
        Ok(G1Map {
            f: curve.a().coeff(0),
            u,
            v,
        })
    }

    /// The map for which `s` lies on the level `H = -uv`; needs `u ≠ 0`.
    pub fn through(f: Rational, u: Rational, s: &G1State) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::InvalidArgument("u must be nonzero".into()));
        }
        let mut map = G1Map {
            f,
            u,
            v: Rational::zero(),
        };
        map.v = -map.conserved(s) / &map.u;
        Ok(map)
    }

    /// One step; `step` is only used to label a singular denominator.
    pub fn step_at(&self, s: &G1State, step: usize) -> Result<G1State> {
        let base = &s.d + &(&s.v * &s.v) + &self.f;
        if base.is_zero() {
            return Err(singular(step, "d + v^2 + f vanishes"));
        }
        let d = -&base;
        let v = -&s.v - &self.u / &base;
        Ok(G1State { d, v })
    }

    pub fn step(&self, s: &G1State) -> Result<G1State> {
        self.step_at(s, 0)
    }

    /// `H = d v^2 - u v + d^2 + f d`.
    pub fn conserved(&self, s: &G1State) -> Rational {
        &s.d * &s.v * &s.v - &self.u * &s.v + &s.d * &s.d + &self.f * &s.d
    }

    /// The value `H` takes on orbits of this curve.
    pub fn level(&self) -> Rational {
        -(&self.u * &self.v)
    }

    /// `start` followed by up to `steps` iterates; stops early at a
    /// singular point and returns the error alongside the partial orbit.
    pub fn orbit(&self, start: &G1State, steps: usize) -> (Vec<G1State>, Option<Error>) {
        let mut out = vec![start.clone()];
        for k in 1..=steps {
            match self.step_at(out.last().unwrap(), k) {
                Ok(next) => out.push(next),
                Err(e) => return (out, Some(e)),
            }
        }
        (out, None)
    }
}

/// Curve constants of the genus-two map: `A = X^3 + fX + g`,
/// `R = u(X^2 - vX + w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G2Map {
    pub f: Rational,
    pub g: Rational,
    pub u: Rational,
}

/// State `(d_n, e_n, v_{n-1}, w_{n-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G2State {
    pub d: Rational,
    pub e: Rational,
    pub v_prev: Rational,
    pub w_prev: Rational,
}

impl G2State {
    pub fn new(d: Rational, e: Rational, v_prev: Rational, w_prev: Rational) -> Self {
        G2State {
            d,
            e,
            v_prev,
            w_prev,
        }
    }

    pub fn coords(&self) -> [Rational; 4] {
        [
            self.d.clone(),
            self.e.clone(),
            self.v_prev.clone(),
            self.w_prev.clone(),
        ]
    }

    pub fn from_coords(x: &[Rational]) -> Result<Self> {
        match x {
            [d, e, v, w] => Ok(G2State::new(d.clone(), e.clone(), v.clone(), w.clone())),
            _ => Err(Error::InvalidArgument(format!(
                "genus two states have 4 coordinates, got {}",
                x.len()
            ))),
        }
    }

    /// Reads the state off a line of a genus-two expansion.
    pub fn from_line(curve: &CurveSpec, line: &CFLine) -> Result<Self> {
        require_genus(curve, 2)?;
        if line.d.is_zero() {
            return Err(Error::Degenerate(format!("d_{} vanishes", line.n)));
        }
        let u_prev = line.u_prev(2);
        if u_prev.is_zero() {
            return Err(Error::Degenerate(format!(
                "Q_{} has degree below 2",
                line.n - 1
            )));
        }
        let shifted = &line.p - curve.a();
        let e = shifted.coeff(0) / (Rational::from_int(2) * &line.d);
        let v_prev = -line.q_prev.coeff(1) / &u_prev;
        let w_prev = line.q_prev.coeff(0) / &u_prev;
        Ok(G2State {
            d: line.d.clone(),
            e,
            v_prev,
            w_prev,
        })
    }

    /// State at `n = 1` from `(d_0, d_1, v_0, v_1)`.
    pub fn from_pairs(
        map: &G2Map,
        d0: &Rational,
        d1: &Rational,
        v0: &Rational,
        v1: &Rational,
    ) -> Self {
        G2State {
            d: d1.clone(),
            e: -v0 - v1,
            v_prev: v0.clone(),
            w_prev: d1 + d0 + &map.f + v0 * v0,
        }
    }
}

impl G2Map {
    pub fn from_curve(curve: &CurveSpec) -> Result<Self> {
        require_genus(curve, 2)?;
        Ok(G2Map {
            f: curve.a().coeff(1),
            g: curve.a().coeff(0),
            u: curve.u(),
        })
    }

    fn consts<T: Scalar>(&self) -> (T, T, T) {
        (
            T::from_rational(self.f.clone()),
            T::from_rational(self.g.clone()),
            T::from_rational(self.u.clone()),
        )
    }

    /// The four coordinate formulas, over any scalar type.
    pub fn step_coords<T: Scalar>(&self, x: &[T]) -> Result<[T; 4]> {
        let [d, e, vp, wp] = x else {
            return Err(Error::InvalidArgument(format!(
                "genus two states have 4 coordinates, got {}",
                x.len()
            )));
        };
        let (f, g, u) = self.consts::<T>();
        let inv_d = d.inverse()?;
        let big = d.times(&e.times(e).plus(&e.times(vp)).plus(wp)).plus(&u);
        let inv_big = big.inverse()?;
        let d_next = big.times(&inv_d).negated();
        let dd = d.times(d);
        let fd_u = f.times(d).minus(&u);
        let e_vp = e.plus(vp);
        let first = vp.times(
            &dd.plus(&d.times(&e_vp.times(&e_vp)))
                .minus(&d.times(wp))
                .plus(&fd_u),
        );
        let second = e.times(
            &dd.scale(&Rational::from_int(2))
                .minus(&d.times(wp))
                .plus(&fd_u),
        );
        let e_next = first.plus(&second).plus(&g.times(d)).times(&inv_big);
        let v = vp.plus(e).negated();
        let w = wp
            .negated()
            .plus(&vp.times(vp))
            .plus(&vp.times(e))
            .plus(d)
            .minus(&u.times(&inv_d))
            .plus(&f);
        Ok([d_next, e_next, v, w])
    }

    pub fn step_at(&self, s: &G2State, step: usize) -> Result<G2State> {
        if s.d.is_zero() {
            return Err(singular(step, "d vanishes"));
        }
        match self.step_coords(&s.coords()) {
            Ok(x) => G2State::from_coords(&x),
            Err(Error::DivisionByZero) => Err(singular(step, "d(e^2 + e v + w) + u vanishes")),
            Err(e) => Err(e),
        }
    }

    pub fn step(&self, s: &G2State) -> Result<G2State> {
        self.step_at(s, 0)
    }

    /// `(H1, H2)` over any scalar type.
    pub fn integrals_coords<T: Scalar>(&self, x: &[T]) -> Result<(T, T)> {
        let [d, e, vp, wp] = x else {
            return Err(Error::InvalidArgument(
                "genus two states have 4 coordinates".into(),
            ));
        };
        let (f, g, u) = self.consts::<T>();
        let v = vp.plus(e).negated();
        let w = wp
            .negated()
            .plus(&vp.times(vp))
            .plus(&vp.times(e))
            .plus(d)
            .minus(&u.times(&d.inverse()?))
            .plus(&f);
        let h1 = d.times(
            &d.times(e)
                .scale(&Rational::from_int(2))
                .plus(&v.times(wp))
                .plus(&vp.times(&w))
                .plus(&f.times(e))
                .plus(&g),
        );
        let h2 = d.times(&d.times(&e.times(e)).minus(&w.times(wp)).plus(&g.times(e)));
        Ok((h1, h2))
    }

    pub fn integrals(&self, s: &G2State) -> Result<(Rational, Rational)> {
        self.integrals_coords(&s.coords())
    }

    pub fn orbit(&self, start: &G2State, steps: usize) -> (Vec<G2State>, Option<Error>) {
        let mut out = vec![start.clone()];
        for k in 1..=steps {
            match self.step_at(out.last().unwrap(), k) {
                Ok(next) => out.push(next),
                Err(e) => return (out, Some(e)),
            }
        }
        (out, None)
    }

    /// Orbit over an arbitrary scalar type, e.g. `f64` for plotting or
    /// [`ModP`] for long exact runs.
    pub fn orbit_in<T: Scalar>(
        &self,
        start: &[T; 4],
        steps: usize,
    ) -> (Vec<[T; 4]>, Option<Error>) {
        let mut out = vec![start.clone()];
        for k in 1..=steps {
            let last = out.last().unwrap();
            if last[0].is_zero() {
                return (out, Some(singular(k, "d vanishes")));
            }
            match self.step_coords(last) {
                Ok(next) => out.push(next),
                Err(Error::DivisionByZero) => {
                    return (out, Some(singular(k, "d(e^2 + e v + w) + u vanishes")))
                }
                Err(e) => return (out, Some(e)),
            }
        }
        (out, None)
    }

    pub fn bracket(&self) -> G2Bracket {
        G2Bracket
    }
}

impl PointMap for G2Map {
    fn apply<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.step_coords(x)?.to_vec())
    }
}

/// Outcome of [`verify_long_orbit`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongOrbitReport {
    pub steps: usize,
    /// Steps carried out over the rationals.
    pub exact_steps: usize,
    /// Primes over which all `steps` were carried out.
    pub primes: Vec<u64>,
    pub h1: Rational,
    pub h2: Rational,
}

/// Checks that `H1` and `H2` stay constant along `steps` iterates.
///
/// Rational heights grow quadratically in the step count, so the first
/// `exact_steps` iterates are computed over the rationals and the full run
/// is carried out modulo two word-sized primes; the modular orbits are
/// checked to reduce the rational prefix, and the integrals are checked at
/// every step of every run.
pub fn verify_long_orbit(
    map: &G2Map,
    start: &G2State,
    steps: usize,
    exact_steps: usize,
) -> Result<LongOrbitReport> {
    let exact_steps = exact_steps.min(steps);
    let (h1, h2) = map.integrals(start)?;
    let (exact, err) = map.orbit(start, exact_steps);
    if let Some(e) = err {
        return Err(e);
    }
    for (k, p) in exact.iter().enumerate() {
        let h = map.integrals(p)?;
        if h != (h1.clone(), h2.clone()) {
            return Err(Error::VerificationFailed(format!(
                "integrals change at step {k}: ({}, {}) instead of ({h1}, {h2})",
                h.0, h.1
            )));
        }
    }
    modular_run::<P61>(map, start, steps, &exact, &h1, &h2)?;
    modular_run::<P64>(map, start, steps, &exact, &h1, &h2)?;
    Ok(LongOrbitReport {
        steps,
        exact_steps,
        primes: vec![P61, P64],
        h1,
        h2,
    })
}

fn modular_run<const P: u64>(
    map: &G2Map,
    start: &G2State,
    steps: usize,
    exact: &[G2State],
    h1: &Rational,
    h2: &Rational,
) -> Result<()> {
    let lift = |x: &Rational| ModP::<P>::try_from_rational(x);
    let coords = start.coords();
    let start_mod = [
        lift(&coords[0])?,
        lift(&coords[1])?,
        lift(&coords[2])?,
        lift(&coords[3])?,
    ];
    let (orbit, err) = map.orbit_in(&start_mod, steps);
    if let Some(e) = err {
        return Err(Error::VerificationFailed(format!(
            "orbit modulo {P} stops: {e}"
        )));
    }
    let targets = (lift(h1)?, lift(h2)?);
    for (k, p) in orbit.iter().enumerate() {
        if let Some(q) = exact.get(k) {
            let reduced: Vec<ModP<P>> = q.coords().iter().map(lift).collect::<Result<_>>()?;
            if reduced != p.to_vec() {
                return Err(Error::VerificationFailed(format!(
                    "orbit modulo {P} departs from the rational orbit at step {k}"
                )));
            }
        }
        if map.integrals_coords(p)? != targets {
            return Err(Error::VerificationFailed(format!(
                "integrals change modulo {P} at step {k}"
            )));
        }
    }
    Ok(())
}

/// The invariant bracket on `(d, e, v_prev, w_prev)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct G2Bracket;

pub const G2_COORDS: [&str; 4] = ["d", "e", "v_prev", "w_prev"];

impl PoissonMatrix for G2Bracket {
    fn dim(&self) -> usize {
        4
    }

    fn matrix<T: Scalar>(&self, x: &[T]) -> Result<Vec<Vec<T>>> {
        let [d, e, vp, _] = x else {
            return Err(Error::InvalidArgument(
                "genus two states have 4 coordinates".into(),
            ));
        };
        let inv_d = d.inverse()?;
        let mut m = vec![vec![T::zero(); 4]; 4];
        m[0][3] = T::one().negated();
        m[1][2] = inv_d.clone();
        m[1][3] = vp.plus(e).times(&inv_d);
        for i in 0..4 {
            for j in 0..i {
                m[i][j] = m[j][i].negated();
            }
        }
        Ok(m)
    }
}

/// `{a, b}` at `s` for functions of the state given as dual-number programs.
pub fn g2_brackets<A, B>(a: A, b: B, s: &G2State) -> Result<Rational>
where
    A: FnOnce(&[Dual]) -> Result<Dual>,
    B: FnOnce(&[Dual]) -> Result<Dual>,
{
    bracket::eval_bracket(&G2Bracket, a, b, &s.coords())
}

/// `{H1, H2}` at `s`.
pub fn g2_integrals_bracket(map: &G2Map, s: &G2State) -> Result<Rational> {
    let x = s.coords();
    let (h1, h2) = map
        .integrals_coords(&Dual::variables(&x))
        .map_err(|e| match e {
            Error::DivisionByZero => Error::Pole {
                at: crate::exactnum::describe_point(&x),
            },
            other => other,
        })?;
    let pi = G2Bracket.matrix(&x)?;
    Ok(bracket::bracket_of_duals(&pi, &h1, &h2))
}

/// Failures of the Jacobi identity and of the Poisson-map property at `s`.
pub fn g2_structure_defects(map: &G2Map, s: &G2State) -> Result<(Option<Defect>, Option<Defect>)> {
    let x = s.coords();
    let jac = bracket::jacobi_defect(&G2Bracket, &x)?;
    let push = bracket::pushforward_defect(&G2Bracket, map, &x)?;
    Ok((jac, push))
}
