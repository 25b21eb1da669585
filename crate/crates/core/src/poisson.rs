//! Linear Poisson structure on traceless 2×2 polynomial Lax matrices
//! `ℒ(ζ) = [[P, R], [Q, -P]]`, its Casimirs and Hamiltonians, and the
//! discrete map induced by one continued-fraction step.
//!
//! Coordinates are `(p_0..p_g, q_0..q_g, r_0..r_{g-1})`; the leading
//! coefficients `p_{g+1} = r_g = 1` are fixed.

use serde::{Deserialize, Serialize};

use crate::bracket::{self, Defect, PointMap, PoissonMatrix};
use crate::cfrac::Expansion;
use crate::error::{Error, Result};
use crate::exactnum::{describe_point, Dual, Rational, Scalar};
use crate::linalg::rank;
use crate::upoly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaxPoint {
    genus: usize,
    p: Poly,
    q: Poly,
    r: Poly,
}

/// Index layout of the `3g + 2` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub genus: usize,
}

impl Layout {
    pub fn dim(self) -> usize {
        3 * self.genus + 2
    }
    pub fn p(self, a: usize) -> usize {
        a
    }
    pub fn q(self, a: usize) -> usize {
        self.genus + 1 + a
    }
    pub fn r(self, a: usize) -> usize {
        2 * self.genus + 2 + a
    }

    pub fn name(self, i: usize) -> String {
        let g = self.genus;
        if i <= g {
            format!("p{i}")
        } else if i <= 2 * g + 1 {
            format!("q{}", i - g - 1)
        } else {
            format!("r{}", i - 2 * g - 2)
        }
    }

    /// `(P, Q, R)` with the fixed leading coefficients restored.
    pub fn polys<T: Scalar>(self, x: &[T]) -> Result<(Poly<T>, Poly<T>, Poly<T>)> {
        let g = self.genus;
        if x.len() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.dim(),
                x.len()
            )));
        }
        let mut p = x[..=g].to_vec();
        p.push(T::one());
        let q = x[g + 1..2 * g + 2].to_vec();
        let mut r = x[2 * g + 2..].to_vec();
        r.push(T::one());
        Ok((Poly::new(p), Poly::new(q), Poly::new(r)))
    }
}

impl LaxPoint {
    /// `P` monic of degree `g+1` with no `ζ^g` term, `R` monic of degree `g`,
    /// `Q` of degree exactly `g`.
    pub fn new(genus: usize, p: Poly, q: Poly, r: Poly) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidArgument("genus must be at least 1".into()));
        }
        if p.degree() != Some(genus + 1) || !p.is_monic() {
            return Err(Error::InvalidArgument(format!(
                "P must be monic of degree {}",
                genus + 1
            )));
        }
        if !p.coeff(genus).is_zero() {
            return Err(Error::InvalidArgument(format!(
                "P must have no ζ^{genus} term (top Casimir zero)"
            )));
        }
        if r.degree() != Some(genus) || !r.is_monic() {
            return Err(Error::InvalidArgument(format!(
                "R must be monic of degree {genus}"
            )));
        }
        if q.degree() != Some(genus) {
            return Err(Error::InvalidArgument(format!(
                "Q must have degree {genus}"
            )));
        }
        Ok(LaxPoint { genus, p, q, r })
    }

    pub fn from_coords(genus: usize, x: &[Rational]) -> Result<Self> {
        let (p, q, r) = Layout { genus }.polys(x)?;
        LaxPoint::new(genus, p, q, r)
    }

    /// `P = P_0`, `Q = u_{-1} Q_0`, `R = Q_{-1}/u_{-1}`.
    pub fn from_expansion(exp: &Expansion) -> Result<Self> {
        let g = exp.curve().genus();
        let seed = exp.seed();
        let u_prev = seed.u_prev(g);
        if u_prev.is_zero() {
            return Err(Error::Degenerate("Q_{-1} has degree below g".into()));
        }
        let q = seed.q.scale(&u_prev);
        let r = seed.q_prev.scale(&u_prev.recip()?);
        LaxPoint::new(g, seed.p.clone(), q, r)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn p(&self) -> &Poly {
        &self.p
    }
    pub fn q(&self) -> &Poly {
        &self.q
    }
    pub fn r(&self) -> &Poly {
        &self.r
    }

    pub fn layout(&self) -> Layout {
        Layout { genus: self.genus }
    }

    pub fn coords(&self) -> Vec<Rational> {
        let g = self.genus;
        let mut x: Vec<Rational> = (0..=g).map(|i| self.p.coeff(i)).collect();
        x.extend((0..=g).map(|i| self.q.coeff(i)));
        x.extend((0..g).map(|i| self.r.coeff(i)));
        x
    }

    /// `F = P² + QR = -det ℒ`.
    pub fn spectral(&self) -> Poly {
        self.p.square().add(&self.q.mul(&self.r))
    }

    /// `c_j` for `j = g..=2g+1`.
    pub fn casimirs(&self) -> Vec<Rational> {
        let f = self.spectral();
        (self.genus..=2 * self.genus + 1)
            .map(|j| f.coeff(j))
            .collect()
    }

    /// `H_j = c_j` for `j = 0..g`.
    pub fn hamiltonians(&self) -> Vec<Rational> {
        let f = self.spectral();
        (0..self.genus).map(|j| f.coeff(j)).collect()
    }

    /// `d_0 = -q_g/4`.
    pub fn d0(&self) -> Rational {
        -self.q.coeff(self.genus) / Rational::from_int(4)
    }

    /// `v_0 = q_{g-1}/(4 d_0)`.
    pub fn v0(&self) -> Result<Rational> {
        (self.q.coeff(self.genus - 1) / Rational::from_int(4)).checked_div(&self.d0())
    }

    /// Fails with [`Error::SingularOrbit`] when `d_0` vanishes here or at
    /// the image.
    pub fn bt_step(&self) -> Result<LaxPoint> {
        let x = LaxMap { genus: self.genus }
            .apply(&self.coords())
            .map_err(|e| match e {
                Error::DivisionByZero => Error::SingularOrbit {
                    step: 1,
                    reason: "d_0 vanishes".into(),
                },
                other => other,
            })?;
        if x[self.layout().q(self.genus)].is_zero() {
            return Err(Error::SingularOrbit {
                step: 1,
                reason: "d_0 vanishes at the image".into(),
            });
        }
        LaxPoint::from_coords(self.genus, &x)
    }
}

/// Coefficient-level bracket obtained by expanding the generating relations
/// `{P(ζ),Q(η)} = 2(Q(ζ)-Q(η))/(ζ-η)`, `{P(ζ),R(η)} = -2(R(ζ)-R(η))/(ζ-η)`,
/// `{Q(ζ),Q(η)} = -4(Q(ζ)-Q(η))`, `{Q(ζ),R(η)} = 4(P(ζ)-P(η))/(ζ-η) - 4R(η)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaxBracket {
    pub genus: usize,
}

impl PoissonMatrix for LaxBracket {
    fn dim(&self) -> usize {
        3 * self.genus + 2
    }

    fn matrix<T: Scalar>(&self, x: &[T]) -> Result<Vec<Vec<T>>> {
        let g = self.genus;
        let lay = Layout { genus: g };
        let (pp, qq, rr) = lay.polys(x)?;
        let n = lay.dim();
        let mut m = vec![vec![T::zero(); n]; n];
        let mut set = |i: usize, j: usize, v: T| {
            m[j][i] = v.negated();
            m[i][j] = v;
        };
        let two = Rational::from_int(2);
        let four = Rational::from_int(4);
        for a in 0..=g {
            for b in 0..=g {
                set(lay.p(a), lay.q(b), qq.coeff(a + b + 1).scale(&two));
            }
            for b in 0..g {
                set(
                    lay.p(a),
                    lay.r(b),
                    rr.coeff(a + b + 1).scale(&two).negated(),
                );
            }
        }
        for a in 1..=g {
            set(lay.q(a), lay.q(0), qq.coeff(a).scale(&four).negated());
        }
        for a in 0..=g {
            for b in 0..g {
                let mut v = pp.coeff(a + b + 1).scale(&four);
                if a == 0 {
                    v = v.minus(&rr.coeff(b).scale(&four));
                }
                set(lay.q(a), lay.r(b), v);
            }
        }
        Ok(m)
    }
}

/// The step `R̃ = -Q/(4d_0)`, `P̃ = -P + 2(ζ+v_0)R̃`,
/// `Q̃ = -2(ζ+v_0)(P̃-P) - 4d_0 R` in coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaxMap {
    pub genus: usize,
}

impl PointMap for LaxMap {
    fn apply<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let g = self.genus;
        let lay = Layout { genus: g };
        let (p, q, r) = lay.polys(x)?;
        let d0 = q.coeff(g).scale(&Rational::frac(-1, 4));
        let four_d0 = d0.scale(&Rational::from_int(4));
        let v0 = q.coeff(g - 1).divide(&four_d0)?;
        let zeta_v0 = Poly::new(vec![v0, T::one()]);
        let r_new = q.scale(&four_d0.inverse()?.negated());
        let p_new = p.neg().add(&zeta_v0.mul(&r_new).scale(&T::from_int(2)));
        let q_new = zeta_v0
            .mul(&p_new.sub(&p))
            .scale(&T::from_int(-2))
            .sub(&r.scale(&four_d0));
        let mut out: Vec<T> = (0..=g).map(|i| p_new.coeff(i)).collect();
        out.extend((0..=g).map(|i| q_new.coeff(i)));
        out.extend((0..g).map(|i| r_new.coeff(i)));
        Ok(out)
    }
}

fn fail(msg: String) -> Error {
    Error::VerificationFailed(msg)
}

fn lifted(point: &LaxPoint) -> (Vec<Dual>, Poly<Dual>, Poly<Dual>, Poly<Dual>) {
    let vars = Dual::variables(&point.coords());
    let (p, q, r) = point
        .layout()
        .polys(&vars)
        .expect("coordinate count matches layout");
    (vars, p, q, r)
}

fn at(c: &Rational) -> Dual {
    Dual::constant(c.clone())
}

/// `{a, b}(p)` for functions of the coordinates given as dual programs.
pub fn bracket_eval<A, B>(point: &LaxPoint, a: A, b: B) -> Result<Rational>
where
    A: FnOnce(&[Dual]) -> Result<Dual>,
    B: FnOnce(&[Dual]) -> Result<Dual>,
{
    bracket::eval_bracket(&LaxBracket { genus: point.genus }, a, b, &point.coords())
}

/// Antisymmetry, Jacobi and rank `2g` of the bracket matrix at `p`.
pub fn structure_check(point: &LaxPoint) -> Result<()> {
    let s = LaxBracket { genus: point.genus };
    let x = point.coords();
    let pi = s.matrix(&x)?;
    if let Some(d) = bracket::antisymmetry_defect(&pi) {
        return Err(fail(format!(
            "antisymmetry fails at {:?} by {}",
            d.indices, d.value
        )));
    }
    if let Some(d) = bracket::jacobi_defect(&s, &x)? {
        return Err(fail(format!(
            "Jacobi identity fails for {:?}: {} at {}",
            d.indices,
            d.value,
            describe_point(&x)
        )));
    }
    let rk = rank(&pi);
    if rk != 2 * point.genus {
        return Err(fail(format!(
            "bracket has rank {rk}, expected {}",
            2 * point.genus
        )));
    }
    Ok(())
}

/// `{c_j, x_i} = 0` for every Casimir coefficient and coordinate.
pub fn casimir_check(point: &LaxPoint) -> Result<usize> {
    let g = point.genus;
    let lay = point.layout();
    let pi = LaxBracket { genus: g }.matrix(&point.coords())?;
    let (vars, p, q, r) = lifted(point);
    let f = p.square().add(&q.mul(&r));
    let mut checked = 0;
    for j in g..=2 * g + 1 {
        let c = f.coeff(j);
        for (i, xi) in vars.iter().enumerate() {
            let v = bracket::bracket_of_duals(&pi, &c, xi);
            if !v.is_zero() {
                return Err(fail(format!("{{c_{j}, {}}} = {v}", lay.name(i))));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// `{H_j, H_k} = 0` for `j, k < g`, and `{F(ζ), F(η)} = 0` at the given
/// spectral values.
pub fn involution_check(
    point: &LaxPoint,
    spectral_pairs: &[(Rational, Rational)],
) -> Result<usize> {
    let g = point.genus;
    let pi = LaxBracket { genus: g }.matrix(&point.coords())?;
    let (_, p, q, r) = lifted(point);
    let f = p.square().add(&q.mul(&r));
    let mut checked = 0;
    for j in 0..g {
        for k in 0..g {
            let v = bracket::bracket_of_duals(&pi, &f.coeff(j), &f.coeff(k));
            if !v.is_zero() {
                return Err(fail(format!("{{H_{j}, H_{k}}} = {v}")));
            }
            checked += 1;
        }
    }
    for (zeta, eta) in spectral_pairs {
        let v = bracket::bracket_of_duals(&pi, &f.eval(&at(zeta)), &f.eval(&at(eta)));
        if !v.is_zero() {
            return Err(fail(format!("{{F({zeta}), F({eta})}} = {v}")));
        }
        checked += 1;
    }
    Ok(checked)
}

/// `{y_i, x_j} = 2δ_ij` and `{x_i, x_j} = {y_i, y_j} = 0`, where `x_i` are
/// the given distinct roots of `R` and `y_i = P(x_i)`.
pub fn canonical_pairs_check(point: &LaxPoint, roots: &[Rational]) -> Result<usize> {
    let g = point.genus;
    if roots.len() != g {
        return Err(Error::InvalidArgument(format!(
            "need {g} roots of R, got {}",
            roots.len()
        )));
    }
    for (i, x) in roots.iter().enumerate() {
        if !point.r.eval(x).is_zero() {
            return Err(Error::InvalidArgument(format!("{x} is not a root of R")));
        }
        if roots[..i].contains(x) {
            return Err(Error::InvalidArgument(format!("repeated root {x}")));
        }
    }
    let lay = point.layout();
    let dim = lay.dim();
    let pi = LaxBracket { genus: g }.matrix(&point.coords())?;
    let (_, p, _, _) = lifted(point);
    let r_prime = point.r.derivative();
    // Implicit differentiation of R(x) = 0: ∂x/∂r_k = -x^k / R'(x).
    let xs: Vec<Dual> = roots
        .iter()
        .map(|x| {
            let inv = r_prime.eval(x).recip()?;
            let mut grad = vec![Rational::zero(); dim];
            let mut pow = Rational::one();
            for k in 0..g {
                grad[lay.r(k)] = -(&pow * &inv);
                pow = &pow * x;
            }
            Ok(Dual::with_derivs(x.clone(), grad))
        })
        .collect::<Result<_>>()?;
    let ys: Vec<Dual> = xs.iter().map(|x| p.eval(x)).collect();
    let mut checked = 0;
    for i in 0..g {
        for j in 0..g {
            let expected = if i == j {
                Rational::from_int(2)
            } else {
                Rational::zero()
            };
            let yx = bracket::bracket_of_duals(&pi, &ys[i], &xs[j]);
            if yx != expected {
                return Err(fail(format!(
                    "{{y_{i}, x_{j}}} = {yx}, expected {expected}"
                )));
            }
            let xx = bracket::bracket_of_duals(&pi, &xs[i], &xs[j]);
            let yy = bracket::bracket_of_duals(&pi, &ys[i], &ys[j]);
            if !xx.is_zero() || !yy.is_zero() {
                return Err(fail(format!(
                    "{{x_{i}, x_{j}}} = {xx}, {{y_{i}, y_{j}}} = {yy}"
                )));
            }
            checked += 3;
        }
    }
    Ok(checked)
}

/// Spectral polynomial, Casimirs and Hamiltonians unchanged by `steps`
/// applications of the map.
pub fn isospectral_check(point: &LaxPoint, steps: usize) -> Result<usize> {
    let f = point.spectral();
    let mut cur = point.clone();
    for k in 1..=steps {
        cur = cur.bt_step()?;
        let g = cur.spectral();
        if g != f {
            return Err(fail(format!(
                "spectral polynomial changes at step {k}: {g} instead of {f}"
            )));
        }
    }
    Ok(steps)
}

/// `J Π(p) Jᵀ = Π(φ(p))` for the exact Jacobian `J` of the map.
pub fn poisson_map_check(point: &LaxPoint) -> Result<()> {
    let g = point.genus;
    if point.d0().is_zero() {
        return Err(Error::SingularOrbit {
            step: 1,
            reason: "d_0 vanishes".into(),
        });
    }
    let lay = point.layout();
    match bracket::pushforward_defect(
        &LaxBracket { genus: g },
        &LaxMap { genus: g },
        &point.coords(),
    )? {
        None => Ok(()),
        Some(Defect { indices, value }) => Err(fail(format!(
            "pushforward differs at ({}, {}) by {value}",
            lay.name(indices[0]),
            lay.name(indices[1])
        ))),
    }
}

/// `{ℒ(ζ), F(η)} = [𝒫(ζ,η), ℒ(ζ)]` entrywise, with
/// `𝒫 = 2/(ζ-η)·[[P(η)+(ζ-η)R(η), R(η)], [Q(η), -P(η)-(ζ-η)R(η)]]`,
/// and the diagonal entry against its closed form.
pub fn lax_form_check(point: &LaxPoint, zeta: &Rational, eta: &Rational) -> Result<()> {
    if zeta == eta {
        return Err(Error::InvalidArgument("ζ and η must differ".into()));
    }
    let pi = LaxBracket { genus: point.genus }.matrix(&point.coords())?;
    let (_, p, q, r) = lifted(point);
    let f_eta = p.square().add(&q.mul(&r)).eval(&at(eta));
    let z = at(zeta);
    let bp = bracket::bracket_of_duals(&pi, &p.eval(&z), &f_eta);
    let br = bracket::bracket_of_duals(&pi, &r.eval(&z), &f_eta);
    let bq = bracket::bracket_of_duals(&pi, &q.eval(&z), &f_eta);

    let (pz, qz, rz) = (point.p.eval(zeta), point.q.eval(zeta), point.r.eval(zeta));
    let (pe, qe, re) = (point.p.eval(eta), point.q.eval(eta), point.r.eval(eta));
    let diff = zeta - eta;
    let scale = Rational::from_int(2) / &diff;
    let corner = &pe + &(&diff * &re);
    let m = [
        [&scale * &corner, &scale * &re],
        [&scale * &qe, -(&scale * &corner)],
    ];
    let l = [[pz.clone(), rz.clone()], [qz.clone(), -pz.clone()]];
    let mul = |a: &[[Rational; 2]; 2], b: &[[Rational; 2]; 2]| -> [[Rational; 2]; 2] {
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    };
    let ml = mul(&m, &l);
    let lm = mul(&l, &m);
    let comm = |i: usize, j: usize| &ml[i][j] - &lm[i][j];
    let expected = [[bp.clone(), br.clone()], [bq.clone(), -bp.clone()]];
    for i in 0..2 {
        for j in 0..2 {
            if comm(i, j) != expected[i][j] {
                return Err(fail(format!(
                    "Lax form differs in entry ({i}, {j}) at ζ = {zeta}, η = {eta}: {} vs {}",
                    comm(i, j),
                    expected[i][j]
                )));
            }
        }
    }
    let closed = Rational::from_int(2) * (&qz * &re - &qe * &rz) / &diff;
    if closed != bp {
        return Err(fail(format!(
            "{{P(ζ), F(η)}} = {bp}, closed form gives {closed}"
        )));
    }
    Ok(())
}

/// Degrees in `η` of `{P(ζ),F(η)}`, `{Q(ζ),F(η)}`, `{R(ζ),F(η)}` at fixed
/// `ζ`, found by interpolating through `2g + 3` values of `η`; the
/// interpolant is also checked at one further node.
pub fn bracket_degrees(point: &LaxPoint, zeta: &Rational) -> Result<[Option<usize>; 3]> {
    let g = point.genus;
    let pi = LaxBracket { genus: g }.matrix(&point.coords())?;
    let (_, p, q, r) = lifted(point);
    let f = p.square().add(&q.mul(&r));
    let z = at(zeta);
    let entries = [p.eval(&z), q.eval(&z), r.eval(&z)];
    let nodes: Vec<Rational> = (0..2 * g as i64 + 4)
        .map(|k| zeta + &Rational::from_int(k + 1))
        .collect();
    let mut out = [None, None, None];
    for (slot, entry) in entries.iter().enumerate() {
        let vals: Vec<(Rational, Rational)> = nodes
            .iter()
            .map(|eta| {
                (
                    eta.clone(),
                    bracket::bracket_of_duals(&pi, entry, &f.eval(&at(eta))),
                )
            })
            .collect();
        let (fit, check) = vals.split_at(vals.len() - 1);
        let poly = Poly::interpolate(fit)?;
        if poly.eval(&check[0].0) != check[0].1 {
            return Err(fail("bracket is not polynomial of low degree in η".into()));
        }
        out[slot] = poly.degree();
    }
    Ok(out)
}
