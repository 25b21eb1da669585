//! JSON and CSV formats used by the command line and the repro bundles.
//! Rationals are always written as strings, polynomials as ascending
//! coefficient arrays.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cfrac::{CFLine, CurveSpec, Expansion, SeedLine};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::maps::{G1State, G2State};
use crate::upoly::Poly;

/// Curve and seed in one document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub genus: usize,
    #[serde(rename = "A")]
    pub a: Poly,
    #[serde(rename = "R")]
    pub r: Poly,
    #[serde(rename = "P0")]
    pub p0: Poly,
    #[serde(rename = "Q0")]
    pub q0: Poly,
}

impl CurveFile {
    pub fn from_expansion(exp: &Expansion) -> Self {
        let c = exp.curve();
        let s = exp.seed();
        CurveFile {
            genus: c.genus(),
            a: c.a().clone(),
            r: c.r().clone(),
            p0: s.p.clone(),
            q0: s.q.clone(),
        }
    }

    pub fn expansion(&self) -> Result<Expansion> {
        let curve = CurveSpec::new(self.genus, self.a.clone(), self.r.clone())?;
        Expansion::new(curve, &SeedLine::new(self.p0.clone(), self.q0.clone()))
    }
}

/// One output line of `expand`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRecord {
    pub n: i64,
    pub u: Rational,
    pub v: Rational,
    pub d: Rational,
    #[serde(rename = "P")]
    pub p: Poly,
    #[serde(rename = "Q")]
    pub q: Poly,
}

impl From<&CFLine> for LineRecord {
    fn from(l: &CFLine) -> Self {
        LineRecord {
            n: l.n,
            u: l.u.clone(),
            v: l.v.clone(),
            d: l.d.clone(),
            p: l.p.clone(),
            q: l.q.clone(),
        }
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

/// Integers separated by spaces, or `None` if some value is not integral.
pub fn integer_line(values: &[Rational]) -> Option<String> {
    if !values.iter().all(Rational::is_integer) {
        return None;
    }
    Some(
        values
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    )
}

fn decimal(r: &Rational) -> String {
    format!("{:.16e}", r.to_f64())
}

/// CSV with header `n,d,v`; with `float`, lossy decimal columns follow.
pub fn g1_orbit_csv(first: i64, orbit: &[G1State], float: bool) -> String {
    let mut out = String::from(if float {
        "n,d,v,d_approx,v_approx\n"
    } else {
        "n,d,v\n"
    });
    for (i, s) in orbit.iter().enumerate() {
        write!(out, "{},{},{}", first + i as i64, s.d, s.v).unwrap();
        if float {
            write!(out, ",{},{}", decimal(&s.d), decimal(&s.v)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// CSV with header `n,d,e,v,w`, where `v`, `w` are the previous line's
/// values carried in the state.
pub fn g2_orbit_csv(first: i64, orbit: &[G2State], float: bool) -> String {
    let mut out = String::from(if float {
        "n,d,e,v,w,d_approx,e_approx,v_approx,w_approx\n"
    } else {
        "n,d,e,v,w\n"
    });
    for (i, s) in orbit.iter().enumerate() {
        let c = s.coords();
        write!(
            out,
            "{},{},{},{},{}",
            first + i as i64,
            c[0],
            c[1],
            c[2],
            c[3]
        )
        .unwrap();
        if float {
            for x in &c {
                write!(out, ",{}", decimal(x)).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// Projection `(d_{n-1}, d_n, v_{n-1})` of a genus-two orbit as floats,
/// for plotting only.
pub fn g2_projection_csv(first: i64, orbit: &[[f64; 4]]) -> String {
    let mut out = String::from("n,d_prev_approx,d_approx,v_prev_approx\n");
    for (i, w) in orbit.windows(2).enumerate() {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e}",
            first + 1 + i as i64,
            w[0][0],
            w[1][0],
            w[1][2]
        )
        .unwrap();
    }
    out
}
