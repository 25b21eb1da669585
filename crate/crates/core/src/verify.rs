//! Randomized property suites. Every sample is drawn from its own seeded
//! stream, so the verdicts do not depend on scheduling or thread count.
//! The pool size can be capped with `HYPERCF_THREADS`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cfrac::Expansion;
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::io::CurveFile;
use crate::maps::{G1Map, G1State};
use crate::moments::{
    check_identities, moments_forward, verify_theorem2, verify_theorem3, HankelTable,
};
use crate::poisson::{self, LaxPoint};
use crate::random::Sampler;
use crate::somos::{qrt_check, somos8_detect, somos_k_find, FindOptions, Sequence};

pub const THREADS_VAR: &str = "HYPERCF_THREADS";

/// Verdict for one property over all samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Property {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    /// Individual exact checks performed.
    pub checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub sample: usize,
    pub input: serde_json::Value,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub genus: usize,
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<Property>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    fn new(
        suite: &str,
        genus: usize,
        seed: u64,
        properties: Vec<Property>,
        notes: Vec<String>,
        clock: Instant,
    ) -> Self {
        SuiteReport {
            suite: suite.into(),
            genus,
            seed,
            passed: properties.iter().all(|p| p.passed),
            properties,
            notes,
            elapsed_ms: clock.elapsed().as_millis(),
        }
    }
}

/// Thread pool honouring `HYPERCF_THREADS`.
pub fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "{THREADS_VAR} must be a positive integer, got {v:?}"
            ))
        })?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Seed of sample `i` in a run seeded with `seed`.
pub fn sample_seed(seed: u64, i: usize) -> u64 {
    // splitmix64 finalizer over (seed, i)
    let mut z = seed
        ^ (i as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Outcome of one property on one sample: number of checks, or the
/// failing input and error.
type Outcome = std::result::Result<usize, (serde_json::Value, String)>;

fn fold(name: &str, outcomes: Vec<Outcome>) -> Property {
    let samples = outcomes.len();
    let mut checks = 0;
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(n) => checks += n,
            Err((input, error)) => {
                return Property {
                    name: name.into(),
                    passed: false,
                    samples,
                    checks,
                    counterexample: Some(Counterexample {
                        sample: i,
                        input,
                        error,
                    }),
                }
            }
        }
    }
    Property {
        name: name.into(),
        passed: true,
        samples,
        checks,
        counterexample: None,
    }
}

/// Runs `per_sample` on every sample in parallel; it returns one outcome
/// per property name, in order.
fn run_samples<S, F>(
    names: &[&str],
    samples: usize,
    seed: u64,
    make: S,
    per_sample: F,
) -> Result<Vec<Property>>
where
    S: Fn(&mut Sampler) -> Result<serde_json::Value> + Sync,
    F: Fn(&serde_json::Value) -> Vec<Result<usize>> + Sync,
{
    let work = || -> Vec<Vec<Outcome>> {
        (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut s = Sampler::new(sample_seed(seed, i));
                match make(&mut s) {
                    Ok(input) => per_sample(&input)
                        .into_iter()
                        .map(|r| r.map_err(|e| (input.clone(), e.to_string())))
                        .collect(),
                    Err(e) => vec![
                        Err((serde_json::Value::Null, format!("sampling failed: {e}")));
                        names.len()
                    ],
                }
            })
            .collect()
    };
    // Inside an existing pool (a caller's `install`), use that pool.
    let rows = if rayon::current_thread_index().is_some() {
        work()
    } else {
        pool()?.install(work)
    };
    Ok(names
        .iter()
        .enumerate()
        .map(|(j, name)| fold(name, rows.iter().map(|r| r[j].clone()).collect()))
        .collect())
}

fn expansion_of(input: &serde_json::Value) -> Result<Expansion> {
    serde_json::from_value::<CurveFile>(input.clone())?.expansion()
}

fn sample_expansion(s: &mut Sampler, genus: usize, lines: usize) -> Result<serde_json::Value> {
    let exp = s.expansion(genus, false, lines)?;
    Ok(serde_json::to_value(CurveFile::from_expansion(&exp))?)
}

fn theorem_outcome(r: Result<crate::moments::TheoremReport>) -> Result<usize> {
    let r = r?;
    match r.mismatch {
        None => Ok(r.checked),
        Some(m) => Err(Error::VerificationFailed(format!(
            "{}_{}: expansion {}, determinants {:?}",
            m.quantity, m.n, m.from_expansion, m.from_determinants
        ))),
    }
}

/// `d_n`, `v_n` against Hankel ratios at both points at infinity.
pub fn theorem2(genus: usize, samples: usize, seed: u64, depth: usize) -> Result<SuiteReport> {
    let clock = Instant::now();
    let props = run_samples(
        &[
            "forward determinant formulas",
            "backward determinant formulas",
        ],
        samples,
        seed,
        |s| sample_expansion(s, genus, depth),
        |input| match expansion_of(input) {
            Ok(exp) => vec![
                theorem_outcome(verify_theorem2(&exp, depth)),
                theorem_outcome(verify_theorem3(&exp, depth)),
            ],
            Err(e) => vec![Err(Error::InvalidArgument(e.to_string())), Err(e)],
        },
    )?;
    Ok(SuiteReport::new(
        "theorem2",
        genus,
        seed,
        props,
        vec![],
        clock,
    ))
}

/// Determinant identities on Hankel data from random curves and on
/// random moment sequences unrelated to any curve.
pub fn identities(genus: usize, samples: usize, seed: u64, max_n: usize) -> Result<SuiteReport> {
    let clock = Instant::now();
    let count = 2 * max_n + 2;
    let props = run_samples(
        &[
            "identities on curve moments",
            "identities on random moments",
        ],
        samples,
        seed,
        |s| {
            let exp = s.expansion(genus, false, 2)?;
            let random: Vec<Rational> = (0..count).map(|_| s.rational()).collect();
            Ok(serde_json::json!({ "curve": CurveFile::from_expansion(&exp), "random": random }))
        },
        |input| {
            let curve = serde_json::from_value::<CurveFile>(input["curve"].clone())
                .map_err(Error::from)
                .and_then(|c| c.expansion())
                .and_then(|exp| moments_forward(&exp, count))
                .and_then(|m| check_identities(&m.s, max_n))
                .map(|r| 3 * r.len());
            let random = serde_json::from_value::<Vec<Rational>>(input["random"].clone())
                .map_err(Error::from)
                .and_then(|s| check_identities(&s, max_n))
                .map(|r| 3 * r.len());
            vec![curve, random]
        },
    )?;
    Ok(SuiteReport::new(
        "identities",
        genus,
        seed,
        props,
        vec![],
        clock,
    ))
}

const ISOSPECTRAL_STEPS: usize = 5;

pub const POISSON_PROPERTIES: [&str; 9] = [
    "antisymmetry, Jacobi identity and rank 2g",
    "Casimirs c_g..c_2g+1",
    "Hamiltonians in involution",
    "canonical pairs {y_i, x_j} = 2 delta_ij",
    "isospectrality of the step",
    "step is a Poisson map",
    "Lax form of the flows",
    "eta-degrees of {L(zeta), F(eta)} at most g-1",
    "step reproduces the continued fraction",
];

fn rationals(s: &mut Sampler, n: usize) -> Vec<Rational> {
    (0..n).map(|_| s.rational()).collect()
}

/// Poisson structure checks at random Lax points.
pub fn poisson_suite(genus: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let clock = Instant::now();
    let props = run_samples(
        &POISSON_PROPERTIES,
        samples,
        seed,
        |s| {
            let point = s.lax_orbit_point(genus, ISOSPECTRAL_STEPS)?;
            let (factored, roots) = s.factored_lax_point(genus)?;
            let spectral: Vec<Rational> = rationals(s, 8);
            let exp = s.expansion(genus, false, 6)?;
            Ok(serde_json::json!({
                "point": point,
                "factored": factored,
                "roots": roots,
                "spectral": spectral,
                "curve": CurveFile::from_expansion(&exp),
            }))
        },
        |input| {
            let parsed = (|| -> Result<_> {
                let point: LaxPoint = serde_json::from_value(input["point"].clone())?;
                let factored: LaxPoint = serde_json::from_value(input["factored"].clone())?;
                let roots: Vec<Rational> = serde_json::from_value(input["roots"].clone())?;
                let spec: Vec<Rational> = serde_json::from_value(input["spectral"].clone())?;
                let exp = expansion_of(&input["curve"])?;
                Ok((point, factored, roots, spec, exp))
            })();
            let (point, factored, roots, spec, exp) = match parsed {
                Ok(v) => v,
                Err(e) => {
                    return POISSON_PROPERTIES
                        .iter()
                        .map(|_| Err(Error::Parse(e.to_string())))
                        .collect()
                }
            };
            let pairs: Vec<(Rational, Rational)> = spec
                .chunks(2)
                .filter(|c| c[0] != c[1])
                .map(|c| (c[0].clone(), c[1].clone()))
                .collect();
            vec![
                poisson::structure_check(&point).map(|_| 3),
                poisson::casimir_check(&point),
                poisson::involution_check(&point, &pairs),
                poisson::canonical_pairs_check(&factored, &roots),
                poisson::isospectral_check(&point, ISOSPECTRAL_STEPS),
                poisson::poisson_map_check(&point).map(|_| 1),
                pairs.iter().try_fold(0, |n, (z, e)| {
                    poisson::lax_form_check(&point, z, e).map(|_| n + 4)
                }),
                // The top coefficient can vanish at a particular ζ, so only
                // the bound is checked per sample.
                poisson::bracket_degrees(&point, &spec[0]).and_then(|d| {
                    if d.iter().all(|d| d.is_none_or(|d| d < genus)) {
                        Ok(3)
                    } else {
                        Err(Error::VerificationFailed(format!("degrees {d:?}")))
                    }
                }),
                cfrac_stream(&exp, 6),
            ]
        },
    )?;
    Ok(SuiteReport::new(
        "poisson",
        genus,
        seed,
        props,
        vec![],
        clock,
    ))
}

/// `d_0`, `v_0` of successive Lax points against the expansion lines.
fn cfrac_stream(exp: &Expansion, steps: usize) -> Result<usize> {
    let lines = exp.forward(steps)?;
    let mut pt = LaxPoint::from_expansion(exp)?;
    for line in &lines {
        if pt.d0() != line.d || pt.v0()? != line.v {
            return Err(Error::VerificationFailed(format!(
                "line {}: step gives (d, v) = ({}, {}), expansion gives ({}, {})",
                line.n,
                pt.d0(),
                pt.v0()?,
                line.d,
                line.v
            )));
        }
        pt = pt.bt_step()?;
    }
    Ok(2 * lines.len())
}

fn hankel_sequence(exp: &Expansion, size: usize) -> Result<Sequence> {
    let m = moments_forward(exp, 2 * size)?;
    Ok(Sequence::from(&HankelTable::from_moments(&m.s, size)?))
}

pub const SPECIALIZATION_NOTE: &str =
    "the Somos-8 property in genus two is not proved symbolically here; it is \
tested by exact evaluation at random rational specializations of the curve and seed";

/// 5×5 determinants and minor ratios on Hankel sequences of random
/// genus-two curves.
pub fn somos8_suite(samples: usize, seed: u64, size: usize) -> Result<SuiteReport> {
    let clock = Instant::now();
    if size < 13 {
        return Err(Error::InvalidArgument(
            "need at least 13 Hankel determinants".into(),
        ));
    }
    let props = run_samples(
        &[
            "5x5 determinants vanish",
            "minor ratios are shift invariant",
        ],
        samples,
        seed,
        |s| sample_expansion(s, 2, size),
        |input| {
            let r = expansion_of(input)
                .and_then(|exp| hankel_sequence(&exp, size))
                .and_then(|seq| somos8_detect(&seq, 4, size as i64 - 8));
            match r {
                Ok(rep) => vec![Ok(rep.determinants_checked), Ok(rep.minor_checks)],
                Err(e) => vec![Err(Error::VerificationFailed(e.to_string())), Err(e)],
            }
        },
    )?;
    Ok(SuiteReport::new(
        "somos8",
        2,
        seed,
        props,
        vec![SPECIALIZATION_NOTE.into()],
        clock,
    ))
}

/// Finder on the first `train` Hankel determinants of random curves, then
/// the relation is checked on `holdout` further terms.
pub fn somos_k_suite(
    genus: usize,
    samples: usize,
    seed: u64,
    train: usize,
    holdout: usize,
) -> Result<SuiteReport> {
    let clock = Instant::now();
    let k_max = crate::somos::default_k_max(genus);
    let props = run_samples(
        &[
            "relation of order at most 2^(g+1) found",
            "relation holds on held-out terms",
        ],
        samples,
        seed,
        |s| {
            // Integer coefficients keep heights down; only the first lines
            // need to exist since the finder skips zero determinants.
            s.height = 3;
            s.denominator = 1;
            sample_expansion(s, genus, 2)
        },
        |input| {
            let run = || -> Result<(usize, usize)> {
                let exp = expansion_of(input)?;
                let full = hankel_sequence(&exp, train + holdout - 1)?;
                let head = full.slice(0, train as i64)?;
                let mut rel =
                    somos_k_find(&head, &FindOptions::up_to(k_max))?.ok_or_else(|| {
                        Error::VerificationFailed(format!("no relation with k <= {k_max}"))
                    })?;
                let lo = train as i64 - rel.k as i64;
                let hi = full.end() - 1 - rel.k as i64;
                let checked = rel.verify(&full, lo, hi)?;
                Ok((rel.k, checked))
            };
            match run() {
                Ok((k, n)) => vec![Ok(k), Ok(n)],
                Err(e) => vec![Err(Error::VerificationFailed(e.to_string())), Err(e)],
            }
        },
    )?;
    Ok(SuiteReport::new(
        "somos-k",
        genus,
        seed,
        props,
        vec![],
        clock,
    ))
}

/// The genus-one QRT relation along random orbits.
pub fn qrt_suite(samples: usize, seed: u64, steps: usize) -> Result<SuiteReport> {
    let clock = Instant::now();
    let props = run_samples(
        &["d_{n+1} d_n^2 d_{n-1} = alpha d_n + beta"],
        samples,
        seed,
        |s| {
            for _ in 0..1000 {
                let (f, u) = (s.rational(), s.nonzero_rational());
                let start = G1State::new(s.nonzero_rational(), s.rational());
                let Ok(map) = G1Map::through(f, u, &start) else {
                    continue;
                };
                if let (orbit, None) = map.orbit(&start, steps) {
                    if orbit.iter().all(|p| !p.d.is_zero()) {
                        return Ok(serde_json::json!({ "map": map, "start": start }));
                    }
                }
            }
            Err(Error::Degenerate("no nonsingular orbit".into()))
        },
        |input| {
            let run = || -> Result<usize> {
                let map: G1Map = serde_json::from_value(input["map"].clone())?;
                let start: G1State = serde_json::from_value(input["start"].clone())?;
                let (orbit, err) = map.orbit(&start, steps);
                if let Some(e) = err {
                    return Err(e);
                }
                let d: Vec<Rational> = orbit.into_iter().map(|p| p.d).collect();
                Ok(qrt_check(&map, &d)?.checked)
            };
            vec![run()]
        },
    )?;
    Ok(SuiteReport::new("qrt", 1, seed, props, vec![], clock))
}

/// The deterministic checks on one given curve and seed.
pub fn curve_suite(exp: &Expansion, depth: usize) -> Result<SuiteReport> {
    let clock = Instant::now();
    let one = |name: &str, r: Result<usize>| {
        let input = serde_json::to_value(CurveFile::from_expansion(exp)).unwrap_or_default();
        fold(name, vec![r.map_err(|e| (input, e.to_string()))])
    };
    let identities = moments_forward(exp, 2 * depth + 2)
        .and_then(|m| check_identities(&m.s, depth))
        .map(|r| 3 * r.len());
    let lax = LaxPoint::from_expansion(exp);
    let props = vec![
        one(
            "forward determinant formulas",
            theorem_outcome(verify_theorem2(exp, depth)),
        ),
        one(
            "backward determinant formulas",
            theorem_outcome(verify_theorem3(exp, depth)),
        ),
        one("determinant identities", identities),
        one(
            "Casimirs and involution at the Lax point",
            lax.as_ref()
                .map_err(|e| Error::Degenerate(e.to_string()))
                .and_then(|p| Ok(poisson::casimir_check(p)? + poisson::involution_check(p, &[])?)),
        ),
        one(
            "step is a Poisson map",
            lax.as_ref()
                .map_err(|e| Error::Degenerate(e.to_string()))
                .and_then(|p| poisson::poisson_map_check(p).map(|_| 1)),
        ),
        one(
            "step reproduces the continued fraction",
            cfrac_stream(exp, depth),
        ),
    ];
    Ok(SuiteReport::new(
        "curve",
        exp.curve().genus(),
        0,
        props,
        vec![],
        clock,
    ))
}

/// Every suite that applies to `genus`.
pub fn all(genus: usize, samples: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    let mut out = vec![
        theorem2(genus, samples, seed, 6)?,
        identities(genus, samples, seed, 6)?,
        poisson_suite(genus, samples, seed)?,
    ];
    match genus {
        1 => out.push(qrt_suite(samples, seed, 30)?),
        2 => out.push(somos8_suite(samples, seed, 14)?),
        _ => {}
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|i| sample_seed(7, i)).collect();
        let mut b = a.clone();
        b.sort();
        b.dedup();
        assert_eq!(b.len(), 100);
        assert_ne!(sample_seed(7, 0), sample_seed(8, 0));
    }

    #[test]
    fn small_suites_pass() {
        assert!(theorem2(2, 3, 1, 5).unwrap().passed);
        assert!(identities(1, 3, 1, 5).unwrap().passed);
        let p = poisson_suite(2, 2, 1).unwrap();
        assert!(p.passed, "{p:#?}");
        assert!(qrt_suite(3, 1, 10).unwrap().passed);
    }

    #[test]
    fn example_curves_pass() {
        use crate::moments::tests::{example3, example4};
        for exp in [example3(), example4()] {
            let r = curve_suite(&exp, 6).unwrap();
            assert!(r.passed, "{r:#?}");
        }
    }

    #[test]
    fn results_do_not_depend_on_scheduling() {
        let a = poisson_suite(1, 4, 9).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| poisson_suite(1, 4, 9).unwrap());
        assert_eq!(a.properties, b.properties);
    }

    #[test]
    fn failures_carry_the_input() {
        let p = fold(
            "x",
            vec![
                Ok(2),
                Err((serde_json::json!({"a": 1}), "boom".into())),
                Ok(1),
            ],
        );
        assert!(!p.passed);
        let c = p.counterexample.unwrap();
        assert_eq!((c.sample, c.error.as_str()), (1, "boom"));
    }
}
