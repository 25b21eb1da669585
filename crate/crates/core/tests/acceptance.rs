//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any fails. Expected values are written out here rather than
//! read from the bundled data so the two act as separate witnesses.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hypercf::cfrac::Expansion;
use hypercf::exactnum::Rational;
use hypercf::io::{parse_json, CurveFile};
use hypercf::maps::{verify_long_orbit, G2Map, G2State};
use hypercf::moments::{
    glue_tau, moments_backward, moments_forward, verify_theorem2, verify_theorem3, HankelTable,
};
use hypercf::repro;
use hypercf::somos::{chx_bridge, somos8_detect, Sequence, SomosRelation};
use hypercf::verify::{self, SuiteReport, POISSON_PROPERTIES};

const SEED: u64 = 20_240_917;

const CURVE_G1: &str =
    r#"{"genus":1,"A":["-3","0","1"],"R":["-2","-1"],"P0":["-1","0","1"],"Q0":["-2","-2"]}"#;
const CURVE_G2: &str = r#"{"genus":2,"A":["-1","-5","0","1"],"R":["-3","-2","-1"],"P0":["1/2","-5/2","0","1"],"Q0":["6","-2","-4"]}"#;

const SOMOS4: [i64; 14] = [1, 1, 1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209, 83313, 620297];

type Outcome = Result<String, String>;

fn expansion(json: &str) -> Expansion {
    parse_json::<CurveFile>(json)
        .and_then(|c| c.expansion())
        .expect("curve")
}

fn q(s: &str) -> Rational {
    s.parse().expect("rational literal")
}

fn qs(xs: &[&str]) -> Vec<Rational> {
    xs.iter().map(|s| q(s)).collect()
}

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&n| Rational::from_int(n)).collect()
}

fn same(what: &str, expected: &[Rational], got: &[Rational]) -> Result<(), String> {
    if expected.len() > got.len() {
        return Err(format!(
            "{what}: expected {} values, got {}",
            expected.len(),
            got.len()
        ));
    }
    match expected.iter().zip(got).position(|(a, b)| a != b) {
        Some(i) => Err(format!(
            "{what}[{i}]: expected {}, got {}",
            expected[i], got[i]
        )),
        None => Ok(()),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bundle(id: &str) -> Result<(), String> {
    let r = repro::run(id).map_err(|e| e.to_string())?;
    match r.checks.iter().find(|c| !c.passed) {
        Some(c) => Err(format!("bundle {id}: {} ({})", c.name, c.detail)),
        None => Ok(()),
    }
}

fn suite(r: hypercf::Result<SuiteReport>) -> Result<SuiteReport, String> {
    let r = r.map_err(|e| e.to_string())?;
    match r.properties.iter().find(|p| !p.passed) {
        Some(p) => Err(format!(
            "{} g={}: {} fails: {:?}",
            r.suite,
            r.genus,
            p.name,
            p.counterexample.as_ref().map(|c| &c.error)
        )),
        None => Ok(r),
    }
}

fn checks(r: &SuiteReport) -> usize {
    r.properties.iter().map(|p| p.checks).sum()
}

/// Somos-4 with unit coefficients, continued from the published terms.
fn somos4_extended(len: usize) -> Vec<Rational> {
    let mut a = ints(&SOMOS4);
    while a.len() < len {
        let n = a.len();
        let next = (&a[n - 1] * &a[n - 3] + &a[n - 2] * &a[n - 2]) / &a[n - 4];
        a.push(next);
    }
    a
}

fn c1() -> Outcome {
    let exp = expansion(CURVE_G1);
    let tau = glue_tau(&exp, 11, 1).map_err(|e| e.to_string())?;
    let got = tau.window(-2, 12).unwrap_or_default();
    same("tau", &ints(&SOMOS4), &got)?;
    ensure(got.len() == SOMOS4.len(), || format!("{} terms", got.len()))?;
    bundle("somos4-original")?;
    Ok(format!("{} terms bit-exact", got.len()))
}

fn c2() -> Outcome {
    let exp = expansion(CURVE_G1);
    let m = moments_forward(&exp, 12).map_err(|e| e.to_string())?;
    same(
        "moments",
        &ints(&[1, 0, 2, 1, 6, 7, 24, 41, 115, 236, 613, 1380]),
        &m.s,
    )?;
    let size = 14;
    let m = moments_forward(&exp, 2 * size).map_err(|e| e.to_string())?;
    let table = HankelTable::from_moments(&m.s, size).map_err(|e| e.to_string())?;
    same("hankel", &ints(&[1, 1, 2, 3, 7]), &table.delta)?;
    let tail = somos4_extended(size + 3);
    same("hankel vs somos-4", &tail[2..], &table.delta)?;
    let t = verify_theorem2(&exp, 12).map_err(|e| e.to_string())?;
    ensure(t.passed(), || format!("{:?}", t.mismatch))?;
    bundle("example3")?;
    Ok(format!(
        "12 moments, {} determinants match the Somos-4 tail, {} identities",
        table.delta.len(),
        t.checked
    ))
}

fn c3() -> Outcome {
    let exp = expansion(CURVE_G2);
    let m = moments_forward(&exp, 16).map_err(|e| e.to_string())?;
    let table = HankelTable::from_moments(&m.s, 8).map_err(|e| e.to_string())?;
    same(
        "delta",
        &ints(&[1, 1, 2, 6, 31, 319, 5810, 147719, 8526736]),
        &table.delta,
    )?;
    same(
        "delta*",
        &ints(&[0, 0, 0, 4, 16, 200, 6987, 161401, 11022617]),
        &table.delta_star,
    )?;
    bundle("example4")?;
    Ok("9 + 9 determinants bit-exact".into())
}

fn c4() -> Outcome {
    let exp = expansion(CURVE_G2);
    let m = moments_backward(&exp, 12).map_err(|e| e.to_string())?;
    same("backward moments", &qs(&["-5/8", "-1/16", "-45/32"]), &m.s)?;
    let table = HankelTable::from_moments(&m.s, 6).map_err(|e| e.to_string())?;
    let expected = qs(&[
        "1",
        "-5/8",
        "7/8",
        "-303/128",
        "4091/512",
        "-63805/1024",
        "3496637/4096",
    ]);
    same("delta dagger", &expected, &table.delta)?;
    let alternating = table
        .delta
        .iter()
        .enumerate()
        .all(|(n, x)| x.is_negative() == (n % 2 == 1));
    ensure(alternating, || "signs do not alternate".into())?;
    let t = verify_theorem3(&exp, 7).map_err(|e| e.to_string())?;
    ensure(t.passed(), || format!("{:?}", t.mismatch))?;
    bundle("example5")?;
    Ok(format!(
        "7 determinants, alternating, {} backward identities",
        t.checked
    ))
}

fn c5() -> Outcome {
    let exp = expansion(CURVE_G2);
    let tau = glue_tau(&exp, 8, 8).map_err(|e| e.to_string())?;
    let expected = ints(&[
        562196701, 6993274, 127610, 4091, 303, 28, 5, 2, 1, 1, 2, 6, 31, 319, 5810, 147719,
    ]);
    same(
        "glued tau",
        &expected,
        &tau.window(-8, 8).unwrap_or_default(),
    )?;

    let tau = glue_tau(&exp, 16, 16).map_err(|e| e.to_string())?;
    let seq = Sequence::new(tau.start, tau.tau.clone());
    let (lo, hi) = (-8, 0);
    let found = somos8_detect(&seq, lo, hi).map_err(|e| e.to_string())?;
    let coefficients = ints(&[7, 137, 2504, -43424, -26959]);
    ensure(found.relation.k == 8, || {
        format!("order {}", found.relation.k)
    })?;
    same("coefficients", &coefficients, &found.relation.coefficients)?;

    // The detector reads rows lo-4..=hi; re-check on windows outside them.
    let mut rel = SomosRelation::new(8, coefficients).map_err(|e| e.to_string())?;
    let (first, last) = rel.full_window(&seq);
    let outside: Vec<i64> = (first..=last)
        .filter(|n| !(lo - 4..=hi).contains(n))
        .collect();
    let mut windows = 0;
    for w in outside.chunks(2) {
        rel.verify(&seq, w[0], w[w.len() - 1])
            .map_err(|e| e.to_string())?;
        windows += 1;
    }
    ensure(windows >= 5, || format!("only {windows} fresh windows"))?;
    bundle("glued-doubtau")?;
    bundle("somos8")?;
    Ok(format!(
        "16 glued terms, relation found on n={lo}..={hi}, re-verified on {windows} fresh windows"
    ))
}

fn c6() -> Outcome {
    let exp = expansion(CURVE_G1);
    let b = chx_bridge(&exp, 12).map_err(|e| e.to_string())?;
    same(
        "parameters",
        &ints(&[2, 0, 1, 1, 1]),
        &[b.alpha, b.beta, b.gamma, b.s0, b.s1],
    )?;
    same("D", &ints(&[1, 1, 2, 3]), &b.d)?;
    same("D = delta", &b.delta, &b.d)?;
    ensure(b.d.len() == 13, || format!("{} values", b.d.len()))?;
    bundle("xin-bridge")?;
    Ok("(2, 0, 1, 1, 1); D_n = delta_n for n <= 12".into())
}

fn c7() -> Outcome {
    let r = suite(verify::somos8_suite(20, SEED, 16))?;
    ensure(r.notes.iter().any(|n| n.contains("specializ")), || {
        "missing specialization note".into()
    })?;
    Ok(format!(
        "20 curves, {} exact checks; by specialization, not symbolic proof",
        checks(&r)
    ))
}

fn c8() -> Outcome {
    let r = suite(verify::somos_k_suite(3, 5, SEED, 40, 10))?;
    Ok(format!(
        "5 curves, k <= 16, 10 held-out terms each; genus 4 skipped ({} checks)",
        checks(&r)
    ))
}

fn c9() -> Outcome {
    let mut total = 0;
    for genus in 1..=3 {
        let r = suite(verify::poisson_suite(genus, 20, SEED))?;
        ensure(r.properties.len() == POISSON_PROPERTIES.len(), || {
            format!("{} properties", r.properties.len())
        })?;
        total += checks(&r);
    }
    Ok(format!(
        "g = 1, 2, 3 with 20 points each, {} properties, {total} exact checks",
        POISSON_PROPERTIES.len()
    ))
}

fn c10() -> Outcome {
    let mut total = 0;
    for genus in 1..=3 {
        total += checks(&suite(verify::identities(genus, 5, SEED, 6))?);
    }
    Ok(format!(
        "curve and random Hankel data, n <= 6, {total} exact checks"
    ))
}

fn c11() -> Outcome {
    let r = suite(verify::qrt_suite(10, SEED, 30))?;
    let map = G2Map {
        f: q("-5"),
        g: q("-1"),
        u: q("-1"),
    };
    let start = G2State::from_pairs(&map, &q("5/4"), &q("2"), &q("-1/2"), &q("0"));
    let long = verify_long_orbit(&map, &start, 2000, 40).map_err(|e| e.to_string())?;
    ensure(long.h1 == q("-2") && long.h2 == q("-3"), || {
        format!("H = ({}, {})", long.h1, long.h2)
    })?;
    bundle("fig1-orbit")?;
    Ok(format!(
        "10 orbits x 30 steps ({} checks); 2000 steps, H1 = -2, H2 = -3 ({} over Q, all mod {:?})",
        checks(&r),
        long.exact_steps,
        long.primes
    ))
}

struct Criterion {
    id: u32,
    title: &'static str,
    bound: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            title: "Somos-4 from the Hankel pipeline",
            bound: Some(secs(1)),
            run: c1,
        },
        Criterion {
            id: 2,
            title: "genus-one example",
            bound: None,
            run: c2,
        },
        Criterion {
            id: 3,
            title: "genus-two forward determinants",
            bound: None,
            run: c3,
        },
        Criterion {
            id: 4,
            title: "genus-two backward determinants",
            bound: None,
            run: c4,
        },
        Criterion {
            id: 5,
            title: "glued sequence and Somos-8",
            bound: Some(secs(10)),
            run: c5,
        },
        Criterion {
            id: 6,
            title: "moment recursion bridge",
            bound: None,
            run: c6,
        },
        Criterion {
            id: 7,
            title: "Somos-8 on random genus-two curves",
            bound: Some(secs(120)),
            run: c7,
        },
        Criterion {
            id: 8,
            title: "Somos-k search in genus three",
            bound: Some(secs(600)),
            run: c8,
        },
        Criterion {
            id: 9,
            title: "Poisson structure suite",
            bound: Some(secs(120)),
            run: c9,
        },
        Criterion {
            id: 10,
            title: "determinant identities",
            bound: None,
            run: c10,
        },
        Criterion {
            id: 11,
            title: "QRT invariant and long genus-two orbit",
            bound: None,
            run: c11,
        },
    ];
    println!("acceptance: seed {SEED}");
    let mut failed = 0;
    for c in &criteria {
        let clock = Instant::now();
        let outcome = (c.run)();
        let elapsed = clock.elapsed();
        let outcome = match (outcome, c.bound) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, bound {b:?}")),
            (o, _) => o,
        };
        let bound = c.bound.map_or(String::new(), |b| format!(", bound {b:?}"));
        match outcome {
            Ok(detail) => println!(
                "PASS {:>2} {}: {detail} [{elapsed:.2?}{bound}]",
                c.id, c.title
            ),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {}: {why} [{elapsed:.2?}{bound}]", c.id, c.title);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
