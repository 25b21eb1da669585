use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use hypercf::cfrac::Expansion;
use hypercf::exactnum::Rational;
use hypercf::io::{self, CurveFile, LineRecord};
use hypercf::maps::{G1Map, G1State, G2Map, G2State};
use hypercf::moments::{glue_tau, moments_backward, moments_forward, HankelTable};
use hypercf::somos::{default_k_max, somos_k_find, FindOptions, Sequence, SomosRelation};
use hypercf::{repro, verify, Error};

#[derive(Parser)]
#[command(
    name = "hypercf",
    version,
    about = "Exact continued fractions on hyperelliptic curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Continued-fraction lines as JSON records, one per line.
    Expand {
        #[arg(long)]
        curve: PathBuf,
        /// Forward lines after the seed.
        #[arg(long, default_value_t = 10)]
        lines: usize,
        /// Backward lines before the seed.
        #[arg(long, default_value_t = 0)]
        backward: usize,
    },
    /// Orbit of the genus-one or genus-two map as CSV.
    Orbit {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        genus: u8,
        #[arg(long)]
        steps: usize,
        /// Curve file, or a map and starting state.
        #[arg(long)]
        seed_json: PathBuf,
        /// Append lossy decimal columns for plotting.
        #[arg(long)]
        float: bool,
    },
    /// Moments at either point at infinity.
    Moments {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 12)]
        count: usize,
        #[arg(long)]
        backward: bool,
        #[command(flatten)]
        format: Format,
    },
    /// Hankel determinants of the moments.
    Hankel {
        #[arg(long)]
        curve: PathBuf,
        /// Largest determinant size.
        #[arg(long, default_value_t = 8)]
        size: usize,
        #[arg(long)]
        backward: bool,
        /// Print the shifted determinants instead.
        #[arg(long)]
        shifted: bool,
        #[command(flatten)]
        format: Format,
    },
    /// Two-sided tau sequence glued from both Hankel tables.
    Tau {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 8)]
        forward: usize,
        #[arg(long, default_value_t = 8)]
        backward: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Somos relations of a sequence.
    Somos {
        #[command(subcommand)]
        action: SomosAction,
    },
    /// Randomized property suites.
    Verify {
        suite: Suite,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// Recompute a published example and diff it against the shipped values.
    Repro {
        /// Bundle name, or `all`.
        bundle: String,
        /// Where to write the orbit CSV of `fig1-orbit`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Format {
    /// Space-separated integers when every value is integral.
    #[arg(long)]
    oeis_style: bool,
}

#[derive(Subcommand)]
enum SomosAction {
    /// Smallest Somos-k relation with k up to `--kmax`.
    Find {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Check a relation on every window of a sequence.
    Verify {
        #[arg(long)]
        relation: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Theorem2,
    Poisson,
    Identities,
    Somos8,
    SomosK,
    Qrt,
    All,
}

#[derive(Args)]
struct VerifyOpts {
    #[arg(long, default_value_t = 2)]
    genus: usize,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `random`, or a curve file to check instead of random samples.
    #[arg(long, default_value = "random")]
    curve: String,
}

/// Why a command did not succeed.
enum Failure {
    /// A check failed; exit status 1.
    Check(String),
    /// Bad input; exit status 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Check(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load_expansion(path: &Path) -> Result<Expansion, Failure> {
    Ok(io::read_json::<CurveFile>(path)?.expansion()?)
}

fn print_values(out: &mut impl Write, values: &[Rational], format: &Format) -> Outcome {
    match format
        .oeis_style
        .then(|| io::integer_line(values))
        .flatten()
    {
        Some(line) => writeln!(out, "{line}")?,
        None => writeln!(out, "{}", io::to_json(&values))?,
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SequenceFile {
    Indexed(Sequence),
    Plain(Vec<Rational>),
}

fn load_sequence(path: &Path) -> Result<Sequence, Failure> {
    Ok(match io::read_json::<SequenceFile>(path)? {
        SequenceFile::Indexed(s) => s,
        SequenceFile::Plain(terms) => Sequence::new(0, terms),
    })
}

#[derive(Deserialize)]
struct PairStart {
    d0: Rational,
    d1: Rational,
    v0: Rational,
    v1: Rational,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OrbitSeed {
    Curve(CurveFile),
    G1 {
        map: G1Map,
        start: G1State,
    },
    G2 {
        map: G2Map,
        start: G2State,
    },
    G2Pairs {
        f: Rational,
        g: Rational,
        u: Rational,
        start: PairStart,
    },
}

fn orbit(out: &mut impl Write, genus: u8, steps: usize, seed: &Path, float: bool) -> Outcome {
    let seed: OrbitSeed = io::read_json(seed)?;
    let wrong = || {
        Failure::Input(format!(
            "seed document does not describe a genus {genus} orbit"
        ))
    };
    let err = match (genus, seed) {
        (1, OrbitSeed::Curve(c)) if c.genus == 1 => {
            let exp = c.expansion()?;
            g1_orbit(
                out,
                G1Map::from_curve(exp.curve())?,
                G1State::from_line(exp.seed()),
                steps,
                float,
            )?
        }
        (1, OrbitSeed::G1 { map, start }) => g1_orbit(out, map, start, steps, float)?,
        (2, OrbitSeed::Curve(c)) if c.genus == 2 => {
            let exp = c.expansion()?;
            let start = G2State::from_line(exp.curve(), exp.seed())?;
            g2_orbit(out, G2Map::from_curve(exp.curve())?, start, 0, steps, float)?
        }
        (2, OrbitSeed::G2 { map, start }) => g2_orbit(out, map, start, 0, steps, float)?,
        (2, OrbitSeed::G2Pairs { f, g, u, start: s }) => {
            let map = G2Map { f, g, u };
            let start = G2State::from_pairs(&map, &s.d0, &s.d1, &s.v0, &s.v1);
            g2_orbit(out, map, start, 1, steps, float)?
        }
        _ => return Err(wrong()),
    };
    match err {
        Some(e) => Err(Failure::Check(format!("{e}; partial orbit written"))),
        None => Ok(()),
    }
}

fn g1_orbit(
    out: &mut impl Write,
    map: G1Map,
    start: G1State,
    steps: usize,
    float: bool,
) -> Result<Option<Error>, Failure> {
    let (orbit, err) = map.orbit(&start, steps);
    write!(out, "{}", io::g1_orbit_csv(0, &orbit, float))?;
    Ok(err)
}

fn g2_orbit(
    out: &mut impl Write,
    map: G2Map,
    start: G2State,
    first: i64,
    steps: usize,
    float: bool,
) -> Result<Option<Error>, Failure> {
    let (orbit, err) = map.orbit(&start, steps);
    write!(out, "{}", io::g2_orbit_csv(first, &orbit, float))?;
    Ok(err)
}

fn expand(out: &mut impl Write, curve: &Path, lines: usize, backward: usize) -> Outcome {
    let exp = load_expansion(curve)?;
    let (back, back_err) = exp.backward_partial(backward);
    for l in back.iter().skip(1).rev() {
        writeln!(out, "{}", io::to_json(&LineRecord::from(l)))?;
    }
    let (fwd, fwd_err) = exp.forward_partial(lines);
    for l in &fwd {
        writeln!(out, "{}", io::to_json(&LineRecord::from(l)))?;
    }
    match back_err.or(fwd_err) {
        Some(e) => Err(Failure::Check(format!("{e}; partial output written"))),
        None => Ok(()),
    }
}

fn somos(out: &mut impl Write, action: SomosAction) -> Outcome {
    match action {
        SomosAction::Find { input, kmax } => {
            let seq = load_sequence(&input)?;
            let k_max = kmax.unwrap_or(default_k_max(2));
            match somos_k_find(&seq, &FindOptions::up_to(k_max))? {
                Some(rel) => {
                    writeln!(out, "{}", io::to_json(&rel))?;
                    Ok(())
                }
                None => Err(Failure::Check(format!(
                    "no Somos relation with k <= {k_max}"
                ))),
            }
        }
        SomosAction::Verify { relation, input } => {
            let mut rel: SomosRelation = io::read_json(&relation)?;
            rel = SomosRelation::new(rel.k, rel.coefficients)?;
            let seq = load_sequence(&input)?;
            rel.verify_all(&seq)?;
            writeln!(out, "{}", io::to_json(&rel))?;
            Ok(())
        }
    }
}

fn run_verify(out: &mut impl Write, suite: Suite, o: &VerifyOpts) -> Outcome {
    if o.genus == 0 {
        return Err(Failure::Input("genus must be at least 1".into()));
    }
    let reports = if o.curve != "random" {
        let exp = load_expansion(Path::new(&o.curve))?;
        vec![verify::curve_suite(&exp, 8)?]
    } else {
        let (g, n, s) = (o.genus, o.samples, o.seed);
        match suite {
            Suite::Theorem2 => vec![verify::theorem2(g, n, s, 8)?],
            Suite::Poisson => vec![verify::poisson_suite(g, n, s)?],
            Suite::Identities => vec![verify::identities(g, n, s, 6)?],
            Suite::Somos8 => vec![verify::somos8_suite(n, s, 16)?],
            Suite::SomosK => vec![verify::somos_k_suite(g, n, s, 40, 10)?],
            Suite::Qrt => vec![verify::qrt_suite(n, s, 30)?],
            Suite::All => verify::all(g, n, s)?,
        }
    };
    for r in &reports {
        writeln!(out, "{}", io::to_json(r))?;
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.suite.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "failed suites: {}",
            failed.join(", ")
        )))
    }
}

fn run_repro(out: &mut impl Write, bundle: &str, csv: Option<&Path>) -> Outcome {
    let reports = if bundle == "all" {
        repro::run_all()?
    } else {
        vec![repro::run(bundle)?]
    };
    for r in &reports {
        writeln!(out, "{}", io::to_json(r))?;
        if let (Some(path), Some(data)) = (csv, &r.artifact) {
            std::fs::write(path, data)?;
        }
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.id.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "bundles differ from the shipped values: {}",
            failed.join(", ")
        )))
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    match cli.command {
        Command::Expand {
            curve,
            lines,
            backward,
        } => expand(out, &curve, lines, backward),
        Command::Orbit {
            genus,
            steps,
            seed_json,
            float,
        } => orbit(out, genus, steps, &seed_json, float),
        Command::Moments {
            curve,
            count,
            backward,
            format,
        } => {
            let exp = load_expansion(&curve)?;
            let m = if backward {
                moments_backward(&exp, count)?
            } else {
                moments_forward(&exp, count)?
            };
            print_values(out, &m.s, &format)
        }
        Command::Hankel {
            curve,
            size,
            backward,
            shifted,
            format,
        } => {
            let exp = load_expansion(&curve)?;
            let m = if backward {
                moments_backward(&exp, 2 * size)?
            } else {
                moments_forward(&exp, 2 * size)?
            };
            let t = HankelTable::from_moments(&m.s, size)?;
            print_values(out, if shifted { &t.delta_star } else { &t.delta }, &format)
        }
        Command::Tau {
            curve,
            forward,
            backward,
            format,
        } => {
            let exp = load_expansion(&curve)?;
            let t = glue_tau(&exp, forward, backward)?;
            if format.oeis_style {
                if let Some(line) = io::integer_line(&t.tau) {
                    writeln!(out, "{line}")?;
                    return Ok(());
                }
            }
            writeln!(out, "{}", io::to_json(&Sequence::from(&t)))?;
            Ok(())
        }
        Command::Somos { action } => somos(out, action),
        Command::Verify { suite, opts } => run_verify(out, suite, &opts),
        Command::Repro { bundle, csv } => run_repro(out, &bundle, csv.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(Failure::Check(msg)), _) => {
            eprintln!("hypercf: {msg}");
            ExitCode::from(1)
        }
        (Err(Failure::Input(msg)), _) => {
            eprintln!("hypercf: {msg}");
            ExitCode::from(2)
        }
        (Ok(()), Err(e)) => {
            eprintln!("hypercf: {e}");
            ExitCode::from(2)
        }
    }
}
