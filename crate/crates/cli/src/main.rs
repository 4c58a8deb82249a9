//! Command-line front end for the `sconvex` library.
//!
//! Exit codes: 0 verified or found, 2 refuted with a counterexample,
//! 3 resource cap exceeded, 4 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sconvex::abstract_convexity::{ConvexitySpace, Number};
use sconvex::certificate::{verify_cert, CertBody, CertificateFile};
use sconvex::constructions::{
    convex_position, moment_curve, periodic_coloring, random_general_points, sweep_t42, t42_instance,
    translated_copies, tverberg_tight_instance, verify_f3, verify_t42, verify_t999,
};
use sconvex::fsearch::{f_search, FSearchConfig, Mode, Sampler};
use sconvex::geometry::PointSet;
use sconvex::oracles::{
    build_r_separation, good_radon_partition, good_tverberg_partition, st_separable, verify_r_separation,
    PartitionSearch, StOutcome, DEFAULT_SEARCH_CAP,
};
use sconvex::ranges::build_union_polytope_system;
use sconvex::set_systems::{
    check_r_shatter, check_sauer, min_f_counting, r_vc_dim, vc_dim, vc_dim_witness, SetSystem, ShatterProfile,
    DEFAULT_CAP,
};
use sconvex::{Error, Subset};

#[derive(Parser, Debug)]
#[command(name = "sconvex", version, about = "Exact experiments on s-convex separation and partitions")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Input file (point set, set system, space, covers or certificate).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true)]
    s: Option<usize>,
    #[arg(long, global = true)]
    t: Option<usize>,
    #[arg(long, global = true)]
    r: Option<usize>,
    /// Comma-separated group counts, one per part.
    #[arg(long, global = true, value_delimiter = ',')]
    s_list: Option<Vec<usize>>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    cap: Option<u128>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for report.json, report.csv and certificate.json.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// VC-dimension of a set system.
    Vcdim,
    /// r-VC-dimension of a set system.
    Rvcdim,
    /// Shatter-function profile against the binomial bound.
    Shatter,
    /// r-shatter profile against its bound.
    Rshatter,
    /// Least f meeting the counting criterion that caps the r-VC-dimension.
    #[command(name = "bound-e31")]
    BoundE31,
    /// Traces of unions of ≤ s polyhedra with ≤ t facets.
    Traces,
    /// Good Radon partition search over all input points.
    Radon,
    /// Good Tverberg partition search over all input points.
    Tverberg,
    /// (s,t)-separability of two index sets.
    Separate {
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
        /// Defaults to the complement of A.
        #[arg(long, value_delimiter = ',')]
        b: Option<Vec<usize>>,
    },
    /// Separating polyhedral unions for covers with empty joint intersection.
    BuildSeparation {
        /// JSON list of covers, each a list of index groups.
        #[arg(long)]
        covers: PathBuf,
    },
    /// Point-set and instance generators.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Verifiers with pass/fail reports.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Sample point sets and search each for a good partition.
    Fsearch {
        #[arg(long, value_enum, default_value_t = SamplerKind::Random)]
        sampler: SamplerKind,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Re-check a certificate file.
    VerifyCert,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    MomentCurve,
    ConvexPosition,
    Periodic,
    Tight,
    Copies,
    T42,
}

#[derive(Subcommand, Debug)]
enum VerifyKind {
    T999,
    T42 {
        /// Comma-separated colors; all colorings when absent.
        #[arg(long, value_delimiter = ',')]
        coloring: Option<Vec<usize>>,
    },
    Sauer,
    Rshatter,
    F3,
    Abstract,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SamplerKind {
    Random,
    ConvexPosition,
    MomentCurve,
    File,
}

struct Outcome {
    code: u8,
    report: Value,
    csv: Option<String>,
    cert: Option<CertificateFile>,
    /// Printed instead of the JSON report.
    plain: Option<String>,
}

impl Outcome {
    fn new(code: u8, report: Value) -> Self {
        Outcome {
            code,
            report,
            csv: None,
            cert: None,
            plain: None,
        }
    }

    fn with_cert(mut self, cert: CertBody) -> Self {
        self.cert = Some(CertificateFile::new(cert));
        self
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn read(path: &Option<PathBuf>, what: &str) -> Result<String, Error> {
    let p = path
        .as_ref()
        .ok_or_else(|| Error::Input(format!("--input <{what}> is required")))?;
    fs::read_to_string(p).map_err(|e| Error::Input(format!("{}: {e}", p.display())))
}

fn points(c: &Common) -> Result<PointSet, Error> {
    PointSet::from_json(&read(&c.input, "points.json")?)
}

fn system(c: &Common) -> Result<SetSystem, Error> {
    SetSystem::from_json(&read(&c.input, "system.json")?)
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, Error> {
    v.ok_or_else(|| Error::Input(format!("--{flag} is required")))
}

fn subset(ix: &[usize], n: usize) -> Result<Subset, Error> {
    Subset::try_from_indices(ix, n)
}

fn code(ok: bool) -> u8 {
    if ok {
        0
    } else {
        2
    }
}

fn profile(p: ShatterProfile, strict: bool) -> Outcome {
    let mut o = Outcome::new(if strict { code(p.pass()) } else { 0 }, to_value(&p));
    o.csv = Some(p.to_csv());
    o
}

fn partition_outcome(ps: &PointSet, s_list: Vec<usize>, search: PartitionSearch) -> Outcome {
    match search {
        PartitionSearch::Found(g) => {
            let report = json!({ "found": true, "parts": to_value(&g.parts), "rank": g.rank, "transcript": to_value(&g.transcript) });
            Outcome::new(0, report).with_cert(CertBody::GoodPartition {
                points: ps.clone(),
                set: ps.all(),
                partition: g,
            })
        }
        PartitionSearch::NoneFound { candidates, refutations } => {
            let report = json!({ "found": false, "candidates": candidates as u64 });
            Outcome::new(2, report).with_cert(CertBody::NoGoodPartition {
                points: ps.clone(),
                set: ps.all(),
                s_list,
                candidates,
                refutations,
            })
        }
    }
}

fn run(cmd: &Command, c: &Common) -> Result<Outcome, Error> {
    let s = c.s.unwrap_or(1);
    let t = c.t.unwrap_or(1);
    if c.format == Format::Csv && !matches!(cmd, Command::Shatter | Command::Rshatter | Command::Verify { kind: VerifyKind::Sauer | VerifyKind::Rshatter }) {
        return Err(Error::Input("csv output is only available for shatter profiles".into()));
    }
    Ok(match cmd {
        Command::Vcdim => {
            let sys = system(c)?;
            let (d, w) = vc_dim_witness(&sys);
            Outcome::new(0, json!({ "vc_dim": d, "witness": to_value(&w) }))
        }
        Command::Rvcdim => {
            let sys = system(c)?;
            let r = c.r.unwrap_or(2);
            let d = r_vc_dim(&sys, r, c.cap.unwrap_or(DEFAULT_CAP))?;
            Outcome::new(0, json!({ "r": r, "r_vc_dim": d }))
        }
        Command::Shatter | Command::Verify { kind: VerifyKind::Sauer } => {
            let sys = system(c)?;
            let m = c.n.unwrap_or(sys.ground_size());
            let p = check_sauer(&sys, m, c.cap.unwrap_or(DEFAULT_CAP))?;
            profile(p, matches!(cmd, Command::Verify { .. }))
        }
        Command::Rshatter | Command::Verify { kind: VerifyKind::Rshatter } => {
            let sys = system(c)?;
            let m = c.n.unwrap_or(sys.ground_size());
            let p = check_r_shatter(&sys, c.r.unwrap_or(2), m, c.cap.unwrap_or(DEFAULT_CAP))?;
            profile(p, matches!(cmd, Command::Verify { .. }))
        }
        Command::BoundE31 => {
            let (d, r) = (need(c.d, "d")?, need(c.r, "r")?);
            let f = min_f_counting(d, r)?;
            let mut o = Outcome::new(0, json!({ "d": d, "r": r, "bound": f }));
            o.plain = Some(f.to_string());
            o
        }
        Command::Traces => {
            let ps = points(c)?;
            let sys = build_union_polytope_system(&ps, s, t)?;
            Outcome::new(0, to_value(&sys))
        }
        Command::Radon => {
            let ps = points(c)?;
            let search = good_radon_partition(&ps, ps.all(), s, t)?;
            partition_outcome(&ps, vec![s, t], search)
        }
        Command::Tverberg => {
            let ps = points(c)?;
            let r = need(c.r, "r")?;
            let s_list = c.s_list.clone().unwrap_or_else(|| vec![s; r]);
            let search = good_tverberg_partition(&ps, ps.all(), r, &s_list, c.cap.unwrap_or(DEFAULT_SEARCH_CAP))?;
            partition_outcome(&ps, s_list, search)
        }
        Command::Separate { a, b } => {
            let ps = points(c)?;
            let a = subset(a, ps.len())?;
            let b = match b {
                Some(b) => subset(b, ps.len())?,
                None => ps.all().minus(a),
            };
            match st_separable(&ps, a, b, s, t)? {
                StOutcome::Separable(certificate) => Outcome::new(0, json!({ "separable": true, "certificate": to_value(&certificate) }))
                    .with_cert(CertBody::Separation {
                        points: ps,
                        a,
                        b,
                        s,
                        t,
                        certificate,
                    }),
                StOutcome::Inseparable(ex) => Outcome::new(2, json!({ "separable": false, "transcript": to_value(&ex) })),
            }
        }
        Command::BuildSeparation { covers } => {
            let ps = points(c)?;
            let text = fs::read_to_string(covers).map_err(|e| Error::Input(format!("{}: {e}", covers.display())))?;
            let raw: Vec<Vec<Vec<usize>>> =
                serde_json::from_str(&text).map_err(|e| Error::Input(format!("covers JSON: {e}")))?;
            let covers = raw
                .iter()
                .map(|cv| cv.iter().map(|g| subset(g, ps.len())).collect())
                .collect::<Result<Vec<Vec<Subset>>, Error>>()?;
            let sep = build_r_separation(&ps, &covers)?;
            let chk = verify_r_separation(&ps, &covers, &sep)?;
            Outcome::new(code(chk.pass()), json!({ "check": to_value(&chk), "separation": to_value(&sep) })).with_cert(
                CertBody::RSeparation {
                    points: ps,
                    covers,
                    separation: sep,
                },
            )
        }
        Command::Gen { kind } => gen(kind, c)?,
        Command::Verify { kind } => verify(kind, c)?,
        Command::Fsearch { sampler, samples } => {
            let (sampler, d, n) = match sampler {
                SamplerKind::Random => (Sampler::RandomRational { samples: *samples }, need(c.d, "d")?, need(c.n, "n")?),
                SamplerKind::ConvexPosition => (Sampler::ConvexPosition, 2, need(c.n, "n")?),
                SamplerKind::MomentCurve => (Sampler::MomentCurve, need(c.d, "d")?, need(c.n, "n")?),
                SamplerKind::File => {
                    let ps = points(c)?;
                    let (d, n) = (ps.dim, ps.len());
                    (Sampler::File { points: ps }, d, n)
                }
            };
            let mode = match c.r {
                Some(r) => Mode::Tverberg {
                    r,
                    s_list: c.s_list.clone().unwrap_or_else(|| vec![s; r]),
                },
                None => Mode::Radon { s, t },
            };
            let cfg = FSearchConfig {
                d,
                n,
                seed: c.seed,
                cap: c.cap.unwrap_or(DEFAULT_SEARCH_CAP),
                sampler,
                mode,
            };
            let rep = f_search(&cfg)?;
            let s_list = match &cfg.mode {
                Mode::Radon { s, t } => vec![*s, *t],
                Mode::Tverberg { s_list, .. } => s_list.clone(),
            };
            let summary = json!({
                "d": d,
                "n": n,
                "samples": rep.samples.len(),
                "all_good": rep.all_good,
                "found": rep.samples.iter().filter(|s| s.found.is_some()).count(),
                "witness_index": rep.witness.as_ref().map(|w| w.index),
            });
            let mut o = Outcome::new(0, summary);
            if let Some(w) = rep.witness {
                o = o.with_cert(CertBody::NoGoodPartition {
                    set: w.points.all(),
                    points: w.points,
                    s_list,
                    candidates: w.candidates,
                    refutations: w.refutations,
                });
            }
            o
        }
        Command::VerifyCert => {
            let cert = CertificateFile::from_json(&read(&c.input, "certificate.json")?)?;
            let chk = verify_cert(&cert)?;
            Outcome::new(code(chk.valid), to_value(&chk))
        }
    })
}

fn gen(kind: &GenKind, c: &Common) -> Result<Outcome, Error> {
    Ok(match kind {
        GenKind::MomentCurve => Outcome::new(0, to_value(&moment_curve(need(c.n, "n")?, need(c.d, "d")?, None)?)),
        GenKind::ConvexPosition => Outcome::new(0, to_value(&convex_position(need(c.n, "n")?)?)),
        GenKind::Periodic => {
            let (n, r) = (need(c.n, "n")?, need(c.r, "r")?);
            Outcome::new(0, json!({ "n": n, "r": r, "coloring": periodic_coloring(n, r)? }))
        }
        GenKind::Tight => Outcome::new(
            0,
            to_value(&tverberg_tight_instance(need(c.d, "d")?, need(c.r, "r")?, c.seed)?),
        ),
        GenKind::Copies => Outcome::new(0, to_value(&translated_copies(&points(c)?, need(c.s, "s")?)?)),
        GenKind::T42 => Outcome::new(
            0,
            to_value(&t42_instance(need(c.d, "d")?, need(c.s, "s")?, need(c.r, "r")?)?),
        ),
    })
}

fn verify(kind: &VerifyKind, c: &Common) -> Result<Outcome, Error> {
    Ok(match kind {
        VerifyKind::T999 => {
            let rep = verify_t999(need(c.r, "r")?, need(c.s, "s")?, c.n)?;
            Outcome::new(code(rep.pass), to_value(&rep)).with_cert(CertBody::T999 { report: rep })
        }
        VerifyKind::T42 { coloring } => {
            let (d, s, r) = (need(c.d, "d")?, need(c.s, "s")?, need(c.r, "r")?);
            let inst = t42_instance(d, s, r)?;
            match coloring {
                Some(col) => {
                    let rep = verify_t42(&inst, col)?;
                    Outcome::new(code(rep.pass), to_value(&rep)).with_cert(CertBody::T42 { d, s, r, report: rep })
                }
                None => {
                    let sweep = sweep_t42(&inst, c.cap.unwrap_or(1 << 20))?;
                    Outcome::new(code(sweep.passed == sweep.colorings), to_value(&sweep))
                }
            }
        }
        VerifyKind::F3 => {
            let s = need(c.s, "s")?;
            let ps = match &c.input {
                Some(_) => points(c)?,
                None => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(c.seed);
                    random_general_points(&mut rng, 4 * s + 1, 3, 50)?
                }
            };
            let rep = verify_f3(&ps, s)?;
            Outcome::new(code(rep.pass), json!({ "points": to_value(&ps), "report": to_value(&rep) }))
        }
        VerifyKind::Abstract => {
            let space = ConvexitySpace::from_json(&read(&c.input, "space.json")?)?;
            let r = c.r.unwrap_or(3);
            let radon = space.radon_number()?;
            let tverberg = space.tverberg_number(r)?;
            let (separable, violation) = space.is_separable(c.cap.unwrap_or(DEFAULT_CAP))?;
            let vc = vc_dim(&space.halfspaces());
            // vc(halfspaces) <= radon - 1, claimed for separable spaces
            let vc_ok = match radon {
                Number::Finite(k) => !separable || vc + 1 <= k,
                Number::Infinite => true,
            };
            Outcome::new(
                code(vc_ok),
                json!({
                    "n": space.ground_size(),
                    "radon_number": radon.to_string(),
                    "r": r,
                    "tverberg_number": tverberg.to_string(),
                    "separable": separable,
                    "violation": to_value(&violation),
                    "halfspace_vc_dim": vc,
                    "vc_bound_holds": vc_ok,
                }),
            )
        }
        VerifyKind::Sauer | VerifyKind::Rshatter => unreachable!("dispatched in run"),
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource { .. } => 3,
        Error::Input(_) | Error::Precondition(_) => 4,
        Error::NoRadonPartition(_) => 2,
        Error::Invariant(_) => 1,
    }
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<(), Error> {
    fs::write(dir.join(name), body).map_err(|e| Error::Input(format!("{}: {e}", dir.join(name).display())))
}

fn emit(o: &Outcome, c: &Common) -> Result<(), Error> {
    let report = serde_json::to_string_pretty(&o.report).expect("reports serialize");
    match (&o.plain, c.format, &o.csv) {
        (Some(p), Format::Json, _) => println!("{p}"),
        (_, Format::Csv, Some(csv)) => print!("{csv}"),
        _ => println!("{report}"),
    }
    if let Some(dir) = &c.out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
        write_file(dir, "report.json", &(report + "\n"))?;
        if let Some(csv) = &o.csv {
            write_file(dir, "report.csv", csv)?;
        }
        if let Some(cert) = &o.cert {
            write_file(dir, "certificate.json", &(cert.to_json() + "\n"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let c = cli.common.clone();
    let result = match c.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(|| run(&cli.command, &c)),
            Err(e) => Err(Error::Input(format!("thread pool: {e}"))),
        },
        None => run(&cli.command, &c),
    };
    match result.and_then(|o| emit(&o, &c).map(|_| o.code)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
