//! Command-line front end: argument parsing, artifact files and the worker
//! pool. Every numeric input is parsed exactly; floats only appear in output.

pub mod cases;
pub mod exec;
pub mod store;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use adesieve_core::anfamily::{
    coeff_list, discriminant, discriminant_form, discriminant_sylvester, divisibility_type_with, normalized_discriminant,
    sigma_m, trace_zero_discriminant_form, DivisibilityOptions, MonicPoly, W0Matrix,
};
use adesieve_core::cuspintegral::verify_case;
use adesieve_core::rootsystem::{build_root_system, pinned_automorphism, DynkinType};
use adesieve_core::sieve::{
    assemble, empirical_density, prime_density, tail_profile, CompareOptions, FamilySpec,
    GlobalEngine, GlobalOptions, LocalDensity, Method, Verdict, LOCAL_BUDGET,
};
use adesieve_core::vinberg::{grade, lambda_exponents, zeta_product};
use adesieve_core::{BigInt, BigRational, Q};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::exec::Pool;
use crate::store::{write_atomic, write_json, Cache};

#[derive(Debug, Parser)]
#[command(name = "adesieve", version, about = "Vinberg gradings, cusp-integral exponents and squarefree discriminant sieves")]
pub struct Cli {
    /// Worker threads, 0..=1024; 0 means one per core
    #[arg(long, global = true, default_value_t = 0, value_parser = clap::value_parser!(u16).range(0..=1024))]
    pub threads: u16,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Auto,
    Sieve,
    Pointwise,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root system summary: counts, highest root, pinned automorphism
    Roots {
        /// Dynkin type: A1.., D4.., E6, E7 or E8
        #[arg(long = "type", value_name = "TYPE")]
        dtype: DynkinType,
        /// Also list every root in simple-root coordinates
        #[arg(long)]
        list: bool,
    },
    /// Stable grading: dimensions, degrees and restricted roots
    Grade {
        /// Dynkin type: A1.., D4.., E6, E7 or E8
        #[arg(long = "type", value_name = "TYPE")]
        dtype: DynkinType,
        /// Write the graded data as JSON
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Recompute a cusp case and compare it field by field
    VerifyCase {
        /// E6, E7, E8 or Dn with n >= 4
        #[arg(long, value_name = "NAME")]
        case: String,
        /// Case records to read instead of the shipped file
        #[arg(long, value_name = "FILE")]
        cases: Option<PathBuf>,
        /// Write the verification report as JSON
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Exponents r_i of the reducible-orbit character and the product of zeta(r_i + 1)
    Lambda {
        /// Dynkin type of the case: A1.., D4.., E6, E7 or E8
        #[arg(long, value_name = "NAME")]
        case: DynkinType,
    },
    /// Product of zeta(r_i + 1) over a list of rationals r_i > 0
    Zeta {
        /// Comma-separated exact rationals, each > 0
        #[arg(long, value_name = "LIST", value_delimiter = ',', value_parser = parse_q, required = true)]
        r: Vec<Q>,
        /// Decimal places printed, 1..=15
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=15))]
        digits: u8,
    },
    /// Discriminant of a monic polynomial by two routes, or a generic form
    Disc {
        /// Coefficients b1,..,bd of x^d + b1 x^(d-1) + ... + bd
        #[arg(long, value_name = "LIST", allow_hyphen_values = true, conflicts_with = "form", required_unless_present = "form")]
        poly: Option<String>,
        /// Degree d, 2..=64; pads missing leading coefficients with 0
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=64))]
        degree: Option<u8>,
        /// Positive integer dividing the discriminant
        #[arg(long, default_value = "1", value_parser = parse_positive)]
        normalizer: BigInt,
        /// Print the generic discriminant form of degree 2..=6 instead
        #[arg(long, value_name = "D", value_parser = clap::value_parser!(u8).range(2..=6))]
        form: Option<u8>,
        /// With --form, set b1 = 0
        #[arg(long, requires = "form")]
        trace_zero: bool,
    },
    /// Strong or weak divisibility of the discriminant by p^2
    Classify {
        /// Coefficients b1,..,bd
        #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
        poly: String,
        /// Degree d, 2..=64
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=64))]
        degree: Option<u8>,
        /// Prime p, 2..=4294967291
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=4_294_967_291))]
        p: u64,
        /// Largest p^d the brute-force scan may visit, 1..
        #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Integral representative sigma_m with Q-invariant m
    Construct {
        /// Coefficients b1,..,bd
        #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
        poly: String,
        /// Degree d, 2..=64
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=64))]
        degree: Option<u8>,
        /// Positive integer m
        #[arg(long, value_parser = parse_positive)]
        m: BigInt,
        /// Write the matrix and certificate as JSON
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Write the matrix as CSV of exact fractions
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Local density rho_p over (Z/p^2)^r
    LocalDensity {
        /// A_r family, trace zero (A2) or full (A2-full)
        #[arg(long, value_name = "NAME")]
        family: String,
        /// Prime p, 2..=4294967291
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=4_294_967_291))]
        p: u64,
        /// Monte-Carlo samples when enumeration is over budget, 1..
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: Option<u64>,
        /// Monte-Carlo seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Largest number of fibres enumerated exactly, 1..=100000000
        #[arg(long, default_value_t = LOCAL_BUDGET, value_parser = clap::value_parser!(u64).range(1..=LOCAL_BUDGET))]
        budget: u64,
        /// Write the density as JSON
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Squarefree-discriminant count over a height box, and tail sets
    Sieve {
        /// A_r family, trace zero (A2) or full (A2-full)
        #[arg(long, value_name = "NAME")]
        family: String,
        /// Height X > 0, an exact rational such as 30 or 5/2
        #[arg(long, value_parser = parse_q)]
        height: Q,
        /// Comma-separated thresholds M for the strong and weak tail counts
        #[arg(long, value_name = "LIST", value_delimiter = ',', value_parser = parse_q)]
        tail_m: Vec<Q>,
        /// Counting engine; auto picks the residue sieve for A2
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        /// Trial-division bound of the squarefree test, 2..=100000000
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..=100_000_000))]
        squarefree_bound: u64,
        /// Write the counts as JSON
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Truncated Euler product against the empirical ratio
    Compare {
        /// A_r family, trace zero (A2) or full (A2-full)
        #[arg(long, value_name = "NAME")]
        family: String,
        /// Largest prime in the product, 2..=100000
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=100_000))]
        pmax: u64,
        /// Height X > 0, an exact rational
        #[arg(long, value_parser = parse_q)]
        height: Q,
        /// Monte-Carlo seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Monte-Carlo samples per prime above --exact-limit, 1..
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Primes up to this bound are enumerated exactly, 0..=1000
        #[arg(long, default_value_t = 13, value_parser = clap::value_parser!(u64).range(0..=1000))]
        exact_limit: u64,
        /// Counting engine; auto picks the residue sieve for A2
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        /// Report path; defaults to compare-FAMILY-pPMAX-XHEIGHT.json
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Also write the (p, rho_p) table as CSV
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
}

/// Why a run stopped, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// A check did not hold: exit 1.
    Failed(String),
    /// Filesystem trouble: exit 1.
    Io(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Failed(_) | Failure::Io(_) => 1,
        }
    }

    /// `adesieve: <kind>: <reason>` on one line.
    pub fn line(&self) -> String {
        let (kind, msg) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Failed(m) => ("failed", m),
            Failure::Io(m) => ("io", m),
        };
        format!("adesieve: {kind}: {}", msg.replace('\n', " "))
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| format!("not a rational: {s:?}"))?;
            let d: i64 = d.trim().parse().map_err(|_| format!("not a rational: {s:?}"))?;
            if d == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Q::new(n, d)
        }
        None => Q::from_integer(s.parse().map_err(|_| format!("not a rational: {s:?}"))?),
    };
    Ok(q)
}

fn parse_positive(s: &str) -> Result<BigInt, String> {
    let n: BigInt = s.trim().parse().map_err(|_| format!("not an integer: {s:?}"))?;
    if n <= BigInt::from(0) {
        return Err(format!("must be positive: {s}"));
    }
    Ok(n)
}

fn poly(s: &str, degree: Option<u8>) -> Result<MonicPoly, Failure> {
    MonicPoly::parse(s, degree.map(usize::from)).map_err(usage)
}

fn family(name: &str) -> Result<FamilySpec, Failure> {
    FamilySpec::parse(name).map_err(usage)
}

fn engine(e: EngineArg) -> Option<GlobalEngine> {
    match e {
        EngineArg::Auto => None,
        EngineArg::Sieve => Some(GlobalEngine::QuadraticSieve),
        EngineArg::Pointwise => Some(GlobalEngine::Pointwise),
    }
}

fn save_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    if let Some(p) = path {
        write_json(p, value).map_err(|e| io_err(p, e))?;
    }
    Ok(())
}

fn fraction(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Serialize)]
struct ExactEntry {
    num: String,
    den: String,
}

fn exact_rows(m: &W0Matrix) -> Vec<Vec<ExactEntry>> {
    m.entries()
        .iter()
        .map(|row| row.iter().map(|q| ExactEntry { num: q.numer().to_string(), den: q.denom().to_string() }).collect())
        .collect()
}

fn matrix_text(m: &W0Matrix) -> String {
    let cells: Vec<Vec<String>> = m.entries().iter().map(|r| r.iter().map(fraction).collect()).collect();
    let w = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
    let mut s = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
        writeln!(s, "  [ {} ]", line.join("  ")).unwrap();
    }
    s
}

fn density_key(fam: &FamilySpec, p: u64, method: Method, seed: u64, samples: u64) -> String {
    match method {
        Method::Enum => format!("local-density/v1|family={}|p={p}|method=ENUM", fam.name),
        Method::MonteCarlo => {
            format!("local-density/v1|family={}|p={p}|method=MONTECARLO|seed={seed}|samples={samples}", fam.name)
        }
    }
}

fn planned_method(fam: &FamilySpec, p: u64, opts: &CompareOptions) -> Method {
    let q = (p as u128) * (p as u128);
    let within = q.checked_pow(fam.rank() as u32).is_some_and(|n| n <= opts.budget as u128);
    if p <= opts.exact_limit && within {
        Method::Enum
    } else {
        Method::MonteCarlo
    }
}

/// [`prime_density`] through the cache when one is configured.
fn cached_density(
    cache: Option<&Cache>,
    fam: &FamilySpec,
    p: u64,
    opts: &CompareOptions,
    pool: &Pool,
) -> Result<LocalDensity, Failure> {
    let key = density_key(fam, p, planned_method(fam, p, opts), opts.seed, opts.samples);
    if let Some(hit) = cache.and_then(|c| c.get::<LocalDensity>(&key)) {
        return Ok(hit);
    }
    let d = prime_density(fam, p, opts, pool).map_err(usage)?;
    if let Some(c) = cache {
        c.put(&key, &d).map_err(|e| io_err(&c.path_for(&key), e))?;
    }
    Ok(d)
}

fn roots(dtype: DynkinType, list: bool, out: &mut String) {
    let rs = build_root_system(dtype);
    let theta = pinned_automorphism(&rs);
    writeln!(out, "type {dtype}").unwrap();
    writeln!(out, "rank {}", rs.rank()).unwrap();
    writeln!(out, "roots {}", rs.roots.len()).unwrap();
    writeln!(out, "positive roots {}", rs.positive_roots().count()).unwrap();
    writeln!(out, "highest root ({})", rs.highest_root()).unwrap();
    let img: Vec<String> = theta.iter().map(|i| (i + 1).to_string()).collect();
    writeln!(out, "theta on simple roots {}", img.join(" ")).unwrap();
    if list {
        out.push_str(&rs.dump());
    }
}

fn grade_cmd(dtype: DynkinType, json: &Option<PathBuf>, out: &mut String) -> Result<(), Failure> {
    let gd = grade(&build_root_system(dtype));
    writeln!(out, "type {dtype}").unwrap();
    writeln!(out, "dim V {}", gd.dim_v).unwrap();
    writeln!(out, "dim g(0) {}", gd.dim_g).unwrap();
    writeln!(out, "dim V(0) {}", gd.dim_v0).unwrap();
    writeln!(out, "height-one count k {}", gd.height_one_count).unwrap();
    writeln!(out, "marked points {}", gd.marked_points).unwrap();
    let degs: Vec<String> = gd.degrees.iter().map(|d| d.to_string()).collect();
    writeln!(out, "degrees {} (sum {})", degs.join(","), gd.degrees.iter().sum::<u32>()).unwrap();
    if let Some(note) = &gd.degree_check.note {
        writeln!(out, "degree note: {note}").unwrap();
    }
    for r in &gd.restricted {
        let orbit: Vec<String> = r.orbit.iter().map(|a| format!("({a})")).collect();
        let img: Vec<String> = r.image.iter().map(|q| q.to_string()).collect();
        writeln!(
            out,
            "  {:<40} ht {:>2}  image ({})  {:?}  pinning {:+}",
            orbit.join(" "),
            r.height,
            img.join(","),
            r.case_tag,
            r.pinning_sign
        )
        .unwrap();
    }
    save_json(json, &gd)
}

fn verify_cmd(case: &str, file: &Option<PathBuf>, json: &Option<PathBuf>, out: &mut String) -> Result<(), Failure> {
    let records = match file {
        Some(p) => cases::load(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => cases::shipped(),
    };
    let rec = records
        .into_iter()
        .find(|r| r.case.eq_ignore_ascii_case(case))
        .or_else(|| adesieve_core::cuspintegral::record_by_name(case))
        .ok_or_else(|| usage(format!("unknown case {case:?}")))?;
    let report = verify_case(&rec).map_err(|e| Failure::Failed(e.to_string()))?;
    out.push_str(&report.table());
    save_json(json, &report)?;
    if report.pass {
        Ok(())
    } else {
        let fields: Vec<&str> = report.mismatches().iter().map(|c| c.field.as_str()).collect();
        Err(Failure::Failed(format!("case {} mismatches at {}", report.case, fields.join(","))))
    }
}

fn lambda_cmd(dtype: DynkinType, out: &mut String) -> Result<(), Failure> {
    let gd = grade(&build_root_system(dtype));
    let r = lambda_exponents(&gd).map_err(|e| Failure::Failed(e.to_string()))?;
    let shown: Vec<String> = r.iter().map(|q| q.to_string()).collect();
    writeln!(out, "case {dtype}").unwrap();
    writeln!(out, "r = ({})", shown.join(", ")).unwrap();
    let z = zeta_product(&r).map_err(|e| Failure::Failed(e.to_string()))?;
    writeln!(out, "prod zeta(r_i + 1) = {z:.12}").unwrap();
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn disc_cmd(
    poly_s: &Option<String>,
    degree: Option<u8>,
    normalizer: &BigInt,
    form: Option<u8>,
    trace_zero: bool,
    out: &mut String,
) -> Result<(), Failure> {
    if let Some(d) = form {
        let f = if trace_zero { trace_zero_discriminant_form(d as usize) } else { discriminant_form(d as usize) };
        let first = if trace_zero { 2 } else { 1 };
        writeln!(out, "x_i stands for b_{{i+{first}}}").unwrap();
        writeln!(out, "{f}").unwrap();
        writeln!(out, "content {}", f.content()).unwrap();
        return Ok(());
    }
    let f = poly(poly_s.as_deref().unwrap_or_default(), degree)?;
    let a = discriminant(&f);
    let b = discriminant_sylvester(&f);
    writeln!(out, "f = {f}").unwrap();
    writeln!(out, "discriminant (resultant) {a}").unwrap();
    writeln!(out, "discriminant (sylvester) {b}").unwrap();
    if a != b {
        return Err(Failure::Failed(format!("routes disagree: {a} vs {b}")));
    }
    let v = normalized_discriminant(&f, normalizer).map_err(|e| Failure::Failed(e.to_string()))?;
    writeln!(out, "normalized {}", v.normalized).unwrap();
    Ok(())
}

fn classify_cmd(s: &str, degree: Option<u8>, p: u64, budget: u64, out: &mut String) -> Result<(), Failure> {
    let f = poly(s, degree)?;
    let opts = DivisibilityOptions { budget, cross_check: true };
    let o = divisibility_type_with(&f, p, &opts).map_err(usage)?;
    let kind = serde_json::to_value(o.kind).expect("enum");
    writeln!(out, "{}", kind.as_str().unwrap_or("?")).unwrap();
    let engine = serde_json::to_value(o.engine).expect("enum");
    writeln!(out, "engine {}", engine.as_str().unwrap_or("?")).unwrap();
    if o.fast_path_only {
        writeln!(out, "fast_path_only").unwrap();
    }
    if let Some((brute, fast)) = o.disagreement {
        return Err(Failure::Failed(format!("brute force says {brute:?}, fast path says {fast:?}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstructReport {
    poly: String,
    m: String,
    shift: String,
    matrix: Vec<Vec<ExactEntry>>,
    charpoly_ok: bool,
    lattice_ok: bool,
    integral: bool,
    superdiagonal_ok: bool,
    q_literal: String,
    q_intended: String,
    certified: bool,
}

fn construct_cmd(
    s: &str,
    degree: Option<u8>,
    m: &BigInt,
    json: &Option<PathBuf>,
    csv: &Option<PathBuf>,
    out: &mut String,
) -> Result<(), Failure> {
    let f = poly(s, degree)?;
    let cert = sigma_m(&f, m).map_err(|e| Failure::Failed(e.to_string()))?;
    writeln!(out, "f = {f}").unwrap();
    writeln!(out, "m = {m}, shift l = {}", cert.shift).unwrap();
    writeln!(out, "sigma_m =").unwrap();
    out.push_str(&matrix_text(&cert.matrix));
    let yes = |b: bool| if b { "yes" } else { "NO" };
    writeln!(out, "charpoly = f: {}", yes(cert.charpoly_ok)).unwrap();
    writeln!(out, "entries in (1/4)Z: {} (integral: {})", yes(cert.lattice_ok), yes(cert.integral)).unwrap();
    let sd: Vec<String> = cert.matrix.superdiagonal().iter().map(fraction).collect();
    writeln!(out, "superdiagonal ({}): {}", sd.join(","), yes(cert.superdiagonal_ok)).unwrap();
    writeln!(out, "Q literal {} intended {}", fraction(&cert.q_literal), cert.q_intended).unwrap();
    let report = ConstructReport {
        poly: coeff_list(&f),
        m: m.to_string(),
        shift: cert.shift.to_string(),
        matrix: exact_rows(&cert.matrix),
        charpoly_ok: cert.charpoly_ok,
        lattice_ok: cert.lattice_ok,
        integral: cert.integral,
        superdiagonal_ok: cert.superdiagonal_ok,
        q_literal: fraction(&cert.q_literal),
        q_intended: cert.q_intended.to_string(),
        certified: cert.certified(),
    };
    save_json(json, &report)?;
    if let Some(p) = csv {
        let mut text = String::new();
        for row in cert.matrix.entries() {
            let cells: Vec<String> = row.iter().map(fraction).collect();
            writeln!(text, "{}", cells.join(",")).unwrap();
        }
        write_atomic(p, text.as_bytes()).map_err(|e| io_err(p, e))?;
    }
    if cert.certified() {
        Ok(())
    } else {
        Err(Failure::Failed("sigma_m certificate incomplete".to_string()))
    }
}

fn run_command(cli: Cli, out: &mut String) -> Result<(), Failure> {
    let pool = Pool::new(cli.threads as usize).map_err(|e| usage(format!("thread pool: {e}")))?;
    let cache = Cache::from_env();
    match cli.command {
        Command::Roots { dtype, list } => {
            roots(dtype, list, out);
            Ok(())
        }
        Command::Grade { dtype, json } => grade_cmd(dtype, &json, out),
        Command::VerifyCase { case, cases, json } => verify_cmd(&case, &cases, &json, out),
        Command::Lambda { case } => lambda_cmd(case, out),
        Command::Zeta { r, digits } => {
            let z = zeta_product(&r).map_err(usage)?;
            writeln!(out, "{z:.*}", digits as usize).unwrap();
            Ok(())
        }
        Command::Disc { poly, degree, normalizer, form, trace_zero } => {
            disc_cmd(&poly, degree, &normalizer, form, trace_zero, out)
        }
        Command::Classify { poly, degree, p, budget } => classify_cmd(&poly, degree, p, budget, out),
        Command::Construct { poly, degree, m, json, csv } => construct_cmd(&poly, degree, &m, &json, &csv, out),
        Command::LocalDensity { family: name, p, samples, seed, budget, json } => {
            let fam = family(&name)?;
            let opts = CompareOptions {
                exact_limit: u64::MAX,
                samples: samples.unwrap_or(0),
                seed,
                budget,
                ..CompareOptions::default()
            };
            let d = match samples {
                Some(_) => cached_density(cache.as_ref(), &fam, p, &opts, &pool)?,
                None => {
                    let q = (p as u128) * (p as u128);
                    if q.checked_pow(fam.rank() as u32).is_none_or(|n| n > budget as u128) {
                        return Err(usage(format!(
                            "local density of {} at p = {p} exceeds the budget {budget}; pass --samples for Monte-Carlo",
                            fam.name
                        )));
                    }
                    cached_density(cache.as_ref(), &fam, p, &opts, &pool)?
                }
            };
            let (n, dd) = d.rho();
            writeln!(out, "family {} p {p}", fam.name).unwrap();
            writeln!(out, "rho = {n}/{dd} = {:.12}", d.value()).unwrap();
            match d.method {
                Method::Enum => writeln!(out, "method ENUM over {} fibres", d.total).unwrap(),
                Method::MonteCarlo => writeln!(
                    out,
                    "method MONTECARLO with {} samples, seed {}, standard error {:.3e}",
                    d.total,
                    seed,
                    d.std_error()
                )
                .unwrap(),
            }
            save_json(&json, &d)
        }
        Command::Sieve { family: name, height, tail_m, engine: e, squarefree_bound, json } => {
            let fam = family(&name)?;
            let opts = GlobalOptions { squarefree_bound, engine: engine(e), ..GlobalOptions::default() };
            let counts = empirical_density(&fam, height, &opts, &pool).map_err(usage)?;
            writeln!(out, "family {} X {height}", fam.name).unwrap();
            writeln!(
                out,
                "squarefree {} of {} ratio {:.9} uncertain {}",
                counts.squarefree,
                counts.total,
                counts.ratio(),
                counts.uncertain
            )
            .unwrap();
            let tails = if tail_m.is_empty() {
                Vec::new()
            } else {
                tail_profile(&fam, height, &tail_m, &opts, &pool).map_err(usage)?
            };
            for t in &tails {
                writeln!(out, "M {} strong {} weak {} zero {}", t.m, t.strong, t.weak, t.zero).unwrap();
            }
            #[derive(Serialize)]
            struct SieveOut<'a> {
                empirical: &'a adesieve_core::sieve::EmpiricalCounts,
                tails: &'a [adesieve_core::sieve::TailCounts],
            }
            save_json(&json, &SieveOut { empirical: &counts, tails: &tails })?;
            if counts.inconclusive() {
                return Err(Failure::Failed(format!("INCONCLUSIVE: {} uncertain points", counts.uncertain)));
            }
            Ok(())
        }
        Command::Compare { family: name, pmax, height, seed, samples, exact_limit, engine: e, out: path, csv } => {
            let fam = family(&name)?;
            let opts = CompareOptions {
                exact_limit,
                samples,
                seed,
                global: GlobalOptions { engine: engine(e), ..GlobalOptions::default() },
                ..CompareOptions::default()
            };
            let mut locals = Vec::new();
            for p in adesieve_core::arith::primes_up_to(pmax) {
                locals.push(cached_density(cache.as_ref(), &fam, p, &opts, &pool)?);
            }
            let empirical = empirical_density(&fam, height, &opts.global, &pool).map_err(usage)?;
            let report = assemble(&fam, pmax, &locals, &empirical, &opts);
            let path = path.unwrap_or_else(|| {
                let x = height.to_string().replace('/', "_");
                PathBuf::from(format!("compare-{}-p{pmax}-X{x}.json", fam.name))
            });
            write_json(&path, &report).map_err(|e| io_err(&path, e))?;
            if let Some(c) = &csv {
                write_atomic(c, report.csv().as_bytes()).map_err(|e| io_err(c, e))?;
            }
            writeln!(out, "family {} pmax {pmax} X {height} seed {seed}", fam.name).unwrap();
            writeln!(out, "truncated product {:.9}", report.truncated_product).unwrap();
            writeln!(
                out,
                "empirical {} of {} ratio {:.9}",
                report.empirical.count_squarefree, report.empirical.count_total, report.empirical.ratio
            )
            .unwrap();
            writeln!(out, "z {:.3} (standard error {:.3e})", report.z_score, report.standard_error).unwrap();
            writeln!(
                out,
                "tail-corrected product {:.9} z {:.3}",
                report.tail.corrected_product, report.tail.corrected_z
            )
            .unwrap();
            let verdict = serde_json::to_value(report.verdict).expect("enum");
            writeln!(out, "verdict {}", verdict.as_str().unwrap_or("?")).unwrap();
            writeln!(out, "report {}", path.display()).unwrap();
            match report.verdict {
                Verdict::Agree | Verdict::Underpowered => Ok(()),
                Verdict::Disagree => Err(Failure::Failed(format!(
                    "DISAGREE: z = {:.3} beyond {} sigma",
                    report.z_score, report.tolerance_sigma
                ))),
                Verdict::Inconclusive => Err(Failure::Failed("INCONCLUSIVE: uncertain bucket above 0.1%".to_string())),
            }
        }
    }
}

/// Parses `args`, runs the command, prints its output and returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            eprintln!("{}", Failure::Usage(first).line());
            return 2;
        }
    };
    let mut out = String::new();
    let res = run_command(cli, &mut out);
    print!("{out}");
    match res {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("{}", f.line());
            f.code()
        }
    }
}
