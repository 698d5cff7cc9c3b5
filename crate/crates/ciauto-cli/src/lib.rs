//! Command-line driver for the verification suites.
//!
//! Every subcommand builds a [`Report`], normalizes its record order, and
//! writes it as line-delimited JSON (`--format structured`, the default) or
//! a short text table. The exit status is 0 iff no record failed; records
//! left undecided by a budget count as unknown, not failed.

pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use ciauto::eigencalc::{is_prime, SweepRange};
use ciauto::report::{Record, Report};
use ciauto::torelli::TorelliConfig;
use ciauto::{CIType, Exec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use suites::{BirresConfig, CertifyConfig, Emit, VarietiesConfig};

#[derive(Parser, Debug)]
#[command(name = "ciauto", version, about = "Exact verification suites for complete intersections")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Structured)]
    format: Format,
    /// Run on one thread even when built with the parallel feature.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EmitArg {
    Lemma44,
    Theorem,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Case-engine certificates for complete-intersection types.
    Certify(CertifyArgs),
    /// Eigenspace inequality sweeps and the DP/enumeration cross-check.
    Eigen(EigenArgs),
    /// Finite-field constructions: pencil, cyclic example, nodes, h0 oracle.
    Varieties(VarietiesArgs),
    /// Scaling-map flags and arc stratum correspondence.
    Birres(BirresArgs),
    /// Vanishing and surjectivity certificates for infinitesimal Torelli.
    Torelli(TorelliArgs),
    /// Subspace-count exception lists.
    Exceptions(ExceptionsArgs),
    /// The whole acceptance suite at its stated ranges.
    All(AllArgs),
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(x) => Ok(x),
        Err(e) => Err(e.to_string()),
    }
}

fn prime_u64(s: &str) -> Result<u64, String> {
    let q = s.parse::<u64>().map_err(|e| e.to_string())?;
    if q >= 1 << 32 {
        return Err(format!("{q} exceeds the supported field size 2^32"));
    }
    if !is_prime(q) {
        return Err(format!("{q} is not prime"));
    }
    Ok(q)
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Certify the single type `(n, degrees)`; needs --degrees.
    #[arg(long, requires = "degrees")]
    n: Option<u32>,
    #[arg(long, value_delimiter = ',', requires = "n")]
    degrees: Option<Vec<u32>>,
    #[arg(long, default_value_t = 10)]
    n_max: u32,
    #[arg(long, default_value_t = 3)]
    max_codim: u32,
    #[arg(long, default_value_t = 4)]
    max_degree: u32,
    #[arg(long, default_value_t = 7)]
    p_max: u32,
}

#[derive(Args, Debug)]
struct EigenArgs {
    #[arg(long, default_value_t = 3)]
    n_min: u32,
    #[arg(long, default_value_t = 12)]
    n_max: u32,
    #[arg(long, default_value_t = 13)]
    p_max: u32,
    #[arg(long, default_value_t = 2)]
    d_min: u32,
    #[arg(long, default_value_t = 8)]
    d_max: u32,
}

#[derive(Args, Debug)]
struct VarietiesArgs {
    /// Large primes for identities and the h0 oracle.
    #[arg(long, value_delimiter = ',', value_parser = prime_u64, default_values_t = [101u64, 103])]
    q: Vec<u64>,
    /// Small primes over which whole projective spaces are enumerated.
    #[arg(long, value_delimiter = ',', value_parser = prime_u64, default_values_t = [11u64, 13])]
    small_q: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Seeds tried per construction before a genericity failure is final.
    #[arg(long, value_parser = positive_u64, default_value_t = 32)]
    attempts: u64,
    #[arg(long, value_parser = positive_u64, default_value_t = 2_000_000)]
    budget_points: u64,
}

#[derive(Args, Debug)]
struct BirresArgs {
    #[arg(long, default_value_t = 12)]
    n_max: u32,
    #[arg(long, default_value_t = 1000)]
    random_maps: u64,
    #[arg(long, default_value_t = 50)]
    correspondence_maps: u64,
    #[arg(long, value_parser = positive_u64, default_value_t = 100)]
    arcs: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct TorelliArgs {
    #[arg(long, default_value_t = 6)]
    max_ambient: u32,
    #[arg(long, default_value_t = 8)]
    max_degree: u32,
    #[arg(long, value_parser = prime_u64, default_value_t = 10007)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest graded piece the rank route will build.
    #[arg(long, value_parser = positive_u64, default_value_t = 400)]
    budget_points: u64,
}

#[derive(Args, Debug)]
struct ExceptionsArgs {
    #[arg(long, default_value_t = 12)]
    n_max: u32,
    #[arg(long, value_enum, default_value_t = EmitArg::Theorem)]
    emit: EmitArg,
}

#[derive(Args, Debug)]
struct AllArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn emit(e: EmitArg) -> Emit {
    match e {
        EmitArg::Lemma44 => Emit::Lemma44,
        EmitArg::Theorem => Emit::Theorem,
    }
}

fn varieties_report(cfg: &VarietiesConfig, exec: Exec, report: &mut Report) {
    let (records, err) = suites::varieties(cfg, exec);
    report.extend(records);
    if let Some(e) = err {
        report.incomplete = true;
        report.push(Record::new("varieties", "error", ciauto::report::Status::Unknown, json!({ "error": e.to_string() })));
    }
}

fn build(cmd: &Cmd, exec: Exec) -> Result<Report, String> {
    Ok(match cmd {
        Cmd::Certify(a) => {
            let single = match (a.n, &a.degrees) {
                (Some(n), Some(d)) => Some(CIType::new(n, d.clone()).map_err(|e| e.to_string())?),
                _ => None,
            };
            let cfg = CertifyConfig { single, n_max: a.n_max, max_codim: a.max_codim, max_degree: a.max_degree, p_max: a.p_max };
            let mut r = Report::new(json!({ "certify": cfg }));
            r.extend(suites::certify(&cfg, exec));
            r
        }
        Cmd::Eigen(a) => {
            let range = SweepRange { n_min: a.n_min, n_max: a.n_max, p_max: a.p_max, d_min: a.d_min, d_max: a.d_max };
            let mut r = Report::new(json!({ "eigen": range }));
            r.extend(suites::eigen(&range, exec));
            r
        }
        Cmd::Varieties(a) => {
            let cfg = VarietiesConfig {
                primes: a.q.clone(),
                small_primes: a.small_q.clone(),
                seed: a.seed,
                attempts: a.attempts,
                budget_points: u128::from(a.budget_points),
            };
            let mut r = Report::new(json!({ "varieties": cfg }));
            varieties_report(&cfg, exec, &mut r);
            r
        }
        Cmd::Birres(a) => {
            let cfg = BirresConfig {
                n_max: a.n_max,
                random_maps: a.random_maps,
                correspondence_maps: a.correspondence_maps,
                arcs_per_map: a.arcs,
                seed: a.seed,
            };
            let mut r = Report::new(json!({ "birres": cfg }));
            r.extend(suites::birres(&cfg, exec));
            r
        }
        Cmd::Torelli(a) => {
            let cfg = TorelliConfig {
                max_ambient: a.max_ambient,
                max_degree: a.max_degree,
                q: a.q,
                seed: a.seed,
                budget: a.budget_points as usize,
            };
            let mut r = Report::new(json!({ "torelli": cfg }));
            r.extend(suites::torelli(&cfg, exec));
            r
        }
        Cmd::Exceptions(a) => {
            let e = emit(a.emit);
            let mut r = Report::new(json!({ "exceptions": { "n_max": a.n_max, "emit": e } }));
            r.extend(suites::exceptions(a.n_max, e, exec));
            r
        }
        Cmd::All(a) => {
            let certify = CertifyConfig::default();
            let range = SweepRange::default();
            let varieties = VarietiesConfig::default();
            let birres = BirresConfig { seed: a.seed, ..BirresConfig::default() };
            let torelli = TorelliConfig { seed: a.seed, ..TorelliConfig::default() };
            let mut r = Report::new(json!({
                "certify": certify,
                "eigen": range,
                "varieties": varieties,
                "birres": birres,
                "torelli": torelli,
                "exceptions": { "n_max": 12, "emit": ["lemma44", "theorem"] },
            }));
            fn tag(rs: Vec<Record>, k: &str) -> Vec<Record> {
                rs.into_iter()
                    .map(|mut x| {
                        x.key = format!("{k} {}", x.key);
                        x
                    })
                    .collect()
            }
            r.extend(tag(suites::exceptions(12, Emit::Lemma44, exec), "lemma44"));
            r.extend(tag(suites::exceptions(12, Emit::Theorem, exec), "theorem"));
            r.extend(suites::eigen(&range, exec));
            r.extend(suites::certify(&certify, exec));
            varieties_report(&varieties, exec, &mut r);
            r.extend(suites::birres(&birres, exec));
            r.extend(suites::torelli(&torelli, exec));
            r
        }
    })
}

/// Parse `argv` (program name first), run, write the report, and return
/// the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let mut report = match build(&cli.cmd, exec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    report.normalize();
    let body = match cli.format {
        Format::Structured => report.to_structured(),
        Format::Text => report.to_text(),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return 2;
    }
    let failed = report.summary().failed > 0;
    i32::from(failed)
}
