//! `radineq` command-line front end.
//!
//! Exit codes: 0 clean, 1 usage or I/O error, 2 mathematical failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radineq::bounds::{cartesian_check, evaluate, BoundConfig, BoundParams, Status, TheoremId};
use radineq::harness::{
    compare_refinements, gen_matrix, lemma_suite, run_suite, EnsembleKind, EnsembleSpec, SuiteConfig, SuiteReport,
    COMPARABLE,
};
use radineq::io::{write_gain_summary, write_report, MatrixFile};
use radineq::radius::{numerical_radius, wp_radius, OperatorTuple, RadiusEstimate, SphereOptConfig, DEFAULT_RESOLUTION};
use radineq::rng::derive_seed;
use radineq::{RadError, Result};

const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;

#[derive(Parser)]
#[command(name = "radineq", version, about = "Numerical radius bounds and their randomized verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write the trial table.
    Verify(VerifyArgs),
    /// Estimate w(T) for one matrix or w_p for several.
    Radius(RadiusArgs),
    /// Evaluate one bound on matrices from a file.
    Bound(BoundArgs),
    /// Generate random matrices into a matrix file.
    Gen(GenArgs),
    /// Compare refined bounds with their baselines.
    Compare(CompareArgs),
}

#[derive(Args)]
struct SuiteArgs {
    /// Trials per parameter point (cases per lemma for the lemma suite).
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Dimension range `lo:hi`.
    #[arg(long, default_value = "2:6", value_parser = parse_dims)]
    dims: (usize, usize),
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled vectors per trial.
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Trial table path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// `all`, `bounds`, `lemmas`, or a theorem id such as `thm2.13`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[command(flatten)]
    common: SuiteArgs,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: SuiteArgs,
    /// Comma-separated theorem ids; all theorems with a baseline by default.
    #[arg(long, value_delimiter = ',')]
    theorems: Option<Vec<String>>,
    /// Comma-separated level counts N.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<u32>>,
    /// Gain summary path; next to the trial table when omitted.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct RadiusArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated matrix names.
    #[arg(long, value_delimiter = ',', required = true)]
    names: Vec<String>,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BoundArgs {
    /// Theorem id, e.g. `thm2.3` or `cor2.15`.
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated operand names in the order the theorem expects.
    #[arg(long, value_delimiter = ',', required = true)]
    operands: Vec<String>,
    /// ν or α.
    #[arg(long, default_value_t = 0.5)]
    nu: f64,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    /// Number of refinement levels N.
    #[arg(long, default_value_t = 1)]
    levels: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 256)]
    samples: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Matrix file path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = match s.split_once(':') {
        Some((lo, hi)) => (lo, hi),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad dimension range '{s}'"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad dimension range '{s}'"))?;
    if lo == 0 || lo > hi {
        return Err(format!("dimension range must satisfy 1 ≤ lo ≤ hi, got '{s}'"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Verify(a) => cmd_verify(&a),
        Command::Radius(a) => cmd_radius(&a),
        Command::Bound(a) => cmd_bound(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Compare(a) => cmd_compare(&a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn suite_config(a: &SuiteArgs) -> SuiteConfig {
    SuiteConfig {
        trials: a.trials,
        dims: a.dims,
        seed: a.seed,
        samples: a.samples,
        ..SuiteConfig::default()
    }
}

fn summarize(report: &SuiteReport) {
    eprintln!(
        "{}: {} records, {} pointwise violations, {} certified violations, {} dominance violations, {} errors",
        report.suite,
        report.records.len(),
        report.pointwise_violations(),
        report.certified_violations(),
        report.dominance_violations(),
        report.errors()
    );
    for (k, v) in &report.evidence {
        eprintln!("  {k} = {v}");
    }
}

fn exit_for(report: &SuiteReport) -> u8 {
    if report.is_clean() {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let mut cfg = suite_config(&a.common);
    let mut reports = Vec::new();
    match a.suite.as_str() {
        "all" => {
            reports.push(run_suite(&cfg)?);
            reports.push(lemma_suite(&cfg)?);
        }
        "bounds" => reports.push(run_suite(&cfg)?),
        "lemmas" => reports.push(lemma_suite(&cfg)?),
        other => {
            let id: TheoremId = other.parse().map_err(|_| {
                RadError::Domain(format!("unknown suite '{other}'; expected all, bounds, lemmas or a theorem id"))
            })?;
            cfg.theorems = vec![id];
            reports.push(run_suite(&cfg)?);
        }
    }
    let records: Vec<_> = reports.iter().flat_map(|r| r.records.iter().cloned()).collect();
    let mut out = open_output(a.common.output.as_deref())?;
    write_report(&records, &mut out)?;
    out.flush()?;
    reports.iter().for_each(summarize);
    Ok(reports.iter().map(exit_for).max().unwrap_or(0))
}

fn cmd_compare(a: &CompareArgs) -> Result<u8> {
    let mut cfg = suite_config(&a.common);
    if let Some(ids) = &a.theorems {
        cfg.theorems = ids
            .iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse())
            .collect::<Result<Vec<TheoremId>>>()?;
    } else {
        cfg.theorems = COMPARABLE.to_vec();
    }
    if let Some(levels) = &a.levels {
        cfg.grid.levels = levels.clone();
    }
    let report = compare_refinements(&cfg)?;
    let mut out = open_output(a.common.output.as_deref())?;
    write_report(&report.records, &mut out)?;
    out.flush()?;
    drop(out);
    let summary_path = a
        .summary
        .clone()
        .or_else(|| a.common.output.as_ref().map(|p| p.with_extension("gains.csv")));
    match summary_path {
        Some(p) => {
            let mut w = open_output(Some(&p))?;
            write_gain_summary(&report.aggregates, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = open_output(None)?;
            writeln!(w)?;
            write_gain_summary(&report.aggregates, &mut w)?;
            w.flush()?;
        }
    }
    summarize(&report);
    Ok(exit_for(&report))
}

fn format_vector(v: &radineq::linalg::UnitVector) -> String {
    let parts: Vec<String> = v.as_slice().iter().map(|z| format!("{:?}{:+?}i", z.re, z.im)).collect();
    format!("[{}]", parts.join(", "))
}

fn print_estimate(est: &RadiusEstimate) {
    println!("{:?} ({})", est.value, est.bound_side.label());
    println!("witness: {}", format_vector(&est.witness));
}

fn cmd_radius(a: &RadiusArgs) -> Result<u8> {
    let file = MatrixFile::read(&a.input)?;
    let mats = a.names.iter().map(|n| file.get(n)).collect::<Result<Vec<_>>>()?;
    let est = if mats.len() == 1 {
        numerical_radius(&mats[0], DEFAULT_RESOLUTION)?
    } else {
        wp_radius(&OperatorTuple::new(mats)?, a.p, &SphereOptConfig::default().with_seed(a.seed))?
    };
    print_estimate(&est);
    Ok(0)
}

fn cmd_gen(a: &GenArgs) -> Result<u8> {
    let kind: EnsembleKind = a.kind.parse()?;
    let mut file = MatrixFile::default();
    for k in 0..a.count {
        let spec = EnsembleSpec::new(kind, a.dim, derive_seed(a.seed, &[k as u64])).with_scale(a.scale);
        file.push(&format!("{kind}_{k}"), &gen_matrix(&spec)?);
    }
    let mut out = open_output(a.output.as_deref())?;
    file.to_writer(&mut out)?;
    out.flush()?;
    Ok(0)
}

fn cmd_bound(a: &BoundArgs) -> Result<u8> {
    let theorem: TheoremId = a.theorem.parse()?;
    let file = MatrixFile::read(&a.input)?;
    let mats = a.operands.iter().map(|n| file.get(n)).collect::<Result<Vec<_>>>()?;
    let mut params = BoundParams::default()
        .with_nu(a.nu)
        .with_p(a.p)
        .with_r(a.r)
        .with_levels(a.levels);
    if let Some(q) = a.q {
        params = params.with_q(q);
    }
    let cfg = BoundConfig {
        samples: a.samples,
        ..BoundConfig::default().with_seed(a.seed)
    };
    let report = evaluate(theorem, &mats, &params, &cfg)?;
    let extra = match (theorem, mats.as_slice()) {
        (TheoremId::Cor215, [single]) => {
            Some(serde_json::to_value(cartesian_check(single)?).map_err(|e| RadError::Format(e.to_string()))?)
        }
        _ => None,
    };
    let mut value = serde_json::to_value(&report).map_err(|e| RadError::Format(e.to_string()))?;
    if let (Some(check), Some(obj)) = (extra, value.as_object_mut()) {
        obj.insert("cartesian".to_string(), check);
    }
    println!("{}", serde_json::to_string_pretty(&value).map_err(|e| RadError::Format(e.to_string()))?);
    let failed = report.status == Status::CertifiedViolation || report.pointwise_violations > 0;
    Ok(if failed { EXIT_VIOLATION } else { 0 })
}
