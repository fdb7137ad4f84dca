//! Thin command-line front end over the library drivers.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 on verification or
//! cross-check failures.

use clap::{Args, Parser, Subcommand, ValueEnum};
use padic_ising::census::{self, CensusError, CouplingRule, OutputFormat, RunConfig};
use padic_ising::ti::Coupling;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "padic-ising",
    about = "p-adic Ising model on Cayley trees: solve, classify, verify",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the translation-invariant measures for one prime
    Classify(ClassifyArgs),
    /// Sweep all primes up to a bound, one classification row each
    Census(CensusArgs),
    /// Print the translation-invariant solutions for one prime
    SolveTi(SolveArgs),
    /// Brute-force consistency oracle for every solution field at (p, k, n)
    VerifyConsistency(ConsistencyArgs),
    /// Build and verify both planted boundary fields
    ArtVerify(ArtArgs),
    /// Normalizer norm table per root and level
    Znorms(ZnormArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonOut {
    /// Output format for rows
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// The prime to classify
    #[arg(long)]
    prime: u64,
    /// Coupling: "canonical" (J = p, J = 4 at p = 2) or an exact rational
    #[arg(long, default_value = "canonical")]
    coupling: String,
    /// Working precision in base-p digits
    #[arg(long, default_value_t = 32)]
    precision: u32,
    /// Skip the direct-solver cross-check
    #[arg(long)]
    no_crosscheck: bool,
    #[command(flatten)]
    output: CommonOut,
}

#[derive(Args)]
struct CensusArgs {
    /// Upper bound of the prime sweep (inclusive)
    #[arg(long)]
    primes_up_to: u64,
    #[arg(long, default_value = "canonical")]
    coupling: String,
    #[arg(long, default_value_t = 32)]
    precision: u32,
    #[arg(long)]
    no_crosscheck: bool,
    /// Worker threads (rows stay in prime order)
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    output: CommonOut,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    prime: u64,
    /// Tree order (2 or 3)
    #[arg(long, default_value_t = 3)]
    order: u32,
    #[arg(long, default_value = "canonical")]
    coupling: String,
    #[arg(long, default_value_t = 32)]
    precision: u32,
    #[command(flatten)]
    output: CommonOut,
}

#[derive(Args)]
struct ConsistencyArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long, default_value_t = 3)]
    order: u32,
    /// Volume depth n: levels n-1 and n are compared
    #[arg(long, default_value_t = 2)]
    depth: u32,
    #[arg(long, default_value = "canonical")]
    coupling: String,
    #[arg(long, default_value_t = 32)]
    precision: u32,
    #[command(flatten)]
    output: CommonOut,
}

#[derive(Args)]
struct ArtArgs {
    #[arg(long)]
    prime: u64,
    /// Tree order (at least 3)
    #[arg(long, default_value_t = 3)]
    order: u32,
    #[arg(long, default_value_t = 4)]
    depth: u32,
    #[arg(long, default_value = "canonical")]
    coupling: String,
    #[arg(long, default_value_t = 32)]
    precision: u32,
    #[command(flatten)]
    output: CommonOut,
}

#[derive(Args)]
struct ZnormArgs {
    #[arg(long)]
    prime: u64,
    /// Tree order (2 adds the enumerated cross-check, 3 is the lemma table)
    #[arg(long, default_value_t = 3)]
    order: u32,
    /// Largest level n (norms only, no enumeration above small volumes)
    #[arg(long, default_value_t = 6)]
    max_level: u32,
    #[arg(long, default_value = "canonical")]
    coupling: String,
    #[arg(long, default_value_t = 32)]
    precision: u32,
    /// Skip the enumerated cross-check
    #[arg(long)]
    no_enumeration: bool,
    #[command(flatten)]
    output: CommonOut,
}

enum CliError {
    Config(String),
    Verification(String),
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        // anything that invalidates the run setup is a configuration error
        CliError::Config(e.to_string())
    }
}

fn parse_coupling_rule(s: &str) -> Result<CouplingRule, CliError> {
    if s == "canonical" {
        return Ok(CouplingRule::Canonical);
    }
    Ok(CouplingRule::Explicit(parse_coupling(s)?))
}

fn parse_coupling(s: &str) -> Result<Coupling, CliError> {
    let parts: Vec<&str> = s.split('/').collect();
    let bad = || {
        CliError::Config(format!(
            "cannot parse coupling '{s}': expected canonical, an integer, or a/b"
        ))
    };
    match parts.as_slice() {
        [n] => Coupling::new(n.trim().parse().map_err(|_| bad())?, 1),
        [n, d] => Coupling::new(
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        ),
        _ => return Err(bad()),
    }
    .map_err(|e| CliError::Config(e.to_string()))
}

fn coupling_for(rule: &str, prime: u64) -> Result<Coupling, CliError> {
    Ok(parse_coupling_rule(rule)?.coupling_for(prime))
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        None => Ok(Box::new(std::io::stdout().lock())),
        Some(p) => Ok(Box::new(std::fs::File::create(p).map_err(|e| {
            CliError::Config(format!("cannot open {}: {e}", p.display()))
        })?)),
    }
}

fn emit_json<T: serde::Serialize>(value: &T, out: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)
        .map_err(|e| CliError::Config(format!("serialization failed: {e}")))?;
    out.write_all(b"\n")
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(())
}

fn run_classify(args: &ClassifyArgs) -> Result<(), CliError> {
    let config = RunConfig {
        coupling: parse_coupling_rule(&args.coupling)?,
        precision: args.precision,
        crosscheck: !args.no_crosscheck,
        threads: 1,
    };
    let row = census::classify_row(args.prime, &config)?;
    let disagrees = row.crosscheck_disagrees();
    let mut out = open_out(&args.output.out)?;
    let rows = vec![row];
    census::write_rows(
        &rows,
        match args.output.format {
            Format::Json => OutputFormat::JsonLines,
            Format::Csv => OutputFormat::Csv,
        },
        &mut out,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    if disagrees {
        return Err(CliError::Verification(format!(
            "cross-check disagreement at p = {}: {}",
            rows[0].prime, rows[0].crosscheck
        )));
    }
    Ok(())
}

fn run_census(args: &CensusArgs) -> Result<(), CliError> {
    let config = RunConfig {
        coupling: parse_coupling_rule(&args.coupling)?,
        precision: args.precision,
        crosscheck: !args.no_crosscheck,
        threads: args.threads,
    };
    let primes = census::primes_up_to(args.primes_up_to);
    let rows = census::census_rows(&primes, &config)?;
    let mut out = open_out(&args.output.out)?;
    census::write_rows(
        &rows,
        match args.output.format {
            Format::Json => OutputFormat::JsonLines,
            Format::Csv => OutputFormat::Csv,
        },
        &mut out,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let bad: Vec<&census::CensusRow> = rows.iter().filter(|r| r.crosscheck_disagrees()).collect();
    if !bad.is_empty() {
        let detail: Vec<String> = bad
            .iter()
            .map(|r| format!("p = {}: {}", r.prime, r.crosscheck))
            .collect();
        return Err(CliError::Verification(format!(
            "cross-check disagreement on {} prime(s): {}",
            bad.len(),
            detail.join("; ")
        )));
    }
    Ok(())
}

fn run_solve(args: &SolveArgs) -> Result<(), CliError> {
    let coupling = coupling_for(&args.coupling, args.prime)?;
    let summary = census::solve_ti(args.prime, coupling, args.order, args.precision)?;
    let mut out = open_out(&args.output.out)?;
    match args.output.format {
        Format::Json => emit_json(&summary, &mut out)?,
        Format::Csv => {
            writeln!(
                out,
                "label,valuation,norm_exponent,residual_bound_exponent,digits"
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
            for r in &summary.roots {
                writeln!(
                    out,
                    "{},{},{},{},\"{}\"",
                    r.label,
                    r.valuation,
                    r.norm_exponent,
                    r.residual_bound_exponent
                        .map_or(String::new(), |v| v.to_string()),
                    r.digits
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                )
                .map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
    }
    Ok(())
}

fn run_consistency(args: &ConsistencyArgs) -> Result<(), CliError> {
    let coupling = coupling_for(&args.coupling, args.prime)?;
    let summary =
        census::verify_consistency(args.prime, coupling, args.order, args.depth, args.precision)?;
    let mut out = open_out(&args.output.out)?;
    emit_json(&summary, &mut out)?;
    if !summary.all_passed {
        return Err(CliError::Verification(
            "consistency check failed for at least one field".into(),
        ));
    }
    Ok(())
}

fn run_art(args: &ArtArgs) -> Result<(), CliError> {
    let coupling = coupling_for(&args.coupling, args.prime)?;
    let summary =
        census::art_verification(args.prime, coupling, args.order, args.depth, args.precision)?;
    let mut out = open_out(&args.output.out)?;
    emit_json(&summary, &mut out)?;
    if !summary.all_passed {
        return Err(CliError::Verification(
            "planted-field verification failed".into(),
        ));
    }
    Ok(())
}

fn run_znorms(args: &ZnormArgs) -> Result<(), CliError> {
    if args.max_level > 12 {
        return Err(CliError::Config(
            "max level is 12: exponents double per level".into(),
        ));
    }
    let coupling = coupling_for(&args.coupling, args.prime)?;
    let rows = census::znorm_table(
        args.prime,
        coupling,
        args.order,
        args.max_level,
        args.precision,
        !args.no_enumeration,
    )?;
    let mut out = open_out(&args.output.out)?;
    match args.output.format {
        Format::Json => {
            for row in &rows {
                emit_json(row, &mut out)?;
            }
        }
        Format::Csv => {
            writeln!(
                out,
                "prime,order,root,level,closed_form_exponent,bound_exponent,within_bound,enumerated_exponent,agrees_with_enumeration"
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.prime,
                    r.order,
                    r.root,
                    r.level,
                    r.closed_form_exponent,
                    r.bound_exponent.map_or(String::new(), |v| v.to_string()),
                    r.within_bound,
                    r.enumerated_exponent
                        .map_or(String::new(), |v| v.to_string()),
                    r.agrees_with_enumeration
                        .map_or(String::new(), |v| v.to_string()),
                )
                .map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Classify(a) => run_classify(a),
        Cmd::Census(a) => run_census(a),
        Cmd::SolveTi(a) => run_solve(a),
        Cmd::VerifyConsistency(a) => run_consistency(a),
        Cmd::ArtVerify(a) => run_art(a),
        Cmd::Znorms(a) => run_znorms(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(3)
        }
    }
}
