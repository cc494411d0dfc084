//! Command-line front end.
//!
//! Exit codes: 0 for a resolved computation (or a passing check), 2 for
//! a partial result, 1 for any error. The data stream is stdout; logs
//! and I/O failures go to stderr.

use afpcalc::dsl::{parse_problem, result_to_json, Diagnostic};
use afpcalc::engine::{compute, Problem, ResultReport, Status};
use afpcalc::mc::{two_free_projections_spectrum, SpectrumEstimate};
use afpcalc::model::{fdim, fdim_multimatrix, FdimEntry, FdimValue, SummandKind, Violation};
use afpcalc::rat::ExtRat;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "afpcalc",
    version,
    about = "Exact calculator for tracial amalgamated free products A *_D B"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct InputArgs {
    /// Problem document (.afp).
    input: PathBuf,
    /// Output format for the data stream.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the direct-sum structure of A *_D B.
    Compute {
        #[command(flatten)]
        common: InputArgs,
        /// Include the derivation certificate in the report.
        #[arg(long)]
        certificate: bool,
    },
    /// Print the free-dimension ledgers of A, B, D and the predicted output value.
    Fdim {
        #[command(flatten)]
        common: InputArgs,
    },
    /// Validate a problem document and report diagnostics.
    Check {
        #[command(flatten)]
        common: InputArgs,
    },
    /// Monte Carlo check of the unit-atom masses for the document's
    /// minimal-projection pairs (scalar amalgam only).
    Oracle {
        #[command(flatten)]
        common: InputArgs,
        /// RNG seed.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Matrix dimension per sample.
        #[arg(long, default_value_t = 2000)]
        dim: usize,
        /// Independent repetitions averaged per estimate.
        #[arg(long, default_value_t = 3)]
        reps: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.cmd {
        Cmd::Compute {
            common,
            certificate,
        } => cmd_compute(&common, certificate),
        Cmd::Fdim { common } => cmd_fdim(&common),
        Cmd::Check { common } => cmd_check(&common),
        Cmd::Oracle {
            common,
            seed,
            dim,
            reps,
        } => cmd_oracle(&common, seed, dim, reps),
    }
}

fn read_input(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        ExitCode::from(1)
    })
}

/// Parse failures become path-addressed violations (`file:line:col`) so
/// every failure mode flows through one report shape.
fn diag_violation(path: &Path, d: &Diagnostic) -> Violation {
    let mut message = d.message.clone();
    if let Some(h) = &d.hint {
        message.push_str(&format!(" (hint: {h})"));
    }
    Violation::new(format!("{}:{}:{}", path.display(), d.line, d.col), message)
}

fn problem_of(path: &Path, text: &str) -> Result<Problem, Vec<Violation>> {
    let to_violations = |ds: Vec<Diagnostic>| ds.iter().map(|d| diag_violation(path, d)).collect();
    let doc = parse_problem(text).map_err(to_violations)?;
    doc.to_problem().map_err(to_violations)
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Resolved => "resolved",
        Status::Partial => "partial",
        Status::Error => "error",
    }
}

fn status_code(s: Status) -> ExitCode {
    ExitCode::from(match s {
        Status::Resolved => 0,
        Status::Partial => 2,
        Status::Error => 1,
    })
}

fn print_report(format: Format, r: &ResultReport) {
    match format {
        Format::Json => println!("{}", result_to_json(r)),
        Format::Text => {
            println!("status: {}", status_word(r.status));
            if !r.parts.is_empty() {
                println!("summands:");
                for p in &r.parts {
                    println!("  {p}");
                }
            }
            println!(
                "fdim: {}",
                r.fdim
                    .as_ref()
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "-".into())
            );
            println!("in_r0: {}", r.in_r0);
            if !r.locator.entries.is_empty() {
                println!("locators:");
                for e in &r.locator.entries {
                    let traces: Vec<String> = e.traces.iter().map(|t| t.to_string()).collect();
                    println!("  {}  [{}]", e.id, traces.join(", "));
                }
            }
            if !r.certificate.is_empty() {
                println!("certificate:");
                for (i, step) in r.certificate.iter().enumerate() {
                    println!("  {:2}. {} (depth {})", i + 1, step.rule.tag(), step.depth);
                }
            }
            if !r.diagnostics.is_empty() {
                println!("diagnostics:");
                for v in &r.diagnostics {
                    println!("  {v}");
                }
            }
        }
    }
}

fn cmd_compute(common: &InputArgs, certificate: bool) -> ExitCode {
    let text = match read_input(&common.input) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let mut report = match problem_of(&common.input, &text) {
        Ok(p) => compute(&p),
        Err(violations) => ResultReport::error(violations),
    };
    if !certificate {
        report.certificate.clear();
    }
    print_report(common.format, &report);
    status_code(report.status)
}

#[derive(Serialize)]
struct FdimReport<'a> {
    a: &'a FdimValue,
    b: &'a FdimValue,
    d: &'a FdimValue,
    prediction: &'a ExtRat,
}

fn print_fdim_text(label: &str, v: &FdimValue) {
    println!("{label}:");
    for e in &v.ledger {
        match e {
            FdimEntry::SummandTerm {
                index,
                kind,
                weight,
                rel_dim,
            } => println!("  summand {index} ({kind}): weight {weight}, rel_dim {rel_dim}"),
            FdimEntry::DirectSum { value } => println!("  direct sum: {value}"),
        }
    }
    println!("  fdim {}", v.value);
}

fn cmd_fdim(common: &InputArgs) -> ExitCode {
    let text = match read_input(&common.input) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let problem = match problem_of(&common.input, &text) {
        Ok(p) => p,
        Err(violations) => {
            print_report(common.format, &ResultReport::error(violations));
            return ExitCode::from(1);
        }
    };
    let violations = problem.validate();
    if !violations.is_empty() {
        print_report(common.format, &ResultReport::error(violations));
        return ExitCode::from(1);
    }
    let a = fdim(&problem.a);
    let b = fdim(&problem.b);
    let d = fdim_multimatrix(&problem.d);
    let prediction = problem.fdim_prediction();
    match common.format {
        Format::Json => {
            let report = FdimReport {
                a: &a,
                b: &b,
                d: &d,
                prediction: &prediction,
            };
            println!(
                "{}",
                serde_json::to_string(&report).expect("ledgers serialize")
            );
        }
        Format::Text => {
            print_fdim_text("A", &a);
            print_fdim_text("B", &b);
            print_fdim_text("D", &d);
            println!("prediction: {prediction}");
        }
    }
    ExitCode::from(0)
}

#[derive(Serialize)]
struct CheckReport {
    status: &'static str,
    diagnostics: Vec<Violation>,
}

fn cmd_check(common: &InputArgs) -> ExitCode {
    let text = match read_input(&common.input) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let diagnostics = match problem_of(&common.input, &text) {
        Ok(p) => p.validate(),
        Err(violations) => violations,
    };
    let ok = diagnostics.is_empty();
    match common.format {
        Format::Json => {
            let report = CheckReport {
                status: if ok { "ok" } else { "error" },
                diagnostics,
            };
            println!(
                "{}",
                serde_json::to_string(&report).expect("diagnostics serialize")
            );
        }
        Format::Text => {
            if ok {
                println!("ok");
            } else {
                for v in &diagnostics {
                    println!("{v}");
                }
            }
        }
    }
    ExitCode::from(if ok { 0 } else { 1 })
}

/// Minimal-projection traces of one side's matrix summands; `interval`
/// summands are diffuse and carry no minimal projections.
fn atom_traces(summands: &[afpcalc::model::Summand]) -> Vec<ExtRat> {
    summands
        .iter()
        .filter_map(|s| match s.kind {
            SummandKind::Matrix(n) => Some(s.weight.clone() / ExtRat::int(n as i64)),
            _ => None,
        })
        .collect()
}

fn cmd_oracle(common: &InputArgs, seed: u64, dim: usize, reps: u32) -> ExitCode {
    let text = match read_input(&common.input) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let error_out = |common: &InputArgs, violations: Vec<Violation>| {
        print_report(common.format, &ResultReport::error(violations));
        ExitCode::from(1)
    };
    let problem = match problem_of(&common.input, &text) {
        Ok(p) => p,
        Err(violations) => return error_out(common, violations),
    };
    let violations = problem.validate();
    if !violations.is_empty() {
        return error_out(common, violations);
    }
    if !problem.d.is_scalars() {
        return error_out(
            common,
            vec![Violation::new(
                "oracle",
                "the oracle simulates free position over the scalars; the amalgam must be trivial",
            )],
        );
    }
    let one = ExtRat::one();
    let mut pairs = BTreeSet::new();
    for a in atom_traces(&problem.a.summands) {
        for b in atom_traces(&problem.b.summands) {
            if a < one && b < one {
                pairs.insert((a.clone(), b.clone()));
            }
        }
    }
    if pairs.is_empty() {
        return error_out(
            common,
            vec![Violation::new(
                "oracle",
                "no nondegenerate minimal-projection pairs: each side needs a matrix summand of trace below 1",
            )],
        );
    }
    let mut estimates: Vec<SpectrumEstimate> = Vec::new();
    for (a, b) in &pairs {
        eprintln!("oracle: pair a={a} b={b} at dim {dim}, {reps} reps");
        match two_free_projections_spectrum(a, b, dim, seed, reps) {
            Ok(e) => estimates.push(e),
            Err(e) => return error_out(common, vec![Violation::new("oracle", e.to_string())]),
        }
    }
    match common.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(&estimates).expect("estimates serialize")
        ),
        Format::Text => {
            for e in &estimates {
                println!(
                    "pair a={} b={}: atom1 {:.4} (predicted {:.4}), atom0 {:.4}",
                    e.a, e.b, e.atom1, e.predicted_atom1, e.atom0
                );
            }
        }
    }
    ExitCode::from(0)
}
