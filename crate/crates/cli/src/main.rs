//! `pdres`: resonance varieties of Poincaré duality algebras from the command line.
//!
//! Exit codes: 0 pass, 1 mathematical failure, 2 usage, 3 budget refusal.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pdres::enumerate::DEFAULT_BUDGET;
use pdres::Error;

use input::{InputArgs, WithArgs};

#[derive(Debug, Parser)]
#[command(name = "pdres", version, about = "Resonance varieties of PD algebras built from alternating 3-forms")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    common: Common,
}

/// Options shared by every verb.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Coefficient field: rational, pP, or a list pP,pQ where the verb allows it
    #[arg(long, global = true, value_name = "FIELD")]
    pub field: Option<String>,
    /// Maximum number of points (or search nodes) a single sweep may visit
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Worker threads for sweeps
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Print a plain-text table instead of JSON
    #[arg(long, global = true)]
    pub table: bool,
    /// Write the output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Resonance profile: every R^i_k with counts and sample points
    Resonance(ResonanceArgs),
    /// Pfaffian ideal of the skew matrix of a 3-form, or Pf itself
    Pfaffian(PfaffianArgs),
    /// Det and Pf from the codimension-one minors, with consistency checks
    Turaev(SingleArgs),
    /// Largest 2-singular subspace
    Nullity(NullityArgs),
    /// BP- and DFMR-genericity of an odd-rank form
    Generic(SingleArgs),
    /// Connected sum of two PD algebras
    Connsum(BinaryArgs),
    /// Tensor product of two algebras
    Tensor(BinaryArgs),
    /// Wedge sum of two algebras
    Wedge(BinaryArgs),
    /// Check named structural statements exhaustively
    Verify(VerifyArgs),
    /// Inspect or verify the embedded table of irreducible forms
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
pub struct SingleArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct ResonanceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Report only depth K in every degree
    #[arg(long, value_name = "K", allow_hyphen_values = true)]
    pub depth: Option<i64>,
    /// Also run these claims (repeatable)
    #[arg(long, value_name = "NAME")]
    pub claim: Vec<String>,
    /// Attach ideal generators to every locus
    #[arg(long)]
    pub generators: bool,
    /// Refuse ideals with more generators than this
    #[arg(long, default_value_t = 5000)]
    pub generator_limit: usize,
    /// Sample points per locus
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct PfaffianArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Size of the principal Pfaffians; omitted means Pf(mu)
    #[arg(long, value_name = "S")]
    pub size: Option<usize>,
}

#[derive(Debug, Args)]
pub struct NullityArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Largest subspace dimension to search for
    #[arg(long, value_name = "D")]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BinaryArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub with: WithArgs,
    #[arg(long, value_name = "K", allow_hyphen_values = true)]
    pub depth: Option<i64>,
    /// Also run these claims on the pair (repeatable)
    #[arg(long, value_name = "NAME")]
    pub claim: Vec<String>,
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    /// Write the combined algebra as JSON to FILE
    #[arg(long, value_name = "FILE")]
    pub emit_algebra: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub with: WithArgs,
    /// Claim to check (repeatable); "all" runs every single-input claim
    #[arg(long, value_name = "NAME", required = true)]
    pub claim: Vec<String>,
    /// Morphism for FUNCTORIALITY: pinch, or inclusion (first summand into the connected sum)
    #[arg(long, value_name = "KIND")]
    pub morphism: Option<String>,
    /// Restrict FUNCTORIALITY to one degree
    #[arg(long, value_name = "I")]
    pub degree: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[command(subcommand)]
    pub action: CatalogAction,
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// List every entry with its tabulated columns
    List,
    /// Show one entry and its expectation at every depth
    Show { id: String },
    /// Sweep entries and compare with the table
    Verify {
        /// Entry ids
        ids: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Judge entries by their amended columns where present
        #[arg(long)]
        amended: bool,
    },
}

/// Why a run did not succeed, and the exit code that goes with it.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn usage_from(e: Error) -> Self {
        match e {
            Error::Budget { .. } => e.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Budget { .. } => 3,
            Error::Parse(_) | Error::Characteristic(_) | Error::Structural(_) | Error::Unsupported(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

/// What a verb produced: a document and whether every check in it passed.
pub struct Outcome {
    pub json: serde_json::Value,
    pub table: String,
    pub passed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.verb, &cli.common) {
        Ok(out) => {
            let text = if cli.common.table {
                out.table
            } else {
                serde_json::to_string_pretty(&out.json).expect("json renders") + "\n"
            };
            if let Err(e) = emit(&cli.common, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(common: &Common, text: &str) -> std::io::Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
