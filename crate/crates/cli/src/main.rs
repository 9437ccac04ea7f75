//! `abmod`: command-line front end for the abmod library.
//!
//! Exit codes: 0 success or a positive verdict, 1 a negative verdict or a
//! failed check, 2 an error, 3 an inconclusive result.

mod commands;
mod input;
mod render;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use commands::{Outcome, Status};

#[derive(Parser, Debug)]
#[command(name = "abmod", version, about = "Exact computations with (a,b)-modules")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// b-adic precision; overrides a `precision` line in scripts [default: 12 when unspecified]
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// Seed for randomized searches
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit a JSON report instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Random trials for isomorphism and idempotent searches
    #[arg(long, global = true, default_value_t = 32)]
    pub trials: usize,
    /// Worker threads for parallel searches
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

pub const DEFAULT_PRECISION: usize = 12;

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the commutation relation `ab - ba = b^2` on the presentation
    Validate { file: String },
    /// Print a module
    Show { file: String },
    /// The dual module
    Dual { file: String },
    /// The adjoint module (conjugate of the dual)
    Adjoint { file: String },
    /// The conjugate module
    Conjugate { file: String },
    /// Tensor product of two modules
    Tensor { left: String, right: String },
    /// Direct sum of modules
    Sum {
        #[arg(required = true)]
        files: Vec<String>,
    },
    /// Basis of the space of morphisms
    Homs { domain: String, codomain: String },
    /// Basis of the endomorphism space
    Endos { file: String },
    /// Decide whether two modules are isomorphic
    Isomorphic { left: String, right: String },
    /// Krull-Schmidt decomposition
    Decompose { file: String },
    /// Exponents of a composition series
    CompSeries { file: String },
    /// Regularity test by saturation
    Regular {
        file: String,
        /// Saturation step cap [default: rank times precision]
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Basis of compatible sesquilinear forms
    Forms { file: String },
    /// Which parities carry a nondegenerate form
    Hermitianize { file: String },
    /// Self-adjoint classification of the indecomposable factors
    Classify { file: String },
    /// Pairing family of a duality isomorphism into the delta-dual
    SaitoExtract {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        /// Defaults to delta! for a positive integer delta, 1 otherwise
        #[arg(long, allow_hyphen_values = true)]
        normalization: Option<String>,
    },
    /// Check the pairing axioms on a family document
    SaitoCheck {
        file: String,
        /// Module for the derivation axiom when the family does not embed one
        #[arg(long)]
        module: Option<String>,
    },
    /// Symmetrize the isomorphism behind a family document
    SaitoSymmetrize {
        file: String,
        #[arg(long)]
        module: Option<String>,
    },
}

fn report(cli: &Cli, outcome: &Outcome, elapsed_ms: u128) -> Value {
    json!({
        "format": abmod::format::FORMAT_VERSION,
        "object": "report",
        "command": render::command_name(&cli.command),
        "arguments": render::command_args(&cli.command),
        "status": outcome.status.name(),
        "certified": outcome.certified,
        "precision": outcome.precision,
        "seed": cli.opts.seed,
        "elapsed_ms": elapsed_ms as u64,
        "result": outcome.json,
    })
}

/// Writes to stdout; a closed pipe ends output quietly.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        std::process::exit(0);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.opts.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = commands::run(&cli.command, &cli.opts);
    let elapsed = start.elapsed().as_millis();
    match outcome {
        Ok(o) => {
            if cli.opts.json {
                out(&format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report(&cli, &o, elapsed)).expect("json")
                ));
            } else if o.human.ends_with('\n') {
                out(&o.human);
            } else {
                out(&format!("{}\n", o.human));
            }
            ExitCode::from(o.status.code())
        }
        Err(e) => {
            let status = Status::from_error(&e);
            if cli.opts.json {
                let v = json!({
                    "format": abmod::format::FORMAT_VERSION,
                    "object": "error",
                    "command": render::command_name(&cli.command),
                    "status": status.name(),
                    "message": e.to_string(),
                });
                out(&format!("{}\n", serde_json::to_string_pretty(&v).expect("json")));
            } else {
                eprintln!(
                    "{}: {e}",
                    if status == Status::Inconclusive {
                        "inconclusive"
                    } else {
                        "error"
                    }
                );
            }
            ExitCode::from(status.code())
        }
    }
}
