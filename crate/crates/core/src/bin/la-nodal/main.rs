//! Command-line driver for the la-nodal library.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on a
//! usage or configuration error, 3 when a computation fails. The thread
//! count can be set with `LA_NODAL_THREADS`.

mod commands;
mod config;
mod spec;

use clap::{Args, Parser, Subcommand};
use la_nodal::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "la-nodal", version, about = "Frequency functions, blow-ups and nodal sets for div(|y|^a grad u) = 0")]
pub struct Cli {
    /// JSON configuration `{subcommand, parameters, output, seed}`; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory that receives the artifacts of the run
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for boundary-data perturbations
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build an exact solution polynomial and optionally verify L_a p = 0
    Poly(PolyArgs),
    /// Poisson extension of boundary data to the upper half-space
    Extend(ExtendArgs),
    /// Solve the weighted Dirichlet problem on a grid
    Solve(SolveArgs),
    /// Frequency, Weiss and Monneau profiles over a radius ladder
    Frequency(FrequencyArgs),
    /// Vanishing order, tangent map and stratum at nodal points
    Blowup(BlowupArgs),
    /// Nodal set of a planar field and its length
    Nodal(NodalArgs),
    /// 1-D s-harmonic function with a prescribed vanishing order at 0
    Construct1d(Construct1dArgs),
    /// Run the acceptance criteria and print the verdict matrix
    Acceptance(AcceptanceArgs),
    /// List or dump the corpus of named fields
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Measure and extension constants for a weight
    Report(ReportArgs),
    /// Compare the D-to-N map with the direct fractional Laplacian
    CheckFrac(CheckFracArgs),
}

#[derive(Args, Debug)]
pub struct PolyArgs {
    /// even | odd | planar | ext
    #[arg(long)]
    pub family: String,
    /// Degree for the planar families
    #[arg(long)]
    pub k: Option<u32>,
    /// Exponents of the monomial on Σ for `ext`, e.g. 1,1
    #[arg(long, allow_hyphen_values = true)]
    pub monomial: Option<String>,
    /// Weight exponent as p/q, or `symbolic`
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Check that L_a p is the zero polynomial
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    /// Fractional order s in (0, 1)
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// bump | construct:K | a polynomial field spec (its trace is used)
    #[arg(long, default_value = "bump")]
    pub datum: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Points on Σ, `;`-separated (comma-separated values when n = 1)
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Heights, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
    /// Also report the D-to-N value at each point
    #[arg(long)]
    pub dtn: bool,
}

#[derive(Args, Debug)]
pub struct CheckFracArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, default_value = "bump")]
    pub datum: String,
    /// Points on the line, comma-separated
    #[arg(long, default_value = "0,0.3,-0.3,0.6,-0.6")]
    pub x: String,
    /// Relative agreement required
    #[arg(long, default_value_t = 1e-5, value_parser = config::positive)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Field whose values are the Dirichlet data
    #[arg(long)]
    pub field: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, default_value_t = 65)]
    pub nx: usize,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub height: f64,
    #[arg(long, default_value_t = 1e-11, value_parser = config::positive)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Amplitude of a seeded smooth perturbation of the data
    #[arg(long, default_value_t = 0.0)]
    pub perturb: f64,
}

#[derive(Args, Debug)]
pub struct FrequencyArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Centre on Σ, comma-separated; the origin by default
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// `geometric:r_max,r_min,count` or a list of radii
    #[arg(long, default_value = "geometric:1,0.01,8")]
    pub radii: String,
    /// Homogeneity used by W_k and M; defaults to the field's degree at the
    /// origin and to the estimated order elsewhere
    #[arg(long)]
    pub k: Option<f64>,
    /// Allowed decrease of N between consecutive radii
    #[arg(long, default_value_t = 1e-8, value_parser = config::positive)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct BlowupArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Points `x,..,y;x,..,y`; the origin by default
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    #[arg(long, default_value_t = 1e-2, value_parser = config::positive)]
    pub snap_tol: f64,
}

#[derive(Args, Debug)]
pub struct NodalArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Grid cells per side of the sampling square
    #[arg(long, default_value_t = 256)]
    pub cells: usize,
    /// Radius of the disk about the origin
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1e-12, value_parser = config::positive)]
    pub zero_tol: f64,
}

#[derive(Args, Debug)]
pub struct Construct1dArgs {
    #[arg(long)]
    pub order: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Number of samples of u on [-range, range]
    #[arg(long, default_value_t = 601)]
    pub samples: usize,
    #[arg(long, default_value_t = 3.0)]
    pub range: f64,
}

#[derive(Args, Debug)]
pub struct AcceptanceArgs {
    /// Comma-separated criterion numbers; all by default
    #[arg(long)]
    pub only: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum CorpusCommand {
    /// Names, kinds and formulas
    List(CorpusArgs),
    /// Entries with their ground truth as JSON
    Dump(CorpusArgs),
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, default_value_t = 6)]
    pub max_degree: u32,
    /// Restrict to one entry
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Weight exponent; `s = (1 - a)/2` is derived when it lies in (0, 1)
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Fractional order; `a = 1 - 2s` is derived
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
}

/// What a command produced.
pub struct Outcome {
    pub stdout: String,
    /// `(file name, contents)` written below `--out`.
    pub files: Vec<(String, String)>,
    pub passed: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) | Error::WrongParity(_) | Error::NonIntegrableWeight(_) | Error::Domain(..) | Error::NotNodal(..) => 2,
        _ => 3,
    }
}

fn error_report(e: &Error) -> String {
    let kind = format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
    serde_json::to_string_pretty(&serde_json::json!({ "error": { "kind": kind, "message": e.to_string() } })).unwrap()
}

fn main() -> ExitCode {
    if let Ok(t) = std::env::var("LA_NODAL_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("LA_NODAL_THREADS must be a positive integer, got {t:?}");
                return ExitCode::from(2);
            }
        }
    }
    let argv: Vec<String> = std::env::args().collect();
    let cli = match config::parse(argv) {
        Ok(c) => c,
        Err(config::ParseFailure::Clap(e)) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
        Err(config::ParseFailure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            return ExitCode::from(2);
        }
    };
    let Some(command) = cli.command else {
        eprintln!("no subcommand given; see --help");
        return ExitCode::from(2);
    };
    match commands::run(&command, cli.seed) {
        Ok(out) => {
            if let Some(dir) = &cli.out {
                if let Err(e) = write_files(dir, &out.files) {
                    println!("{}", error_report(&e));
                    return ExitCode::from(3);
                }
            }
            print!("{}", out.stdout);
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            println!("{}", error_report(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn write_files(dir: &std::path::Path, files: &[(String, String)]) -> la_nodal::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, body) in files {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}
