//! Command-line front end: batch experiment runner, invariant verifier,
//! and matrix/rule dumps.

mod report;
mod run;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fraccol::fracmat::{caputo_psdm, rl_mod_psdm, DerivKind};
use fraccol::orthopoly::JacobiParam;
use fraccol::quadrature::{jacobi_gauss, jacobi_gauss_lobatto};
use fraccol::solver::Scheme;

#[derive(Parser)]
#[command(
    name = "fraccol",
    about = "Fractional spectral collocation toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a preset experiment over a list of resolutions and schemes
    Run(RunArgs),
    /// Run the invariant suite (inverse identities, exactness oracles)
    Verify(VerifyArgs),
    /// Format a result CSV as an aligned text table
    Table(TableArgs),
    /// Dump a fractional differentiation matrix as CSV
    DumpMatrix(DumpMatrixArgs),
    /// Dump a quadrature rule as CSV
    DumpRule(DumpRuleArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Preset name (sec61, sec62, caputo-smooth, rl-smooth, rl-table1)
    #[arg(long)]
    preset: String,
    /// Resolutions, ascending (comma separated)
    #[arg(long = "N", value_delimiter = ',', default_values_t = vec![8usize, 16, 32, 64, 128])]
    n: Vec<usize>,
    /// Schemes: l-col, b-col, pl-col (comma separated)
    #[arg(long, value_delimiter = ',', default_values_t = vec!["b-col".to_string()])]
    scheme: Vec<String>,
    /// Override the leading fractional order
    #[arg(long)]
    mu: Option<f64>,
    /// Override the lower fractional order
    #[arg(long)]
    nu: Option<f64>,
    /// Iterative solver tolerance
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extend the default N list to 1024 and compute large spectra
    #[arg(long)]
    slow: bool,
    /// Seed (accepted for interface parity; run is deterministic)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Resolution for the invariant suite
    #[arg(long = "N", default_value_t = 16)]
    n: usize,
    /// Seed for randomized property checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance scale multiplier
    #[arg(long, default_value_t = 1.0)]
    tol: f64,
}

#[derive(Args)]
struct TableArgs {
    /// Result CSV produced by `run`
    input: PathBuf,
}

#[derive(Args)]
struct DumpMatrixArgs {
    /// Derivative flavor: caputo or rl
    #[arg(long, default_value = "caputo")]
    flavor: String,
    /// Fractional order
    #[arg(long)]
    mu: f64,
    /// Resolution
    #[arg(long = "N", default_value_t = 16)]
    n: usize,
    /// Jacobi parameter alpha
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Jacobi parameter beta
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpRuleArgs {
    /// Resolution (top polynomial degree)
    #[arg(long = "N", default_value_t = 16)]
    n: usize,
    /// Jacobi parameter alpha
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Jacobi parameter beta
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// Gauss rule instead of Gauss-Lobatto
    #[arg(long)]
    gauss: bool,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    match s.to_ascii_lowercase().as_str() {
        "l-col" | "lcol" | "l" => Ok(Scheme::LCol),
        "b-col" | "bcol" | "b" => Ok(Scheme::BCol),
        "pl-col" | "plcol" | "pl" => Ok(Scheme::PlCol),
        other => Err(format!("unknown scheme '{other}' (expected l-col, b-col or pl-col)")),
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Exit with code 2 and a message on stderr (usage error).
fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run(args) => run::run_cmd(&args),
        Cmd::Verify(args) => verify::verify_cmd(&args),
        Cmd::Table(args) => match std::fs::read_to_string(&args.input) {
            Ok(text) => match report::emit_table(&text) {
                Ok(table) => {
                    print!("{table}");
                    ExitCode::SUCCESS
                }
                Err(msg) => usage_error(&msg),
            },
            Err(err) => usage_error(&format!("cannot read {}: {err}", args.input.display())),
        },
        Cmd::DumpMatrix(args) => {
            let kind = match args.flavor.to_ascii_lowercase().as_str() {
                "caputo" => DerivKind::Caputo,
                "rl" | "modified-rl" => DerivKind::ModifiedRL,
                other => return usage_error(&format!("unknown flavor '{other}'")),
            };
            let built = JacobiParam::new(args.alpha, args.beta)
                .and_then(|p| jacobi_gauss_lobatto(args.n, p))
                .and_then(|rule| match kind {
                    DerivKind::Caputo => caputo_psdm(&rule, args.mu),
                    DerivKind::ModifiedRL => rl_mod_psdm(&rule, args.mu),
                });
            match built {
                Ok(m) => match write_out(&args.out, &m.to_csv()) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(err) => usage_error(&format!("cannot write output: {err}")),
                },
                Err(err) => usage_error(&err.to_string()),
            }
        }
        Cmd::DumpRule(args) => {
            let built = JacobiParam::new(args.alpha, args.beta).and_then(|p| {
                if args.gauss {
                    jacobi_gauss(args.n, p)
                } else {
                    jacobi_gauss_lobatto(args.n, p)
                }
            });
            match built {
                Ok(rule) => match write_out(&args.out, &rule.to_csv()) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(err) => usage_error(&format!("cannot write output: {err}")),
                },
                Err(err) => usage_error(&err.to_string()),
            }
        }
    }
}
