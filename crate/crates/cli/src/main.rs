//! `kdv5` command line.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kdv5::JetSpace;

use crate::commands::Context;
use crate::config::{Config, Format};

#[derive(Parser, Debug)]
#[command(name = "kdv5", version, about = "Exact symbolic analysis of the variable-coefficient fifth-order KdV family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML scenario file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    #[arg(long, global = true)]
    max_jet_order: Option<u32>,
    /// Directory of fixture files replacing the bundled ones.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// One of general, f0, fconst, f2, f3 (degenerate for symmetries).
    #[arg(long, global = true)]
    case: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Normal form A = C = 1 and the transformation reaching it.
    Reduce,
    /// Adjoint equation of a reduced family.
    Adjoint,
    /// Determining equations for point symmetries.
    Determining,
    /// Check symmetry generators under their side conditions.
    VerifySymmetries,
    /// Nonlinear self-adjointness conditions for a substitution.
    SelfAdjoint,
    /// Conserved vectors.
    Conslaw,
    /// Divergence of conserved vectors on solutions.
    VerifyDivergence,
    /// Audit the printed conserved vectors in the fixtures.
    CheckPaper,
}

fn run(cli: Cli) -> Result<report::Report, String> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let order = cli.max_jet_order.or(config.max_jet_order).unwrap_or(kdv5::jet::DEFAULT_MAX_ORDER);
    let js = JetSpace::new(order).map_err(|e| e.to_string())?;
    let ctx = Context { config, case: cli.case.clone(), fixtures: cli.fixtures.as_deref(), js };
    match cli.command {
        Command::Reduce => commands::reduce(&ctx),
        Command::Adjoint => commands::adjoint(&ctx),
        Command::Determining => commands::determining(&ctx),
        Command::VerifySymmetries => commands::verify_symmetries(&ctx),
        Command::SelfAdjoint => commands::self_adjoint(&ctx),
        Command::Conslaw => commands::conslaw(&ctx),
        Command::VerifyDivergence => commands::verify_divergence(&ctx),
        Command::CheckPaper => commands::check_paper(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format_flag = cli.output;
    let config_format = cli.config.as_ref().and_then(|p| Config::load(p).ok()).and_then(|c| c.output);
    let format = format_flag.or(config_format).unwrap_or(Format::Text);
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(format));
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
