//! `padyn` — run exact dynamics experiments from sectioned spec files.
//!
//! The subcommand names the experiment; the spec file carries the field,
//! the operator and the command parameters (the two must agree, which
//! catches running the wrong file). `--format` picks what goes to standard
//! output; `--report` additionally writes the machine-readable records to a
//! file. Reports are deterministic: the same spec, seed and budget give the
//! same bytes.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use padic_dynamics_cli::experiment::parse_spec;
use padic_dynamics_cli::runner;

#[derive(Parser)]
#[command(name = "padyn", version, about = "Exact p-adic linear dynamics experiments")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,

    /// Experiment spec file (optional only for selftest).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,

    /// Write the machine-readable report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// What standard output carries.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Seed for the selftest generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Selftest workload as a percentage of the full suite (1-100).
    #[arg(long, global = true, default_value_t = 100)]
    budget: u32,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Decide hypercyclicity or supercyclicity in closed form.
    Decide,
    /// Print the exact orbit prefix of a vector.
    Orbit,
    /// Search for a transitivity witness between two balls.
    Witness,
    /// Certify criterion data along a subsequence.
    VerifyCriterion,
    /// Certify a separation obstruction for the two-sided family.
    Obstruct,
    /// Run the library's invariant suite.
    Selftest,
}

impl CliCommand {
    fn name(&self) -> &'static str {
        match self {
            CliCommand::Decide => "decide",
            CliCommand::Orbit => "orbit",
            CliCommand::Witness => "witness",
            CliCommand::VerifyCriterion => "verify-criterion",
            CliCommand::Obstruct => "obstruct",
            CliCommand::Selftest => "selftest",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable summary on standard output.
    Human,
    /// Machine-readable records on standard output.
    Records,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run_cli(&cli));
}

fn run_cli(cli: &Cli) -> i32 {
    if cli.budget == 0 || cli.budget > 100 {
        eprintln!("error: --budget must be between 1 and 100");
        return 1;
    }

    let text = match &cli.spec {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return 1;
            }
        },
        None if matches!(cli.command, CliCommand::Selftest) => {
            "[command]\nname = selftest\n".to_string()
        }
        None => {
            eprintln!("error: the {} command needs --spec <file>", cli.command.name());
            return 1;
        }
    };

    let spec = match parse_spec(&text) {
        Ok(spec) => spec,
        Err(diagnostics) => {
            for d in &diagnostics {
                eprintln!("error: {d}");
            }
            return 1;
        }
    };

    if spec.command.name() != cli.command.name() {
        eprintln!(
            "error: the spec file runs `{}` but the command line says `{}`",
            spec.command.name(),
            cli.command.name()
        );
        return 1;
    }

    let out = match runner::run(&spec, cli.seed, cli.budget) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };

    if let Some(path) = &cli.report {
        if let Err(e) = fs::write(path, &out.records) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 1;
        }
    }
    let stdout_payload = match cli.format {
        Format::Human => &out.human,
        Format::Records => &out.records,
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(stdout_payload.as_bytes()).and_then(|()| stdout.flush()).is_err() {
        return 1;
    }
    out.exit
}
