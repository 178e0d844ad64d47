//! `valtree`: build, classify and render 2-adic valuation trees of
//! `x^e + D` and solve `x^e + D = 2^c y` with `y` odd.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use valtree::{Exponent, Limits, Nat, Poly};

use crate::commands::TableArgs;
use crate::output::{emit, CliError, Format, Outcome};

const MAX_NODES_VAR: &str = "VALTREE_MAX_NODES";

#[derive(Parser)]
#[command(name = "valtree", version, about = "2-adic valuation trees of x^e + D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the payload to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Expand and render the valuation tree of x^e + D.
    Tree {
        #[arg(value_parser = parse_exponent)]
        exponent: Exponent,
        #[arg(value_parser = parse_constant)]
        constant: Nat,
        #[arg(long, default_value_t = Limits::DEFAULT_MAX_DEPTH, value_parser = clap::value_parser!(u32).range(1..=62))]
        depth: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Label unresolved nodes with the minimum valuation on their class.
        #[arg(long)]
        refine_bounds: bool,
    },
    /// Finite/infinite verdict and admissible exponents c.
    Classify {
        #[arg(value_parser = parse_exponent)]
        exponent: Exponent,
        #[arg(value_parser = parse_constant)]
        constant: Nat,
        #[arg(long, default_value_t = valtree::classify::CLASSIFY_DEPTH, value_parser = clap::value_parser!(u32).range(1..=62))]
        depth: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Minimal positive x with nu2(x^e + D) = c.
    Solve {
        #[arg(value_parser = parse_exponent)]
        exponent: Exponent,
        #[arg(value_parser = parse_constant)]
        constant: Nat,
        c: u32,
        /// Largest x accepted as a witness [default: 2^(c+2)].
        #[arg(long)]
        bound: Option<Nat>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solution tables for a range of D, or the x^2 + 7 recursion.
    Table {
        #[arg(value_parser = parse_exponent)]
        exponent: Exponent,
        #[arg(long, default_value_t = 1, value_parser = parse_constant)]
        d_from: Nat,
        #[arg(long, default_value_t = 40, value_parser = parse_constant)]
        d_to: Nat,
        /// Also list D whose tree is infinite (exponents below the frontier).
        #[arg(long)]
        include_infinite: bool,
        #[arg(long, default_value_t = valtree::classify::CLASSIFY_DEPTH, value_parser = clap::value_parser!(u32).range(1..=62))]
        depth: u32,
        /// Tabulate the x^2 + 7 recursion instead.
        #[arg(long)]
        recursion: bool,
        #[arg(long, default_value_t = 26, value_parser = clap::value_parser!(u32).range(3..=64))]
        c_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check classifications and trees against direct computation.
    Verify {
        #[arg(value_parser = parse_exponent)]
        exponent: Exponent,
        #[arg(long, value_parser = parse_constant)]
        d_max: Nat,
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..=40))]
        depth: u32,
        #[arg(long, default_value_t = 65536)]
        x_max: Nat,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    let e: u32 = s.parse().map_err(|e| format!("{e}"))?;
    Exponent::try_from(e).map_err(|e| e.to_string())
}

fn parse_constant(s: &str) -> Result<Nat, String> {
    match s.parse::<Nat>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn max_nodes() -> Result<usize, CliError> {
    match std::env::var(MAX_NODES_VAR) {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Usage(format!("{MAX_NODES_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(Limits::DEFAULT_MAX_NODES),
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    let max_nodes = max_nodes()?;
    match command {
        Command::Tree {
            exponent,
            constant,
            depth,
            format,
            refine_bounds,
        } => commands::tree(
            Poly::new(exponent, constant)?,
            Limits {
                max_depth: depth,
                max_nodes,
            },
            refine_bounds,
            format,
        ),
        Command::Classify {
            exponent,
            constant,
            depth,
            format,
        } => commands::classify(Poly::new(exponent, constant)?, depth, format),
        Command::Solve {
            exponent,
            constant,
            c,
            bound,
            format,
        } => commands::solve(Poly::new(exponent, constant)?, c, bound, max_nodes, format),
        Command::Table {
            exponent,
            d_from,
            d_to,
            include_infinite,
            depth,
            recursion,
            c_max,
            format,
        } => {
            if recursion {
                if exponent != Exponent::Square {
                    return Err(CliError::Usage("--recursion applies to x^2 + 7 only".into()));
                }
                commands::recursion_table(c_max, format)
            } else {
                commands::table(
                    TableArgs {
                        exponent,
                        d_from,
                        d_to,
                        include_infinite,
                        depth,
                    },
                    format,
                )
            }
        }
        Command::Verify {
            exponent,
            d_max,
            depth,
            x_max,
            format,
        } => commands::verify(exponent, d_max, depth, x_max, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|outcome| {
        emit(&outcome.payload, cli.out.as_deref())?;
        Ok(outcome.status)
    });
    match result {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("valtree: {e}");
            e.status().into()
        }
    }
}
