//! `profpush`: batch front end for the profile and pushforward engines.
//!
//! Inputs are file paths, `-` for stdin, or inline JSON. Output goes to stdout
//! only once the whole result is computed. Exit status is 0 on success, 1 on
//! any input or regime error, 2 when a check or oracle disagrees.

mod commands;
mod table;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "profpush",
    version,
    about = "Exact profile functions and pushforwards of radii of convergence"
)]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    /// Read radius literals as radii `p^-k` instead of log-values.
    #[arg(long, global = true, value_name = "P")]
    pub base: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Profile functions: series, composition, inversion, products.
    #[command(subcommand)]
    Profile(ProfileCmd),
    /// Pushforward multiradius and equation profile of a fiber.
    #[command(subcommand)]
    Pushforward(PushforwardCmd),
    /// Upper ramification jumps and the radii they predict.
    #[command(subcommand)]
    Herbrand(HerbrandCmd),
    /// Convergence polygon of a multiradius.
    Polygon { input: String },
    /// Irregularity of a direction model.
    Irregularity { input: String },
    /// Validators for the global formulas.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Profiles of the standard examples.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Subcommand, Debug)]
pub enum ProfileCmd {
    FromSeries {
        input: String,
    },
    /// `outer ∘ inner`.
    Compose {
        outer: String,
        inner: String,
    },
    Invert {
        input: String,
    },
    Pow {
        input: String,
        #[arg(long)]
        n: u32,
    },
    Mul {
        left: String,
        right: String,
    },
    NFunction {
        input: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum PushforwardCmd {
    Radii {
        input: String,
        /// Also run the Φ-table and equation-profile routes and report agreement.
        #[arg(long)]
        oracle: bool,
    },
    Profile {
        input: String,
    },
    /// Pushforward of the trivial rank one connection.
    Constant {
        input: String,
        #[arg(long)]
        sep: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum HerbrandCmd {
    Jumps { input: String },
    Radii { input: String },
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    Rh { input: String },
    Laplacian { input: String },
    Height { input: String },
    Bound { input: String },
}

#[derive(Subcommand, Debug)]
pub enum GenCmd {
    Frobenius(Prime),
    Tame,
    Inseparable {
        #[command(flatten)]
        prime: Prime,
        /// Valuation of the coefficient `δ`.
        #[arg(long)]
        delta: String,
    },
    OffFrobenius {
        #[command(flatten)]
        prime: Prime,
        #[arg(long)]
        val_a: String,
        #[arg(long)]
        u: String,
    },
}

#[derive(Args, Debug)]
pub struct Prime {
    #[arg(short = 'p')]
    pub p: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => out.value.to_string(),
                Format::Table => table::render(&out.value),
            };
            println!("{text}");
            ExitCode::from(if out.agrees { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
