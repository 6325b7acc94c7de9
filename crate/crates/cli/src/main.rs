use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monofock::report::Suite;
use monofock::Error;

mod commands;
mod plot;

use commands::{Output, Settings};

/// Monotone binomial laws, their Fock-space models and the checks tying them together.
#[derive(Parser, Debug)]
#[command(name = "monofock", version, about)]
struct Cli {
    /// Working precision in bits; when given, numbers are printed to the
    /// matching number of decimal digits instead of 10.
    #[arg(long, global = true, value_name = "BITS")]
    precision_bits: Option<usize>,

    /// Write the result here instead of to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Largest n accepted for binomial laws (default 24).
    #[arg(long, global = true, env = "MONOFOCK_CAP_N", hide_env_values = true)]
    cap_n: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Atoms and weights of the monotone binomial law mu_n.
    Distribution {
        #[arg(long)]
        n: usize,
    },
    /// Run an invariant suite and write a JSON report.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// SVG stem plot of mu_n.
    Plot {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 640)]
        width: u32,
        #[arg(long, default_value_t = 400)]
        height: u32,
    },
    /// Largest atom and Kolmogorov distance to the arcsine law for n = 1..max_n.
    Clt {
        #[arg(long)]
        max_n: usize,
    },
    /// Norm of S_I for an index set I.
    Norm {
        /// Comma-separated, e.g. 1,3,5.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<u32>,
        /// Truncation level L of the surrounding space (default max(I)).
        #[arg(long)]
        max_level: Option<u32>,
    },
    /// The polynomials Q_m and P_m with M_m = Q_m / P_m.
    Polys {
        #[arg(long)]
        m: usize,
        /// Exact integer coefficients as decimal strings.
        #[arg(long)]
        exact: bool,
    },
    /// Commutant orbit of the vacuum under S_{1,3}.
    Counterexample,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match Settings::new(cli.precision_bits, cli.format, cli.cap_n) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let result = match cli.command {
        Command::Distribution { n } => commands::distribution(&settings, n),
        Command::Verify { suite } => commands::verify(&settings, suite),
        Command::Plot { n, width, height } => commands::plot(&settings, n, width, height),
        Command::Clt { max_n } => commands::clt(&settings, max_n),
        Command::Norm { indices, max_level } => commands::norm(&settings, indices, max_level),
        Command::Polys { m, exact } => commands::polys(&settings, m, exact),
        Command::Counterexample => commands::counterexample(&settings),
    };
    match result {
        Ok(out) => emit(out, cli.out),
        Err(e) => fail(&e),
    }
}

fn emit(out: Output, path: Option<PathBuf>) -> ExitCode {
    let written = match &path {
        Some(p) => fs::write(p, &out.text),
        None => io::stdout().lock().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: invariant check failed");
        ExitCode::from(1)
    }
}

/// Bad arguments exit with 2, failed computations with 1.
fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::InvalidArgument(_)
        | Error::CapExceeded { .. }
        | Error::IndexSet(_)
        | Error::Truncation { .. }
        | Error::EmptyTruncation => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}
