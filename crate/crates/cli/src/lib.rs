//! `matdens` command-line front end.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matdens::Error;

pub use input::{load, Instance};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "matdens",
    version,
    about = "Universal density, principal partition and truncation spectra of matroids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Largest number of bases or subsets an exhaustive oracle may enumerate.
    #[arg(long, env = "MATDENS_ORACLE_LIMIT", default_value_t = 100_000, global = true)]
    pub oracle_limit: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    Figure1,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Matroid descriptor (JSON) or graph edge list.
    pub input: Option<PathBuf>,

    /// Use a built-in instance instead of a file.
    #[arg(long, value_enum, conflicts_with = "input")]
    pub demo: Option<Demo>,

    /// Element weights in element order, whitespace or comma separated.
    #[arg(long)]
    pub weights: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Universal density, principal partition, strength and fractional arboricity.
    Analyze(Source),
    /// Universal densities of every truncation and dual truncation.
    Spectrum {
        #[command(flatten)]
        source: Source,
        /// Print a single row.
        #[arg(long)]
        t: Option<usize>,
        /// Print every element of every row.
        #[arg(long)]
        full: bool,
    },
    /// Minimum Kullback–Leibler divergence over the base polytope.
    Mkl {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200_000)]
        max_iter: usize,
        /// Also run the length certificate and the maximum-ratio core check.
        #[arg(long)]
        certify: bool,
    },
    /// Removal number N(M, k) with a witness.
    Nk {
        #[command(flatten)]
        source: Source,
        #[arg(short)]
        k: usize,
    },
    /// Vertex pairs whose new edge keeps the arboricity at k.
    Addable {
        #[command(flatten)]
        source: Source,
        #[arg(short)]
        k: usize,
    },
    /// Edge toughness of order c.
    Toughness {
        #[command(flatten)]
        source: Source,
        #[arg(short)]
        c: usize,
    },
    /// Cross-check the exact algorithms against exhaustive oracles.
    Verify(Source),
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Input(_) => EXIT_PARSE,
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::Domain(_) => EXIT_DOMAIN,
    }
}

/// Parse `args` (including the program name), run, and write the report to `out`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.format).as_bytes());
            if report.mismatch {
                EXIT_MISMATCH
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Capacity { limit, .. } if limit == cli.oracle_limit => {
                    let _ = writeln!(err, "hint: raise --oracle-limit (or MATDENS_ORACLE_LIMIT)");
                }
                Error::Capacity { .. } => {
                    let _ = writeln!(
                        err,
                        "hint: weights with smaller numerators and denominators need fewer element copies"
                    );
                }
                _ => {}
            }
            exit_code(&e)
        }
    }
}
