//! Batch front end: loads spec files, runs one check per subcommand, and
//! writes a CSV table followed by a `[summary]` block.
//!
//! Exit status is 0 when the check passes, 2 when a witness or violation was
//! found, and 1 on any error.

pub mod commands;
pub mod spec;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{Report, Status};
pub use spec::{Generator, Overrides, SpecError, SpecFile};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_WITNESS: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lseries", version, about = "Checks on Dirichlet series and L-functions")]
pub struct Cli {
    /// Write the CSV table here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Absolute convergence.
    A,
    /// Convergence.
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    T1,
    T3,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    pub spec_f: PathBuf,
    pub spec_g: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree, conductor and the B invariant of the gamma data.
    Invariants { spec: PathBuf },
    /// k-lift of a spec, with a check of the degree and conductor laws.
    Lift {
        spec: PathBuf,
        #[arg(short, long)]
        k: u32,
        #[arg(short, long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Abscissa estimate from the coefficients.
    Abscissa {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "a")]
        which: Which,
        #[arg(long, default_value_t = 1_000_000)]
        nmax: usize,
    },
    /// Euler-product split and its reconstruction.
    Split {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "t1")]
        variant: Variant,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        nmax: usize,
    },
    /// Phase alignment of the prime coefficients.
    Kronecker {
        spec: PathBuf,
        #[arg(long, default_value_t = 50)]
        prime_max: usize,
        #[arg(long, default_value_t = 0.02)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        tmin: f64,
        /// Align the first factor of the split instead of the series itself.
        #[arg(long)]
        part1: bool,
        #[arg(long, default_value_t = 0.9)]
        sigma: f64,
        #[arg(long, default_value_t = 50.0)]
        y: f64,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Zeros with real part above sigma and |imaginary part| at most tmax.
    Zeros {
        spec: PathBuf,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        tmax: f64,
    },
    /// Checks |F| ≤ c|G| on a strip.
    Majorant {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        sigma_min: f64,
        #[arg(long, default_value_t = 2.0)]
        sigma_max: f64,
        #[arg(long, default_value_t = 300)]
        grid: usize,
        #[arg(long, default_value_t = 30.0)]
        tmax: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Searches for points with |F| > M|G|.
    Dominate {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_delimiter = ',', default_value = "1000")]
        m: Vec<f64>,
        #[arg(long, default_value_t = 0.5005)]
        sigma_floor: f64,
    },
    /// Random trials of the unit-circle lemma.
    LemmaScan {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Functional-equation residuals at random points.
    FeCheck {
        spec: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `args` (program name first) and runs the command. The table and
/// summary go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_PASS
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_ERROR
                }
            };
        }
    };
    match commands::execute(&cli.command) {
        Ok(report) => match report.emit(cli.csv.as_deref(), out) {
            Ok(()) => report.status.code(),
            Err(e) => {
                let _ = writeln!(err, "error: {e:#}");
                EXIT_ERROR
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}
