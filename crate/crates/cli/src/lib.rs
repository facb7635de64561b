//! `latdisp` command line.
//!
//! # Output schema
//!
//! Every run writes one document, to stdout or to `--out`. A relative `--out`
//! path is resolved against `$LATDISP_OUT_DIR` when that variable is set.
//!
//! CSV (`--format csv`, the default):
//!
//! ```text
//! # meta {"tool":"latdisp","version":..,"schema":1,"command":..,"config":{..}}
//! # <key> {json}        zero or more extra one-line JSON blocks (fits, checks)
//! <header row>
//! <data rows>
//! ```
//!
//! Columns per command:
//!
//! | command | columns |
//! |---|---|
//! | pairs | d, q, r, defect |
//! | decay | kind, d, h, m, band, t_min, t_max, points, slope, intercept, r_squared, max_boundary_fraction |
//! | strichartz | d, h, m, q, r, family, value, horizon, n_t, characteristic_time, tail_fraction, tail_exponent, max_boundary_fraction |
//! | uniformity, constants, s1 | experiment, h, m, label, bound, member, param, lhs, rhs, ratio |
//! | knapp | d, h, epsilon, s, q, r, left_norm, right_norm, ratio, predicted_left, predicted_right, block_points, right_truncated, eps_over_h2 |
//! | czdemo | cube, origin, scale, side, average, sites |
//! | dnls | t, mass, energy, h1, hdot1, boundary_mass |
//!
//! Numbers use the shortest round-trip decimal form; infinite exponents are
//! written `inf`. Empty cells mean "not applicable".
//!
//! JSON (`--format json`) is `{"meta": {..}, "result": {..}}`.
//!
//! `dnls --snapshots FILE` also writes a little-endian binary dump: h (f64),
//! d (u64), M (u64), count (u64), then per snapshot t (f64) and M^d (re, im)
//! f64 pairs in row-major order.
//!
//! Exit codes: 0 success, 1 unknown or missing command, 2 configuration
//! error, 3 runtime error (boundary window exceeded, divergence, I/O).

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latdisp_harness::HarnessError;
use std::io::Write;
use std::path::PathBuf;

pub const OUT_DIR_ENV: &str = "LATDISP_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "latdisp",
    version,
    about = "Dispersive estimates on the lattice hZ^d: scans and DNLS runs"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for scans.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List admissible pairs 3/q + d/r = d/2.
    Pairs(commands::PairsArgs),
    /// Fit the sup-norm decay rate of a propagator on point data.
    Decay(commands::DecayArgs),
    /// One Strichartz norm with automatic time horizon.
    Strichartz(commands::StrichartzArgs),
    /// Strichartz ratios across h, with and without the 1/q derivative.
    Uniformity(commands::UniformityArgs),
    /// Ensemble scan of an inequality constant across h.
    Constants(commands::ConstantsArgs),
    /// Knapp block: both sides of the dual estimate over epsilon or h.
    Knapp(commands::KnappArgs),
    /// Calderon-Zygmund decomposition of random integer data.
    Czdemo(commands::CzArgs),
    /// Evolve the DNLS from Gaussian data and export the monitors.
    Dnls(commands::DnlsArgs),
    /// S1 norm and conserved-quantity bounds across h.
    S1(commands::S1Args),
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        if e.is_configuration() {
            CliError::Config(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

impl From<latdisp::Error> for CliError {
    fn from(e: latdisp::Error) -> Self {
        HarnessError::from(e).into()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    return 0;
                }
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 1,
                _ => 2,
            };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match commands::execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "latdisp: {e}");
            e.exit_code()
        }
    }
}
