//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::CommandKind;

/// Simulator for dipole induced transparency: reflection spectra of a
/// single-sided cavity coupled to a three-level emitter, Stark-shifted Kerr
/// response, and time-domain cross-validation.
#[derive(Parser, Debug)]
#[command(name = "dit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reflectivity spectrum over a detuning grid
    Spectrum(CommonArgs),
    /// Reflection phase spectrum over a detuning grid
    Phase(CommonArgs),
    /// Stark-shifted (Kerr) spectra, one sweep per drive
    Kerr(CommonArgs),
    /// Cross-validate the analytic spectra against the time-domain
    /// integrator; exits 2 when the check fails
    #[command(name = "oracle-check")]
    OracleCheck(CommonArgs),
    /// Emit the preset figure bundle: coupling series, phase spectra,
    /// Kerr shifts, and a resonance summary
    Figures(CommonArgs),
}

impl Command {
    pub fn split(&self) -> (CommandKind, &CommonArgs) {
        match self {
            Command::Spectrum(a) => (CommandKind::Spectrum, a),
            Command::Phase(a) => (CommandKind::Phase, a),
            Command::Kerr(a) => (CommandKind::Kerr, a),
            Command::OracleCheck(a) => (CommandKind::OracleCheck, a),
            Command::Figures(a) => (CommandKind::Figures, a),
        }
    }
}

/// Flags shared by every subcommand. Rates accept THz (default), GHz, and
/// MHz suffixes; flags override the configuration file.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Configuration file: `key = value` lines, or a JSON manifest written
    /// by a previous run
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Cavity decay rate into the waveguide
    #[arg(long, value_name = "RATE", allow_hyphen_values = true)]
    pub gamma: Option<String>,

    /// Cavity loss rate to other channels
    #[arg(long, value_name = "RATE", allow_hyphen_values = true)]
    pub kappa: Option<String>,

    /// Cavity-dipole coupling (1-2 transition)
    #[arg(long, value_name = "RATE", allow_hyphen_values = true)]
    pub g1: Option<String>,

    /// Stark-field coupling (2-3 transition)
    #[arg(long, value_name = "RATE", allow_hyphen_values = true)]
    pub g2: Option<String>,

    /// Dipole dephasing rate
    #[arg(long, value_name = "RATE", allow_hyphen_values = true)]
    pub tau2: Option<String>,

    /// 2-3 coherence dephasing rate
    #[arg(long, value_name = "RATE", allow_hyphen_values = true)]
    pub tau3: Option<String>,

    /// Dipole detuning from the cavity resonance
    #[arg(long, value_name = "RATE", allow_hyphen_values = true)]
    pub delta: Option<String>,

    /// Cavity resonance frequency
    #[arg(long, value_name = "FREQ", allow_hyphen_values = true)]
    pub omega0: Option<String>,

    /// Frequency of the 2-3 transition
    #[arg(long, value_name = "FREQ", allow_hyphen_values = true)]
    pub nu: Option<String>,

    /// Detuning grid to sweep, THz
    #[arg(long, value_name = "MIN:MAX:N", allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Override just the number of grid points
    #[arg(long, value_name = "N")]
    pub points: Option<usize>,

    /// Stark drive as DETUNING:PHOTONS (THz, photon number); repeatable;
    /// DETUNING may be "inf" for the drive-off sentinel
    #[arg(long = "drive", value_name = "DELTA:N", allow_hyphen_values = true)]
    pub drives: Vec<String>,

    /// Oracle tolerance on |r_oracle - r_analytic|
    #[arg(long, value_name = "TOL", allow_negative_numbers = true)]
    pub tol: Option<f64>,

    /// Output directory (created if missing)
    #[arg(long = "out", value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Comma-separated output formats: csv,json,svg
    #[arg(long, value_name = "LIST")]
    pub formats: Option<String>,

    /// Sign convention for the Stark two-photon loss: "literal" (default)
    /// or "damping"
    #[arg(long = "loss-sign", value_name = "MODE")]
    pub loss_sign: Option<String>,
}
