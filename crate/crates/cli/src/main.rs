//! `rydgate`: command-line front end for the gate design library.
//!
//! Exit status: 0 on success, 1 on I/O failure, 2 on invalid input or
//! configuration, 3 on numerical failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rydgate::config::{load_config, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "rydgate",
    version,
    about = "Design and simulate a Rydberg-blockade phase gate between two trapped ions"
)]
struct Cli {
    /// TOML configuration file; all keys optional.
    #[arg(long, global = true, env = "RYDGATE_CONFIG")]
    config: Option<PathBuf>,
    /// Output file (default: config `output.path`, else standard output).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Table format for tabular outputs.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normal-mode frequencies and participation vectors of the two-ion crystal.
    Modes(ModesArgs),
    /// Franck–Condon overlap matrix between ground and shifted phonon bases.
    Fc(FcArgs),
    /// Microwave-dressed states of a single ion.
    Dress(DressArgs),
    /// Pair-potential sweep over the ion separation.
    Interactions(InteractionsArgs),
    /// Adiabatic gate phases, optional pulse optimization or phase trace.
    Gate(GateArgs),
    /// Full time-dependent evolution from |DD⟩ with the phonon in vacuum.
    Evolve(EvolveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
    Z,
    All,
}

#[derive(Args)]
pub struct ModesArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub axis: AxisArg,
    /// Polarizability of ion 1 over e² (m²/J); 0 for a low-lying state.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub pol1: f64,
    /// Polarizability of ion 2 over e² (m²/J).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub pol2: f64,
}

#[derive(Args)]
pub struct FcArgs {
    #[arg(long, value_enum, default_value = "x")]
    pub axis: AxisArg,
    /// Polarizability of ion 1 over e² (m²/J) in the excited configuration.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub pol1: f64,
    /// Polarizability of ion 2 over e² (m²/J) in the excited configuration.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub pol2: f64,
    /// Highest Fock number per mode.
    #[arg(long, default_value_t = rydgate::franck_condon::DEFAULT_N_MAX)]
    pub n_max: usize,
}

#[derive(Args)]
pub struct DressArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub omega_mw_mhz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_s_mhz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_p_mhz: Option<f64>,
    /// Also solve for the Δ_P − Δ_S that makes the lower branch unpolarizable.
    #[arg(long)]
    pub solve_zero: bool,
}

#[derive(Args)]
pub struct InteractionsArgs {
    #[arg(long, default_value_t = 2.0)]
    pub r_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
}

#[derive(Args)]
pub struct GateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub omega0_mhz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta0_mhz: Option<f64>,
    #[arg(long)]
    pub tau_us: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub blockade_mhz: Option<f64>,
    /// Solve for the Δ₀ giving φ_ent = π with Ω₀, τ and B fixed.
    #[arg(long)]
    pub optimize: bool,
    /// Lower end of the Δ₀ search bracket (MHz).
    #[arg(long, default_value_t = 0.3)]
    pub bracket_lo_mhz: f64,
    /// Upper end of the Δ₀ search bracket (MHz).
    #[arg(long, default_value_t = 1.5)]
    pub bracket_hi_mhz: f64,
    /// Emit the accumulated phases over the pulse as a table instead.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Args)]
pub struct EvolveArgs {
    /// Where to write the JSON summary (default: standard error).
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

fn load(path: Option<&PathBuf>) -> rydgate::Result<RunConfig> {
    match path {
        Some(p) => load_config(p),
        None => Ok(RunConfig::default()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(cli.config.as_ref()).map_err(commands::CliError::from).and_then(|cfg| {
        let format = cli.format.map(OutputFormat::from).unwrap_or(cfg.output.format);
        let path = cli.output.clone().or_else(|| cfg.output.path.clone());
        let mut sink = commands::Sink::open(path.as_deref())?;
        let r = match &cli.command {
            Command::Modes(a) => commands::modes(&cfg, a, format, &mut sink),
            Command::Fc(a) => commands::fc(&cfg, a, format, &mut sink),
            Command::Dress(a) => commands::dress(&cfg, a, &mut sink),
            Command::Interactions(a) => commands::interactions(&cfg, a, format, &mut sink),
            Command::Gate(a) => commands::gate(&cfg, a, format, &mut sink),
            Command::Evolve(a) => commands::evolve(&cfg, a, format, &mut sink),
        };
        r.and_then(|()| sink.finish())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
