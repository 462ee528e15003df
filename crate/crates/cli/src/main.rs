use std::path::PathBuf;
use std::process::ExitCode;

use casimir::commands::{self, GradientMode};
use casimir::{CliError, RunConfig};
use clap::{Args, Parser, Subcommand};

/// Thermal Casimir force gradients for graphene-coated plates.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Override a config value, e.g. `--set geometry.a_step_nm=5`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Output directory (defaults to `output.dir`).
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Gradient and uncertainty bands at T and at T = 0.
    Gradient {
        /// Use the configured sheet suspended in vacuum.
        #[arg(long, conflicts_with = "ideal_metal")]
        freestanding: bool,
        /// Unit reflection on both bodies.
        #[arg(long)]
        ideal_metal: bool,
    },
    /// Relative thermal corrections, full and implicit.
    Thermal,
    /// Onset of the classical regime for material pairs.
    Regime,
    /// Synthetic frequency-shift records.
    Synth,
    /// Electrostatic calibration and gradient extraction.
    Calibrate {
        /// CSV with z_piezo_nm, voltage_v, delta_omega_rad_s, set_id, run_id.
        shifts: PathBuf,
    },
    /// Comparison of measured gradients with theory.
    Compare {
        /// CSV with a_nm, gradient_un_per_m, err_gradient_un_per_m, err_a_nm.
        measurements: PathBuf,
    },
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let c = &cli.common;
    let cfg = RunConfig::load(c.config.as_deref(), &c.overrides)?;
    let out = c.out.as_deref();
    commands::with_pool(c.threads, || match &cli.command {
        Command::Gradient { freestanding, ideal_metal } => {
            let mode = if *ideal_metal {
                GradientMode::IdealMetal
            } else if *freestanding {
                GradientMode::Freestanding
            } else {
                GradientMode::Configured
            };
            commands::cmd_gradient(&cfg, mode, out).map(|p| vec![p])
        }
        Command::Thermal => commands::cmd_thermal(&cfg, out).map(|p| vec![p]),
        Command::Regime => commands::cmd_regime(&cfg, out).map(|p| vec![p]),
        Command::Synth => commands::cmd_synth(&cfg, out).map(|p| vec![p]),
        Command::Calibrate { shifts } => commands::cmd_calibrate(&cfg, shifts, out).map(|(a, b)| vec![a, b]),
        Command::Compare { measurements } => commands::cmd_compare(&cfg, measurements, out).map(|(a, b)| vec![a, b]),
    })?
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("casimir: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
