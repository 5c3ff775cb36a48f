use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use counterprop::biphoton::SpectrumMode;
use counterprop::report::{cmd_design, cmd_pattern, cmd_spectrum, cmd_tune, CommandOutput, RunConfig};
use counterprop::Error;

/// Design and analysis of counter-propagating entangled photon-pair sources.
#[derive(Parser)]
#[command(name = "counterprop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `[output].dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed, overriding the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the design and write the datasheet.
    Design {
        #[command(flatten)]
        common: Common,
    },
    /// Write the joint spectral densities as CSV.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "linearized", value_parser = ["linearized", "exact"])]
        mode: String,
    },
    /// Write the poling pattern and print its audit.
    Pattern {
        #[command(flatten)]
        common: Common,
        /// Pattern length in um, overriding `[pattern].length_um`.
        #[arg(long)]
        length_um: Option<f64>,
    },
    /// Write temperature tuning curves as CSV.
    Tune {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
    },
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<CommandOutput, Error> {
    match cli.command {
        Command::Design { common } => Ok(cmd_design(&load(&common)?)?.1),
        Command::Spectrum { common, mode } => cmd_spectrum(&load(&common)?, mode.parse::<SpectrumMode>()?),
        Command::Pattern { common, length_um } => Ok(cmd_pattern(&load(&common)?, length_um)?.1),
        Command::Tune { common, tmin, tmax } => cmd_tune(&load(&common)?, tmin, tmax),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.stdout);
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            let report = serde_json::json!({
                "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": code }
            });
            eprintln!("{report}");
            ExitCode::from(code as u8)
        }
    }
}
