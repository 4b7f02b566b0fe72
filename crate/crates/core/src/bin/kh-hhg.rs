use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kh_hhg::run::{run, Overrides};
use kh_hhg::{Engine, Normalization, RunConfig};

#[derive(Parser)]
#[command(
    name = "kh-hhg",
    version,
    about = "HHG spectra in the Kramers–Henneberger frame"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Directory for output CSVs (overrides the config)
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// exact | peaking | kspace
    #[arg(long, global = true)]
    engine: Option<Engine>,
    /// max | raw
    #[arg(long, global = true)]
    normalize: Option<Normalization>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the scenario described by a TOML config
    Run { config: PathBuf },
    /// Check a config and list every problem without running
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let path = match &cli.cmd {
        Cmd::Run { config } | Cmd::Validate { config } => config,
    };
    let mut cfg = match RunConfig::from_path(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    Overrides {
        output_dir: cli.output_dir.clone(),
        engine: cli.engine,
        normalize: cli.normalize,
    }
    .apply(&mut cfg);

    match cli.cmd {
        Cmd::Validate { .. } => {
            let diags = cfg.validate();
            if diags.is_empty() {
                println!("{}: ok ({})", path.display(), cfg.scenario.name());
                ExitCode::SUCCESS
            } else {
                for d in &diags {
                    eprintln!("{d}");
                }
                ExitCode::from(2)
            }
        }
        Cmd::Run { .. } => match run(&cfg) {
            Ok(report) => {
                for f in &report.files {
                    println!("{}", f.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
