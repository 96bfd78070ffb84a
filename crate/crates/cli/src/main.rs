use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use longwave_cli::{run, Experiment, ExperimentConfig, RunError};

#[derive(Parser)]
#[command(name = "longwave", version, about = "Run the longwave experiments from TOML configs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its tables, plots and manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `output_dir` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for eps ladders.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the known experiment names.
    ListExperiments,
    /// Check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Io { path: path.clone(), source })?;
    Ok(ExperimentConfig::from_toml_str(&text)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListExperiments => {
            for e in Experiment::ALL {
                println!("{:<18} {}", e.name(), e.summary());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(&config) {
            Ok(cfg) => {
                println!("{}: ok ({}, config hash {})", config.display(), cfg.experiment, cfg.hash());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        Command::Run { config, out, jobs } => {
            let cfg = match load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out").join(cfg.experiment.name()));
            match run(&cfg, &dir, jobs) {
                Ok(m) => {
                    for c in &m.checks {
                        println!("{}", c.describe());
                    }
                    println!("{} artifacts in {} ({:.1} s)", m.artifacts.len(), dir.display(), m.wall_clock_seconds);
                    if m.passed {
                        println!("{}: PASS", cfg.experiment);
                        ExitCode::SUCCESS
                    } else {
                        println!("{}: FAIL", cfg.experiment);
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
