use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kdvb::cli::{parse_config, run, sweep_lambda};
use kdvb::Error;

/// Extended cubic B-spline collocation solver for the KdV-Burgers equation.
#[derive(Parser)]
#[command(name = "kdvb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Solve {
        /// Path to a line-oriented key=value config file.
        config: PathBuf,
        /// Write outputs here instead of the config's output_dir.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run the scenario once per extension parameter and tabulate the results.
    Sweep {
        /// Path to a line-oriented key=value config file.
        config: PathBuf,
        /// Comma-separated extension parameters, e.g. `--lambda 0,-1,-0.5`.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        lambda: Vec<f64>,
        /// Write outputs here instead of the config's output_dir.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

fn load_config(path: &PathBuf, output_dir: Option<PathBuf>) -> Result<kdvb::cli::RunConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(dir) = output_dir {
        cfg.output_dir = dir;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve { config, output_dir } => load_config(&config, output_dir).and_then(|cfg| {
            let report = run(&cfg)?;
            for line in &report.summary_lines {
                println!("{line}");
            }
            println!("wrote {} files to {}", report.files.len(), cfg.output_dir.display());
            Ok(())
        }),
        Command::Sweep {
            config,
            lambda,
            output_dir,
        } => load_config(&config, output_dir).and_then(|cfg| {
            let (reports, csv) = sweep_lambda(&cfg, &lambda)?;
            for report in &reports {
                for line in &report.summary_lines {
                    println!("{line}");
                }
            }
            println!("wrote comparison table {}", csv.display());
            Ok(())
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
