use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pwe::scenario::{parse_config_with_overrides, run_scenario, ConfigError, Method, RunError};

#[derive(Parser)]
#[command(name = "pwe", version, about = "Split-step Padé parabolic-equation solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its outputs.
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the method set in the file.
        #[arg(long, value_parser = ["sssp", "fdssp", "modes"])]
        method: Option<String>,
        /// `key=value`, may be repeated.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn run(config: PathBuf, out: PathBuf, method: Option<String>, mut overrides: Vec<String>) -> Result<(), RunError> {
    let text = std::fs::read_to_string(&config).map_err(|e| {
        ConfigError::Validation(vec![format!("cannot read {}: {e}", config.display())])
    })?;
    if let Some(m) = method {
        let m: Method = m.parse().expect("restricted by clap");
        overrides.push(format!("method={}", m.as_str()));
    }
    let cfg = parse_config_with_overrides(&text, &overrides)?;
    let manifest = run_scenario(&cfg, &out)?;
    for f in &manifest.files {
        println!("{}\t{} bytes", out.join(&f.path).display(), f.bytes);
    }
    eprintln!("done in {:.2} s", manifest.wall_time.as_secs_f64());
    Ok(())
}

fn main() -> ExitCode {
    let Cli { command: Command::Run { config, out, method, overrides } } = Cli::parse();
    match run(config, out, method, overrides) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pwe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
