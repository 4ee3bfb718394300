use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use langev::commands::{cmd_cluster, cmd_fit, cmd_run, cmd_sweep};
use langev::config::{parse_config, RunConfig};
use langev::{Error, Result};

/// Language-evolution simulator and analysis toolkit.
#[derive(Parser)]
#[command(name = "langev", version, about)]
struct Cli {
    /// Configuration file (flat `key = value` lines, `#` comments).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Base RNG seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory; overrides the config file.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Realizations per sweep cell; overrides the config file.
    #[arg(long, global = true)]
    realizations: Option<usize>,

    /// Generations per realization; overrides the config file.
    #[arg(long, global = true)]
    generations: Option<usize>,

    /// Override any config key, e.g. `--set r=0.1` (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one realization and record its trajectory and communities.
    Run,
    /// Run the configured (model, N, r) sweep and write the summary table.
    Sweep,
    /// Find optimum language communities in a stored comprehension matrix.
    Cluster {
        /// Cache file: `N=<n>` header plus an NxN comma-separated F matrix.
        cache: PathBuf,
    },
    /// Fit the community-count power law per (model, N) of a sweep table.
    Fit {
        /// A sweep.csv produced by the sweep subcommand.
        summary: PathBuf,
    },
}

fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => parse_config(&fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    for pair in &cli.set {
        let (key, value) = pair.split_once('=').ok_or_else(|| Error::Config {
            key: pair.clone(),
            reason: "expected KEY=VALUE with an equals sign".to_string(),
        })?;
        config.apply(key.trim(), value.trim())?;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out_dir) = &cli.out_dir {
        config.out_dir = out_dir.clone();
    }
    if let Some(realizations) = cli.realizations {
        config.realizations = realizations;
    }
    if let Some(generations) = cli.generations {
        config.generations = generations;
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<()> {
    let config = effective_config(cli)?;
    match &cli.command {
        Command::Run => cmd_run(&config),
        Command::Sweep => cmd_sweep(&config),
        Command::Cluster { cache } => cmd_cluster(cache, &config),
        Command::Fit { summary } => cmd_fit(summary, &config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
