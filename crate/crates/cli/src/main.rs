use std::path::PathBuf;
use std::process::ExitCode;

use cedist_cli::{run, CliError, Command, Overrides, RunConfig};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cedist", version, about = "Quantum datasets with prescribed entanglement distributions")]
struct Cli {
    /// TOML config, or an artifact file whose embedded config should be reused.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Readout shots for sampling estimators (0 = analytic).
    #[arg(long, global = true)]
    shots: Option<usize>,
    /// Enable or disable the noise model.
    #[arg(long, global = true)]
    noise: Option<Switch>,
    /// Only print the final result line.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Cmd {
    /// Train a generator against the target and write a dataset.
    Generate,
    /// Simulate the soil-moisture and dark-matter sensor ensembles.
    Sensors,
    /// Cross-validate the quantum classifier on two soil datasets.
    Classify,
    /// Train every ansatz family on every target and rank them.
    Compare,
    /// Recompute the CE of every state in a dataset file.
    Ce { input: Option<PathBuf> },
    /// SWAP-test diversity scan of a dataset file.
    Swap { input: Option<PathBuf> },
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            RunConfig::parse(&text).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("{}: {m}", p.display())),
                other => other,
            })?
        }
        None => RunConfig::default(),
    };
    Overrides {
        seed: cli.seed,
        shots: cli.shots,
        noise: cli.noise.map(|s| matches!(s, Switch::On)),
    }
    .apply(&mut config);
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match &cli.command {
        Cmd::Generate => Command::Generate,
        Cmd::Sensors => Command::Sensors,
        Cmd::Classify => Command::Classify,
        Cmd::Compare => Command::Compare,
        Cmd::Ce { input } => Command::Ce { input: input.clone() },
        Cmd::Swap { input } => Command::Swap { input: input.clone() },
    };
    let result = load(&cli).and_then(|config| run(&command, &config, &cli.out, cli.quiet));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
