use std::path::PathBuf;
use std::process::ExitCode;

use bpscan_cli::{
    cmd_anticoncentration, cmd_figure2, cmd_oracle, cmd_variance, cmd_warmstart, Config, Mode,
    Overrides, RunRecord, EXIT_CONFIG, EXIT_ORACLE,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bpscan",
    version,
    about = "Loss-landscape statistics for Clifford + Pauli-rotation circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Loss variance of each observable.
    Variance(Common),
    /// Pairwise discrete and continuous correlators.
    Anticoncentration(Common),
    /// Averaged variances and correlators over a range of qubit counts.
    Figure2(Common),
    /// Self-checks against independent references.
    Oracle(Common),
    /// Clifford-point warm-start search.
    Warmstart(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config file; unspecified fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated qubit counts for figure2.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// uniform, clifford or both.
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> anyhow::Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        Overrides {
            n: self.n,
            n_list: self.n_list.clone(),
            layers: self.layers,
            samples: self.samples,
            seed: self.seed,
            mode: self.mode,
            threads: self.threads,
        }
        .apply(&mut cfg);
        Ok(cfg)
    }
}

fn emit(rec: &RunRecord, out: &Option<PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => rec.write(path),
        None => {
            print!("{}", rec.to_csv());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    type Runner = fn(&Config) -> anyhow::Result<RunRecord>;
    let (common, runner): (&Common, Runner) = match &cli.command {
        Command::Variance(c) => (c, cmd_variance),
        Command::Anticoncentration(c) => (c, cmd_anticoncentration),
        Command::Figure2(c) => (c, cmd_figure2),
        Command::Warmstart(c) => (c, cmd_warmstart),
        Command::Oracle(c) => {
            let cfg = c.config()?;
            let report = cmd_oracle(&cfg)?;
            eprint!("{}", report.summary());
            emit(&report.to_record(&cfg), &c.out)?;
            return Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ORACLE as u8)
            });
        }
    };
    let cfg = common.config()?;
    emit(&runner(&cfg)?, &common.out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
