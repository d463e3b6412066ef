//! `ndude`: simulate, denoise, sweep and evaluate discrete denoisers.

mod commands;
mod data;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ndude_core::{Architecture, TrainConfig};

use spec::{ChannelSpec, SourceSpec};

#[derive(Parser, Debug)]
#[command(
    name = "ndude",
    version,
    about = "Discrete universal denoising with DUDE and Neural DUDE"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a clean sequence (or take an image) and pass it through a channel.
    Simulate(SimulateArgs),
    /// Denoise one sequence with a fixed window or the clairvoyant baseline.
    Denoise(DenoiseArgs),
    /// Fit a denoiser for a range of window sizes and pick k* by estimated loss.
    Sweep(SweepArgs),
    /// Compare a reconstruction with the clean sequence.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("clean_source").required(true).args(["source", "image", "input"])))]
struct SimulateArgs {
    /// Markov source, `bsmc:<alpha>` or a model file with a transition matrix.
    #[arg(long)]
    source: Option<SourceSpec>,
    /// Clean binary image to corrupt.
    #[arg(long)]
    image: Option<PathBuf>,
    /// Clean sequence file to corrupt.
    #[arg(long)]
    input: Option<PathBuf>,
    /// `bsc:<delta>` or a JSON model file.
    #[arg(long)]
    channel: ChannelSpec,
    /// Length of the generated sequence.
    #[arg(long, required_unless_present_any(["image", "input"]), requires = "source")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noisy output.
    #[arg(long)]
    output: PathBuf,
    /// Where to write the generated clean sequence.
    #[arg(long)]
    clean_out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DenoiseMethod {
    Dude,
    Ndude,
    Fb,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SweepMethod {
    Dude,
    Ndude,
}

#[derive(Args, Debug, Clone)]
struct TrainArgs {
    /// Hidden layers, e.g. `40-40-40`, `4x40` or `linear`.
    #[arg(long, default_value = "40-40-40")]
    arch: Architecture,
    #[arg(long, default_value_t = 10)]
    epochs: usize,
    #[arg(long, default_value_t = 100)]
    batch: usize,
    #[arg(long, default_value_t = 0.001)]
    lr: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl TrainArgs {
    fn config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            batch_size: self.batch,
            learning_rate: self.lr,
            seed: self.seed,
            ..TrainConfig::default()
        }
    }
}

#[derive(Args, Debug)]
struct DenoiseArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    channel: ChannelSpec,
    #[arg(long, value_enum)]
    method: DenoiseMethod,
    /// Window half-width.
    #[arg(long, required_if_eq_any([("method", "dude"), ("method", "ndude")]))]
    k: Option<usize>,
    /// Source model for `fb`; defaults to the transition matrix of the model file.
    #[arg(long)]
    source: Option<SourceSpec>,
    #[command(flatten)]
    train: TrainArgs,
    /// Clean sequence, enables the true error rate.
    #[arg(long)]
    clean: Option<PathBuf>,
    #[arg(long)]
    output: PathBuf,
    /// CSV report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// JSON summary.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Save the trained network (`ndude` only).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Leave wall-clock times out of the outputs.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("noisy").required(true).args(["input", "image"])))]
#[command(group(ArgGroup::new("window").required(true).args(["kmax", "k"])))]
struct SweepArgs {
    /// Noisy sequence.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Clean binary image; it is corrupted with the channel first.
    #[arg(long, conflicts_with = "clean")]
    image: Option<PathBuf>,
    #[arg(long)]
    channel: ChannelSpec,
    #[arg(long, value_enum)]
    method: SweepMethod,
    /// Sweep k = 1..=kmax.
    #[arg(long)]
    kmax: Option<usize>,
    /// Explicit window sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    #[command(flatten)]
    train: TrainArgs,
    #[arg(long)]
    clean: Option<PathBuf>,
    /// Reconstruction at k*.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Where to save the corrupted image (`--image` only).
    #[arg(long, requires = "image")]
    noisy_out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    clean: PathBuf,
    /// Reconstruction (or noisy sequence) to score.
    #[arg(long)]
    input: PathBuf,
    /// Supplies the alphabet and loss.
    #[arg(long)]
    channel: ChannelSpec,
    #[arg(long)]
    summary: Option<PathBuf>,
}

/// Problems with the invocation that clap cannot see.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    let numerical = err
        .chain()
        .filter_map(|e| e.downcast_ref::<ndude_core::Error>())
        .any(ndude_core::Error::is_numerical);
    if numerical {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Denoise(a) => commands::denoise(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Eval(a) => commands::eval(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
