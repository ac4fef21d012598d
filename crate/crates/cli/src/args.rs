use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qldpc::DecoderKind;

#[derive(Debug, Parser)]
#[command(
    name = "qldpc",
    version,
    about = "Syndrome-based min-sum / LP decoding of quantum LDPC codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Code construction.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Decode syndromes (or the syndromes of given errors) read from a file.
    Decode(DecodeArgs),
    /// Monte-Carlo sweep over decoders and depolarizing probabilities.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
pub enum CodeCommand {
    /// Build a CSS code, write its H_X/H_Z alists and a JSON manifest.
    Build(BuildArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("construction").required(true).args(["hgp_ring", "hgp", "gb_ell", "hx", "benchmark"])))]
pub struct BuildArgs {
    /// Hypergraph product of two cyclic repetition codes of the given lengths.
    #[arg(long, num_args = 2, value_names = ["ELL1", "ELL2"])]
    pub hgp_ring: Option<Vec<usize>>,
    /// Hypergraph product of two classical codes given as alist files.
    #[arg(long, num_args = 2, value_names = ["H1", "H2"])]
    pub hgp: Option<Vec<PathBuf>>,
    /// Exponents of the circulant polynomial a(x) of a generalized bicycle code.
    #[arg(long, value_delimiter = ',', requires = "gb_ell")]
    pub gb_a: Vec<usize>,
    /// Exponents of the circulant polynomial b(x) of a generalized bicycle code.
    #[arg(long, value_delimiter = ',', requires = "gb_ell")]
    pub gb_b: Vec<usize>,
    /// Circulant size of a generalized bicycle code.
    #[arg(long, requires_all = ["gb_a", "gb_b"])]
    pub gb_ell: Option<usize>,
    /// H_X as an alist file (together with --hz).
    #[arg(long, requires = "hz")]
    pub hx: Option<PathBuf>,
    /// H_Z as an alist file (together with --hx).
    #[arg(long, requires = "hx")]
    pub hz: Option<PathBuf>,
    /// Built-in benchmark code (b1).
    #[arg(long)]
    pub benchmark: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Code name recorded in the manifest.
    #[arg(long)]
    pub name: Option<String>,
}

/// Decoder parameters shared by `decode` and `sweep`; unset values fall back
/// to the reference parameters of each decoder.
#[derive(Debug, Args, Clone, Default)]
pub struct DecoderArgs {
    /// Min-sum scaling factor in (0, 1] (default 0.75).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// LP scaling factor in (0, 1] (default 0.9).
    #[arg(long)]
    pub alpha1: Option<f64>,
    /// Min-sum iteration budget (default 100, or 25 inside the combined decoder).
    #[arg(long)]
    pub ims_max: Option<usize>,
    /// LP iteration budget (default 100, or 75 inside the combined decoder).
    #[arg(long)]
    pub ilp_max: Option<usize>,
    /// Run the combined decoder without the early-stopping rule.
    #[arg(long)]
    pub no_early_stop: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["syndrome_file", "error_file"])))]
pub struct DecodeArgs {
    /// Code manifest (JSON).
    #[arg(long)]
    pub code: PathBuf,
    /// One syndrome bit string per line.
    #[arg(long)]
    pub syndrome_file: Option<PathBuf>,
    /// One X-error bit string per line; the syndrome is computed and the result classified.
    #[arg(long)]
    pub error_file: Option<PathBuf>,
    /// sb-ms, sb-lp, combined or combined-no-early-stop.
    #[arg(long, default_value = "combined")]
    pub decoder: DecoderKind,
    /// Depolarizing probability used for the prior.
    #[arg(long, default_value_t = 0.05)]
    pub p: f64,
    /// Include the per-iteration unmatched-syndrome trace.
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    pub decoder_args: DecoderArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Run configuration (JSON); command-line flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Code manifest (JSON).
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Decoders, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub decoder: Vec<DecoderKind>,
    /// A single depolarizing probability.
    #[arg(long, conflicts_with = "p_list")]
    pub p: Option<f64>,
    /// Depolarizing probabilities, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p_list: Vec<f64>,
    /// Master seed (default 1).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Stop a point after this many logical errors.
    #[arg(long)]
    pub target_errors: Option<u64>,
    /// Stop a point after this many trials.
    #[arg(long)]
    pub max_trials: Option<u64>,
    /// CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run manifest path (default: the CSV path with a `.json` extension).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Per-trial trace output (JSON lines).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Number of traced trials per point.
    #[arg(long)]
    pub trace_trials: Option<u64>,
    /// Tally non-converged trials separately instead of as logical errors.
    #[arg(long)]
    pub separate_nonconvergence: bool,
    /// Continue from the checkpoint left by an interrupted run.
    #[arg(long)]
    pub resume: bool,
    #[command(flatten)]
    pub decoder_args: DecoderArgs,
}
