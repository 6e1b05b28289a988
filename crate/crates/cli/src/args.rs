use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use subsetbench_core::{MetricKind, MissingPolicy};

/// Subset fragility analysis for dependency parser rankings.
#[derive(Debug, Parser)]
#[command(name = "subsetbench", version, about)]
pub struct Cli {
    /// TOML file supplying defaults for any flag; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a system CoNLL-U file against gold.
    Eval(EvalArgs),
    /// Rank distributions of every parser over random treebank subsets.
    SampleRanks(SampleRanksArgs),
    /// Error reduction between two parsers on fixed subsets.
    Compare(CompareArgs),
    /// Composition of the subsets where a parser ranks best and worst.
    Bias(BiasArgs),
    /// Build the high-scoring subset with one treebank per language.
    EasySubset(EasyArgs),
    /// Exact number of size-n subsets of N treebanks.
    Count(CountArgs),
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Score table (TSV or CSV with parser, treebank, metric, value columns).
    #[arg(long, value_name = "FILE")]
    pub scores: Option<PathBuf>,

    /// Code map (`builtin` or a TSV file) applied to treebank ids.
    #[arg(long, value_name = "FILE|builtin")]
    pub codes: Option<String>,

    /// Handling of absent cells.
    #[arg(long, value_name = "zero|error|skip")]
    pub missing_policy: Option<MissingPolicy>,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    #[arg(long)]
    pub seed: Option<u64>,

    /// Number of random subsets.
    #[arg(long)]
    pub samples: Option<u64>,

    #[arg(long)]
    pub subset_size: Option<usize>,

    /// Never emit the same combination twice.
    #[arg(long)]
    pub distinct: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_name = "FILE")]
    pub gold: PathBuf,

    #[arg(long, value_name = "FILE")]
    pub system: PathBuf,

    /// Comma-separated metrics; all five by default.
    #[arg(long, value_delimiter = ',')]
    pub metrics: Vec<MetricKind>,

    /// Report path; printed to stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Add the scores as rows of this score table (created if absent).
    #[arg(long, value_name = "FILE", requires_all = ["parser", "treebank"])]
    pub record: Option<PathBuf>,

    #[arg(long)]
    pub parser: Option<String>,

    #[arg(long)]
    pub treebank: Option<String>,
}

#[derive(Debug, Args)]
pub struct SampleRanksArgs {
    #[command(flatten)]
    pub scores: ScoreArgs,

    /// Treebank metadata; every scored treebank must be listed.
    #[arg(long, value_name = "FILE|builtin")]
    pub meta: Option<String>,

    #[command(flatten)]
    pub sampling: SamplingArgs,

    #[arg(long)]
    pub metric: Option<MetricKind>,

    #[arg(long, value_enum)]
    pub quartiles: Option<Quartiles>,

    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    /// Also write an SVG box plot.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub scores: ScoreArgs,

    /// Subset file or bundled subset name; repeatable.
    #[arg(long = "subset", value_name = "FILE|NAME")]
    pub subsets: Vec<String>,

    #[arg(long)]
    pub reference: Option<String>,

    #[arg(long)]
    pub compared: Option<String>,

    /// Repeatable; LAS by default.
    #[arg(long = "metric")]
    pub metrics: Vec<MetricKind>,

    /// Writes compare.csv, compare.json and manifest.json; CSV goes to
    /// stdout when omitted.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BiasArgs {
    #[command(flatten)]
    pub scores: ScoreArgs,

    #[arg(long, value_name = "FILE|builtin")]
    pub meta: Option<String>,

    #[arg(long)]
    pub parser: Option<String>,

    /// `lr`, `family=<name>` or `language=<name>`; repeatable.
    #[arg(long = "tag")]
    pub tags: Vec<String>,

    /// Exemplars per extreme.
    #[arg(long)]
    pub k: Option<usize>,

    #[command(flatten)]
    pub sampling: SamplingArgs,

    #[arg(long)]
    pub metric: Option<MetricKind>,

    #[arg(long, value_enum)]
    pub tail: Option<Tail>,

    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EasyArgs {
    #[command(flatten)]
    pub scores: ScoreArgs,

    #[arg(long, value_name = "FILE|builtin")]
    pub meta: Option<String>,

    #[arg(long)]
    pub n: Option<usize>,

    /// Rank treebanks by this parser's LAS instead of the best parser's.
    #[arg(long)]
    pub reference_parser: Option<String>,

    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    pub population: usize,
    pub size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quartiles {
    Tukey,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// P(X >= observed)
    Geq,
    /// P(X > observed)
    Gt,
}
