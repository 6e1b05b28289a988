//! Measuring how fragile dependency-parser rankings are under the choice of
//! treebank subset.
//!
//! The crate covers the full pipeline: attachment scores from CoNLL-U files
//! ([`conllu`]), score tables and subset definitions ([`model`]),
//! reproducible subset sampling ([`sampler`]), rank distributions
//! ([`ranking`]), error-reduction comparisons ([`comparison`]) and
//! composition-bias probes with exact hypergeometric tails ([`bias`],
//! [`hypergeom`]).
//!
//! Score-carrying types are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the usual `f64` choice.

pub mod bias;
pub mod comparison;
pub mod conllu;
pub mod data;
pub mod error;
pub mod hypergeom;
pub mod model;
pub mod ranking;
pub mod sampler;
pub mod scalar;

pub use bias::{bias_report, composition, find_extreme_subsets, Exemplar, ExtremeMode, Tag};
pub use comparison::{build_easy_subset, error_reduction, error_reduction_subset, EasyReference};
pub use conllu::{parse_conllu, score_pair, MetricConfig, MetricResult};
pub use error::{Error, Result};
pub use hypergeom::{hypergeom_pmf, hypergeom_tail_geq, hypergeom_tail_gt, HypergeomParams, TailMode};
pub use model::{CodeMap, Metadata, MetricKind, MissingPolicy, SubsetDef, TableFormat, TreebankMeta};
pub use ranking::{aggregate, aggregate_sampler, rank_on_subset, QuartileConvention, Ranker};
pub use sampler::{count_subsets, Sampler, SamplerConfig, SubsetSample};
pub use scalar::Scalar;

/// Exact probability as a ratio of big integers.
pub type ExactProbability = num_rational::BigRational;

pub type ScoreMatrix = model::ScoreMatrix<f64>;
pub type ScoreMatrix32 = model::ScoreMatrix<f32>;
pub type RankDistribution = ranking::RankDistribution<f64>;
pub type BoxStats = ranking::BoxStats<f64>;
pub type ErrorReductionReport = comparison::ErrorReductionReport<f64>;
pub type CompositionStats = bias::CompositionStats<f64>;
pub type OutlierReport = bias::OutlierReport<f64>;
