mod bias;
mod compare;
mod easy;
mod eval;
mod sample_ranks;

use std::path::{Path, PathBuf};

use subsetbench_core::sampler::{DEFAULT_NUM_SAMPLES, DEFAULT_SEED, DEFAULT_SUBSET_SIZE};
use subsetbench_core::{count_subsets, data, CodeMap, Metadata, MissingPolicy, SamplerConfig, ScoreMatrix, TableFormat};

use crate::args::{Cli, Command, CountArgs, SamplingArgs, ScoreArgs};
use crate::config::{pick, require, Config};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::output::{write_stdout, Bundle};

pub fn run(cli: Cli) -> CliResult<()> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Eval(a) => eval::run(a),
        Command::SampleRanks(a) => sample_ranks::run(a, &config),
        Command::Compare(a) => compare::run(a, &config),
        Command::Bias(a) => bias::run(a, &config),
        Command::EasySubset(a) => easy::run(a, &config),
        Command::Count(a) => count(a),
    }
}

fn count(a: CountArgs) -> CliResult<()> {
    let c = count_subsets(a.population, a.size)?;
    write_stdout(format!("{c}\n").as_bytes())
}

/// Load the score table named by flag or config, recording it in the manifest.
fn load_scores(a: &ScoreArgs, config: &Config, manifest: &mut RunManifest) -> CliResult<ScoreMatrix> {
    let path = require(a.scores.clone(), config.scores.clone(), "scores")?;
    let policy = pick(a.missing_policy, config.parsed("missing_policy", &config.missing_policy)?, MissingPolicy::Zero);
    let codes = a.codes.clone().or_else(|| config.codes.clone());
    let mut matrix = ScoreMatrix::load(&path, TableFormat::from_path(&path))?.with_missing_policy(policy);
    if let Some(codes) = &codes {
        matrix = matrix.canonicalize(&load_codes(codes)?)?;
    }
    manifest.set("scores", path.display().to_string());
    manifest.set("codes", &codes);
    manifest.set("missing_policy", policy.to_string());
    Ok(matrix)
}

fn load_codes(spec: &str) -> CliResult<CodeMap> {
    Ok(if spec == "builtin" {
        data::code_map()
    } else {
        CodeMap::load(spec)?
    })
}

fn load_meta(flag: &Option<String>, config: &Config, manifest: &mut RunManifest) -> CliResult<Option<Metadata>> {
    let Some(spec) = flag.clone().or_else(|| config.meta.clone()) else {
        return Ok(None);
    };
    manifest.set("meta", &spec);
    Ok(Some(if spec == "builtin" {
        data::metadata()
    } else {
        Metadata::load(&spec)?
    }))
}

/// Every scored treebank must have a metadata record.
fn check_universe(matrix: &ScoreMatrix, meta: &Metadata) -> CliResult<()> {
    match matrix.treebanks().iter().find(|t| meta.get(t).is_none()) {
        Some(t) => Err(CliError::Usage(format!("treebank `{t}` has no metadata record"))),
        None => Ok(()),
    }
}

fn sampler_config(
    a: &SamplingArgs,
    config: &Config,
    universe: Vec<String>,
    manifest: &mut RunManifest,
) -> SamplerConfig {
    let cfg = SamplerConfig {
        seed: pick(a.seed, config.seed, DEFAULT_SEED),
        num_samples: pick(a.samples, config.samples, DEFAULT_NUM_SAMPLES),
        subset_size: pick(a.subset_size, config.subset_size, DEFAULT_SUBSET_SIZE),
        universe,
        distinct: a.distinct || config.distinct.unwrap_or(false),
    };
    manifest.set("seed", cfg.seed);
    manifest.set("samples", cfg.num_samples);
    manifest.set("subset_size", cfg.subset_size);
    manifest.set("distinct", cfg.distinct);
    cfg
}

fn out_dir(flag: &Option<PathBuf>, config: &Config) -> Option<PathBuf> {
    flag.clone().or_else(|| config.out_dir.clone())
}

/// Write the bundle plus a timestamped `manifest.json` into `dir`.
fn publish(dir: &Path, mut bundle: Bundle, manifest: &RunManifest) -> CliResult<()> {
    bundle.add_json(dir.join("manifest.json"), &manifest.finished())?;
    bundle.commit()
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))
}
