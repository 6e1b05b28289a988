use serde_json::json;
use subsetbench_core::ranking::{aggregate_sampler, QuartileConvention};
use subsetbench_core::{MetricKind, Sampler};

use super::{check_universe, csv_bytes, load_meta, load_scores, out_dir, publish, sampler_config};
use crate::args::{Quartiles, SampleRanksArgs};
use crate::config::{pick, Config};
use crate::error::CliResult;
use crate::format::{fixed2, round2};
use crate::manifest::RunManifest;
use crate::output::{write_stdout, Bundle};
use crate::svg;

pub fn run(a: SampleRanksArgs, config: &Config) -> CliResult<()> {
    let mut manifest = RunManifest::new("sample-ranks");
    let matrix = load_scores(&a.scores, config, &mut manifest)?;
    if let Some(meta) = load_meta(&a.meta, config, &mut manifest)? {
        check_universe(&matrix, &meta)?;
    }
    let metric = pick(a.metric, config.parsed("metric", &config.metric)?, MetricKind::Las);
    let quartiles = pick(a.quartiles, config.quartiles, Quartiles::Tukey);
    let convention = match quartiles {
        Quartiles::Tukey => QuartileConvention::TukeyHinges,
        Quartiles::Linear => QuartileConvention::Linear,
    };
    manifest.set("metric", metric.name());
    manifest.set("quartiles", format!("{quartiles:?}").to_lowercase());
    let cfg = sampler_config(&a.sampling, config, matrix.treebanks().to_vec(), &mut manifest);
    let sampler = Sampler::new(cfg)?;

    let dists = aggregate_sampler(&matrix, &sampler, metric, convention)?;

    let header = ["parser", "best", "worst", "mean", "median", "stddev"].map(String::from);
    let rows: Vec<Vec<String>> = dists
        .iter()
        .map(|d| {
            vec![
                d.parser.clone(),
                d.best.to_string(),
                d.worst.to_string(),
                fixed2(d.mean),
                fixed2(d.median),
                fixed2(d.stddev),
            ]
        })
        .collect();
    let summary = csv_bytes(&header, &rows)?;

    let Some(dir) = out_dir(&a.out_dir, config) else {
        return write_stdout(&summary);
    };
    let boxes: Vec<_> = dists.iter().map(|d| (d.parser.clone(), d.box_stats())).collect();
    let parsers: Vec<_> = dists
        .iter()
        .zip(&boxes)
        .map(|(d, (_, b))| {
            json!({
                "parser": d.parser,
                "q1": b.q1,
                "median": b.median,
                "q3": b.q3,
                "whisker_low": b.whisker_low,
                "whisker_high": b.whisker_high,
                "outliers": b.outliers,
                "best": d.best,
                "worst": d.worst,
                "mean": round2(d.mean),
                "stddev": round2(d.stddev),
                "histogram": d.histogram,
            })
        })
        .collect();
    let report = json!({
        "manifest": manifest.body(),
        "metric": metric.name(),
        "samples": sampler.num_samples(),
        "parsers": parsers,
    });

    let mut bundle = Bundle::new();
    bundle.add(dir.join("ranks.csv"), summary);
    bundle.add_json(dir.join("boxplot.json"), &report)?;
    let svg_wanted = a.svg || config.svg.unwrap_or(false);
    if svg_wanted {
        let title = format!("{} rank over {} subsets of size {}", metric, sampler.num_samples(), sampler.subset_size());
        bundle.add(dir.join("boxplot.svg"), svg::boxplot(&title, &boxes, dists.len()));
    }
    publish(&dir, bundle, &manifest)
}
