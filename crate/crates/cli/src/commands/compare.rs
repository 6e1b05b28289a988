use std::collections::BTreeMap;
use std::path::Path;

use serde_json::json;
use subsetbench_core::comparison::error_reduction_subset;
use subsetbench_core::{data, MetricKind, SubsetDef};

use super::{csv_bytes, load_scores, out_dir, publish};
use crate::args::CompareArgs;
use crate::config::{require, Config};
use crate::error::{CliError, CliResult};
use crate::format::{fixed2, round2};
use crate::manifest::RunManifest;
use crate::output::{write_stdout, Bundle};

/// A path when it exists, otherwise a bundled subset name.
fn resolve_subset(spec: &str) -> CliResult<SubsetDef> {
    if Path::new(spec).exists() {
        Ok(SubsetDef::load(spec)?)
    } else {
        data::subset(spec).map_err(|_| CliError::Usage(format!("`{spec}` is neither a file nor a bundled subset")))
    }
}

pub fn run(a: CompareArgs, config: &Config) -> CliResult<()> {
    let mut manifest = RunManifest::new("compare");
    let matrix = load_scores(&a.scores, config, &mut manifest)?;
    let reference = require(a.reference.clone(), config.reference.clone(), "reference")?;
    let compared = require(a.compared.clone(), config.compared.clone(), "compared")?;
    let subset_specs = if a.subsets.is_empty() {
        config.subsets.clone().unwrap_or_default()
    } else {
        a.subsets.clone()
    };
    if subset_specs.is_empty() {
        return Err(CliError::Usage("--subset is required".into()));
    }
    let metrics = if !a.metrics.is_empty() {
        a.metrics.clone()
    } else if let Some(names) = &config.metrics {
        names
            .iter()
            .map(|m| m.parse())
            .collect::<Result<Vec<MetricKind>, _>>()?
    } else {
        vec![MetricKind::Las]
    };
    manifest.set("reference", &reference);
    manifest.set("compared", &compared);
    manifest.set("subsets", &subset_specs);
    manifest.set("metrics", metrics.iter().map(|m| m.name()).collect::<Vec<_>>());

    let subsets = subset_specs.iter().map(|s| resolve_subset(s)).collect::<CliResult<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for subset in &subsets {
        for &metric in &metrics {
            let r = error_reduction_subset(&matrix, &reference, &compared, subset, metric)?;
            rows.push(vec![
                subset.name.clone(),
                metric.name().to_string(),
                reference.clone(),
                compared.clone(),
                r.per_treebank.len().to_string(),
                fixed2(r.reference_average),
                fixed2(r.compared_average),
                fixed2(r.mean_e),
                fixed2(r.e_of_means),
                r.sign_reversal().to_string(),
            ]);
            let per_treebank: BTreeMap<_, _> = r.per_treebank.iter().map(|(t, e)| (t.clone(), round2(e * 100.0))).collect();
            reports.push(json!({
                "subset": subset.name,
                "metric": metric.name(),
                "members": subset.members,
                "reference_average": round2(r.reference_average),
                "compared_average": round2(r.compared_average),
                "macro_gap": round2(r.macro_gap()),
                "E": round2(r.mean_e),
                "E_of_means": round2(r.e_of_means),
                "sign_reversal": r.sign_reversal(),
                "per_treebank_E": per_treebank,
                "skipped": r.skipped,
            }));
        }
    }
    let header = [
        "subset",
        "metric",
        "reference",
        "compared",
        "treebanks",
        "reference_avg",
        "compared_avg",
        "E",
        "E_of_means",
        "sign_reversal",
    ]
    .map(String::from);
    let table = csv_bytes(&header, &rows)?;

    let Some(dir) = out_dir(&a.out_dir, config) else {
        return write_stdout(&table);
    };
    let report = json!({
        "manifest": manifest.body(),
        "reference": reference,
        "compared": compared,
        "comparisons": reports,
    });
    let mut bundle = Bundle::new();
    bundle.add(dir.join("compare.csv"), table);
    bundle.add_json(dir.join("compare.json"), &report)?;
    publish(&dir, bundle, &manifest)
}
