use serde_json::{Map, Value};
use subsetbench_core::conllu::score_pair;
use subsetbench_core::{MetricConfig, MetricKind, MissingPolicy, ScoreMatrix, TableFormat};

use crate::args::EvalArgs;
use crate::error::CliResult;
use crate::manifest::RunManifest;
use crate::output::{to_json, write_stdout, Bundle};

pub fn run(a: EvalArgs) -> CliResult<()> {
    let metrics = if a.metrics.is_empty() {
        MetricKind::ALL.to_vec()
    } else {
        a.metrics.clone()
    };
    let mut manifest = RunManifest::new("eval");
    manifest.set("gold", a.gold.display().to_string());
    manifest.set("system", a.system.display().to_string());
    manifest.set("metrics", metrics.iter().map(|m| m.name()).collect::<Vec<_>>());

    let results = score_pair(&a.gold, &a.system, &metrics, &MetricConfig::default())?;
    let mut body = Map::new();
    for r in results.values() {
        body.insert(r.label().to_string(), serde_json::to_value(r).map_err(subsetbench_core::Error::from)?);
    }
    body.insert("manifest".into(), serde_json::to_value(manifest.body()).map_err(subsetbench_core::Error::from)?);
    let report = to_json(&Value::Object(body))?;

    let mut bundle = Bundle::new();
    if let Some(table) = &a.record {
        let (parser, treebank) = (a.parser.as_deref().unwrap(), a.treebank.as_deref().unwrap());
        let format = TableFormat::from_path(table);
        let mut matrix = if table.exists() {
            ScoreMatrix::load(table, format)?
        } else {
            ScoreMatrix::new(MissingPolicy::default())
        };
        for r in results.values() {
            matrix.insert(parser, treebank, r.metric, r.score())?;
        }
        let mut buf = Vec::new();
        matrix.write(&mut buf, format)?;
        bundle.add(table, buf);
    }
    match &a.out {
        Some(out) => {
            bundle.add(out, report);
            bundle.commit()
        }
        None => {
            bundle.commit()?;
            write_stdout(&report)
        }
    }
}
