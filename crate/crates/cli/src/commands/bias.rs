use std::collections::BTreeMap;

use serde_json::{json, Value};
use subsetbench_core::bias::{find_extreme_subsets_par, ExtremeGroup};
use subsetbench_core::{bias_report, CompositionStats, ExtremeMode, MetricKind, Ranker, Sampler, Tag, TailMode};

use super::{check_universe, csv_bytes, load_meta, load_scores, out_dir, publish, sampler_config};
use crate::args::{BiasArgs, Tail};
use crate::config::{pick, require, Config};
use crate::error::{CliError, CliResult};
use crate::format::{fixed2, round2, sci5, sig5};
use crate::manifest::RunManifest;
use crate::output::{write_stdout, Bundle};

pub fn run(a: BiasArgs, config: &Config) -> CliResult<()> {
    let mut manifest = RunManifest::new("bias");
    let matrix = load_scores(&a.scores, config, &mut manifest)?;
    let meta = load_meta(&a.meta, config, &mut manifest)?.ok_or_else(|| CliError::Usage("--meta is required".into()))?;
    check_universe(&matrix, &meta)?;
    let parser = require(a.parser.clone(), config.parser.clone(), "parser")?;
    let tag_specs = if !a.tags.is_empty() {
        a.tags.clone()
    } else {
        config.tags.clone().unwrap_or_else(|| vec!["lr".into()])
    };
    let tags = tag_specs.iter().map(|t| t.parse::<Tag>()).collect::<Result<Vec<_>, _>>()?;
    for t in &tags {
        t.check_present(&meta)?;
    }
    let k = pick(a.k, config.k, 10);
    let metric = pick(a.metric, config.parsed("metric", &config.metric)?, MetricKind::Las);
    let tail = pick(a.tail, config.tail, Tail::Geq);
    manifest.set("parser", &parser);
    manifest.set("tags", tags.iter().map(Tag::to_string).collect::<Vec<_>>());
    manifest.set("k", k);
    manifest.set("metric", metric.name());
    manifest.set("tail", format!("{tail:?}").to_lowercase());
    let cfg = sampler_config(&a.sampling, config, matrix.treebanks().to_vec(), &mut manifest);
    let sampler = Sampler::new(cfg)?;

    let ranker = Ranker::new(&matrix, sampler.universe(), metric)?;
    let seed = sampler.seed();
    let best = find_extreme_subsets_par(&ranker, &sampler, &parser, ExtremeMode::Best, k, seed)?;
    let worst = find_extreme_subsets_par(&ranker, &sampler, &parser, ExtremeMode::Worst, k, seed)?;
    let tail_mode = match tail {
        Tail::Geq => TailMode::AtLeast,
        Tail::Gt => TailMode::Greater,
    };
    let report = bias_report::<f64>(&parser, &best, &worst, sampler.universe(), &meta, &tags, tail_mode)?;

    let labels: Vec<String> = tags.iter().map(|t| t.label().to_string()).collect();
    let mut header = ["parser", "group", "rank", "subsets", "avg_size"].map(String::from).to_vec();
    header.extend(labels.iter().map(|l| format!("R({l})")));
    let mut rows = Vec::new();
    for g in [&report.best, &report.worst] {
        let c = &g.composition;
        let mut row = vec![
            parser.clone(),
            c.label.clone(),
            g.rank.to_string(),
            c.num_subsets.to_string(),
            fixed2(c.avg_size_tokens),
        ];
        row.extend(c.ratios.iter().map(|(_, r)| fixed2(*r)));
        rows.push(row);
    }
    let summary = csv_bytes(&header, &rows)?;

    let Some(dir) = out_dir(&a.out_dir, config) else {
        return write_stdout(&summary);
    };

    let mut ex_header = ["group", "rank", "members"].map(String::from).to_vec();
    ex_header.extend(labels.iter().map(|l| format!("count({l})")));
    ex_header.extend(labels.iter().map(|l| format!("p({l})")));
    let mut ex_rows = Vec::new();
    for (name, g) in [("best", &report.best), ("worst", &report.worst)] {
        for e in &g.exemplars {
            let mut row = vec![name.to_string(), e.rank.to_string(), e.members.join(" ")];
            row.extend(e.counts.iter().map(|(_, c)| c.to_string()));
            row.extend(e.p_values.iter().map(|(_, p)| sci5(*p)));
            ex_rows.push(row);
        }
    }
    let exemplars = csv_bytes(&ex_header, &ex_rows)?;

    let population: BTreeMap<_, _> = report
        .params
        .iter()
        .map(|(t, p)| (t.clone(), json!({"N": p.population, "K": p.marked, "n": p.draws})))
        .collect();
    let deltas: BTreeMap<_, _> = report.ratio_deltas().into_iter().map(|(t, d)| (t, round2(d))).collect();
    let body = json!({
        "manifest": manifest.body(),
        "parser": parser,
        "metric": metric.name(),
        "tail": format!("{tail:?}").to_lowercase(),
        "population": population,
        "best": group_json(&report.best),
        "worst": group_json(&report.worst),
        "composition": {
            "best": composition_json(&report.best.composition),
            "worst": composition_json(&report.worst.composition),
            "delta": {"avg_size": round2(report.size_delta()), "R": deltas},
        },
    });

    let mut bundle = Bundle::new();
    bundle.add(dir.join("bias.csv"), summary);
    bundle.add(dir.join("exemplars.csv"), exemplars);
    bundle.add_json(dir.join("bias.json"), &body)?;
    publish(&dir, bundle, &manifest)
}

fn group_json(g: &ExtremeGroup<f64>) -> Value {
    let subsets: Vec<_> = g
        .exemplars
        .iter()
        .map(|e| {
            let counts: BTreeMap<_, _> = e.counts.iter().cloned().collect();
            let p_values: BTreeMap<_, _> = e.p_values.iter().map(|(t, p)| (t.clone(), sig5(*p))).collect();
            json!({"members": e.members, "rank": e.rank, "counts": counts, "p_values": p_values})
        })
        .collect();
    json!({"rank": g.rank, "subsets": subsets})
}

fn composition_json(c: &CompositionStats) -> Value {
    let ratios: BTreeMap<_, _> = c.ratios.iter().map(|(t, r)| (t.clone(), round2(*r))).collect();
    json!({"avg_size": round2(c.avg_size_tokens), "R": ratios})
}
