use serde_json::json;
use subsetbench_core::comparison::build_easy_subset;
use subsetbench_core::EasyReference;

use super::{load_meta, load_scores};
use crate::args::EasyArgs;
use crate::config::{pick, Config};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::output::{to_json, write_stdout, Bundle};

pub fn run(a: EasyArgs, config: &Config) -> CliResult<()> {
    let mut manifest = RunManifest::new("easy-subset");
    let matrix = load_scores(&a.scores, config, &mut manifest)?;
    let meta = load_meta(&a.meta, config, &mut manifest)?.ok_or_else(|| CliError::Usage("--meta is required".into()))?;
    let n = pick(a.n, config.n, 10);
    let reference = match a.reference_parser.clone().or_else(|| config.reference_parser.clone()) {
        Some(p) => EasyReference::Parser(p),
        None => EasyReference::BestParser,
    };
    manifest.set("n", n);
    manifest.set(
        "reference_parser",
        match &reference {
            EasyReference::Parser(p) => Some(p.as_str()),
            EasyReference::BestParser => None,
        },
    );
    let subset = build_easy_subset(&matrix, &meta, n, &reference)?;
    let report = to_json(&json!({
        "name": subset.name,
        "members": subset.members,
        "manifest": manifest.body(),
    }))?;
    match &a.out {
        Some(path) => {
            let mut bundle = Bundle::new();
            bundle.add(path, report);
            bundle.commit()
        }
        None => write_stdout(&report),
    }
}
