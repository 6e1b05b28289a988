#![allow(dead_code)]

use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_subsetbench")
}

pub fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

pub fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args).env_remove("SUBSETBENCH_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

pub fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Score table from `(parser, treebank, value)` LAS rows.
pub fn las_table(rows: &[(&str, &str, f64)]) -> String {
    let mut s = String::from("parser\ttreebank\tmetric\tvalue\n");
    for (p, t, v) in rows {
        let _ = writeln!(s, "{p}\t{t}\tLAS\t{v}");
    }
    s
}

pub fn meta_table(rows: &[(&str, &str, &str, u64, bool)]) -> String {
    let mut s = String::from("treebank_id\tlanguage\tfamily\tsize_tokens\tlow_resource\n");
    for (id, lang, fam, size, lr) in rows {
        let _ = writeln!(s, "{id}\t{lang}\t{fam}\t{size}\t{lr}");
    }
    s
}

/// `n_parsers` parsers with distinct constant-ish scores over `n_tb`
/// treebanks; the last parser is strictly worst everywhere.
pub fn synthetic_scores(n_parsers: usize, n_tb: usize) -> String {
    let mut rows = Vec::new();
    for p in 0..n_parsers {
        for t in 0..n_tb {
            let v = if p + 1 == n_parsers {
                1.0
            } else {
                // Deterministic spread so that rankings vary across subsets.
                30.0 + ((p * 31 + t * 17 + p * t * 7) % 60) as f64 + p as f64 * 0.01
            };
            rows.push((format!("P{p:02}"), format!("tb{t:02}"), v));
        }
    }
    let refs: Vec<(&str, &str, f64)> = rows.iter().map(|(p, t, v)| (p.as_str(), t.as_str(), *v)).collect();
    las_table(&refs)
}

pub const GOLD_2: &str = "1\tHe\the\tPRON\t_\t_\t2\tnsubj\t_\t_\n2\truns\trun\tVERB\t_\t_\t0\troot\t_\t_\n\n";
