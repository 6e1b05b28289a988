//! CoNLL-U reading and attachment scores for gold/system pairs that share
//! tokenization.
//!
//! Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are dropped on
//! read, so sentences are plain word sequences indexed `1..=n`. Gold and
//! system sentences are aligned one-to-one by position and must agree on
//! every word form.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::MetricKind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub feats: BTreeMap<String, String>,
    pub head: usize,
    pub deprel: String,
}

pub type Sentence = Vec<Word>;

pub fn parse_conllu(path: impl AsRef<Path>) -> Result<Vec<Sentence>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_conllu(file)
}

pub fn read_conllu<R: Read>(reader: R) -> Result<Vec<Sentence>> {
    let mut sentences = Vec::new();
    let mut current: Vec<Word> = Vec::new();
    let mut lines_of: Vec<usize> = Vec::new();

    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io("<conllu>", e))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.is_empty() {
                check_heads(&current, &lines_of)?;
                sentences.push(std::mem::take(&mut current));
                lines_of.clear();
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(conllu_err(lineno, format!("expected 10 columns, found {}", cols.len())));
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let index: usize = id
            .parse()
            .map_err(|_| conllu_err(lineno, format!("invalid word id `{id}`")))?;
        if index != current.len() + 1 {
            return Err(conllu_err(
                lineno,
                format!("non-consecutive word id {index}, expected {}", current.len() + 1),
            ));
        }
        let head: usize = cols[6]
            .parse()
            .map_err(|_| conllu_err(lineno, format!("non-integer head `{}`", cols[6])))?;
        current.push(Word {
            index,
            form: cols[1].to_string(),
            lemma: cols[2].to_string(),
            upos: cols[3].to_string(),
            feats: parse_feats(cols[5]).map_err(|m| conllu_err(lineno, m))?,
            head,
            deprel: cols[7].to_string(),
        });
        lines_of.push(lineno);
    }
    if !current.is_empty() {
        check_heads(&current, &lines_of)?;
        sentences.push(current);
    }
    Ok(sentences)
}

fn conllu_err(line: usize, message: String) -> Error {
    Error::Conllu { line, message }
}

fn check_heads(words: &[Word], lines: &[usize]) -> Result<()> {
    let n = words.len();
    for (w, &line) in words.iter().zip(lines) {
        if w.head > n {
            return Err(conllu_err(line, format!("head {} out of range for sentence of length {n}", w.head)));
        }
        if w.head == w.index {
            return Err(conllu_err(line, format!("word {} is its own head", w.index)));
        }
    }
    Ok(())
}

fn parse_feats(raw: &str) -> std::result::Result<BTreeMap<String, String>, String> {
    if raw == "_" || raw.is_empty() {
        return Ok(BTreeMap::new());
    }
    raw.split('|')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| format!("malformed feature `{kv}`"))
        })
        .collect()
}

/// Lowercased relation with any `:subtype` removed.
pub fn base_relation(deprel: &str) -> String {
    deprel.split(':').next().unwrap_or("").to_ascii_lowercase()
}

/// Relation and feature sets the content-word metrics depend on.
#[derive(Clone, Debug)]
pub struct MetricConfig {
    /// Relations attaching function words; together with `punct` these
    /// are excluded from CLAS, MLAS and BLEX.
    pub functional: BTreeSet<String>,
    /// Features compared by MLAS; others are ignored.
    pub feature_whitelist: BTreeSet<String>,
}

impl Default for MetricConfig {
    fn default() -> Self {
        let functional = ["aux", "case", "cc", "clf", "cop", "det", "mark"];
        let features = [
            "PronType", "NumType", "Poss", "Reflex", "Foreign", "Abbr", "Gender", "Animacy", "Number",
            "Case", "Definite", "Degree", "VerbForm", "Mood", "Tense", "Aspect", "Voice", "Evident",
            "Polarity", "Person", "Polite",
        ];
        MetricConfig {
            functional: functional.iter().map(|s| s.to_string()).collect(),
            feature_whitelist: features.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl MetricConfig {
    pub fn is_content(&self, gold_deprel: &str) -> bool {
        let rel = base_relation(gold_deprel);
        rel != "punct" && !self.functional.contains(&rel)
    }

    fn feats_match(&self, gold: &BTreeMap<String, String>, system: &BTreeMap<String, String>) -> bool {
        let keep = |m: &BTreeMap<String, String>| -> Vec<(String, String)> {
            m.iter()
                .filter(|(k, _)| self.feature_whitelist.contains(k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect()
        };
        keep(gold) == keep(system)
    }
}

/// Count-based score for one metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricResult {
    pub metric: MetricKind,
    pub correct: u64,
    pub total: u64,
}

impl MetricResult {
    /// Percentage, 0 when nothing was counted.
    pub fn score(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * self.correct as f64 / self.total as f64
        }
    }

    /// Report label; MLAS is the word-level simplification.
    pub fn label(&self) -> &'static str {
        match self.metric {
            MetricKind::Mlas => "MLAS-word",
            m => m.name(),
        }
    }
}

impl Serialize for MetricResult {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("MetricResult", 3)?;
        s.serialize_field("correct", &self.correct)?;
        s.serialize_field("total", &self.total)?;
        s.serialize_field("score", &crate::scalar::round_to(self.score(), 2))?;
        s.end()
    }
}

// Indexed by MetricKind::ALL order: (correct, total).
type Counts = [(u64, u64); 5];

fn metric_slot(m: MetricKind) -> usize {
    MetricKind::ALL.iter().position(|&x| x == m).unwrap()
}

fn score_sentence(gold: &[Word], system: &[Word], cfg: &MetricConfig) -> Counts {
    let mut c: Counts = [(0, 0); 5];
    for (g, s) in gold.iter().zip(system) {
        let g_rel = base_relation(&g.deprel);
        let uas = g.head == s.head;
        let las = uas && g_rel == base_relation(&s.deprel);
        bump(&mut c[0], las);
        bump(&mut c[1], uas);
        if !cfg.is_content(&g.deprel) {
            continue;
        }
        let clas = las;
        let mlas = clas && g.upos == s.upos && cfg.feats_match(&g.feats, &s.feats);
        let blex = clas && (g.lemma == "_" || g.lemma == s.lemma);
        bump(&mut c[2], clas);
        bump(&mut c[3], mlas);
        bump(&mut c[4], blex);
    }
    c
}

fn bump(slot: &mut (u64, u64), ok: bool) {
    slot.0 += ok as u64;
    slot.1 += 1;
}

/// Check identity alignment between gold and system sentences.
pub fn check_alignment(gold: &[Sentence], system: &[Sentence]) -> Result<()> {
    if gold.len() != system.len() {
        return Err(Error::Alignment {
            sentence: gold.len().min(system.len()) + 1,
            word: None,
            detail: format!("gold has {} sentences, system has {}", gold.len(), system.len()),
        });
    }
    for (i, (g, s)) in gold.iter().zip(system).enumerate() {
        if g.len() != s.len() {
            return Err(Error::Alignment {
                sentence: i + 1,
                word: None,
                detail: format!("gold has {} words, system has {}", g.len(), s.len()),
            });
        }
        if let Some(j) = g.iter().zip(s).position(|(a, b)| a.form != b.form) {
            return Err(Error::Alignment {
                sentence: i + 1,
                word: Some(j + 1),
                detail: format!("gold form `{}` vs system form `{}`", g[j].form, s[j].form),
            });
        }
    }
    Ok(())
}

/// Score aligned sentence lists for the requested metrics.
pub fn score_sentences(
    gold: &[Sentence],
    system: &[Sentence],
    metrics: &[MetricKind],
    cfg: &MetricConfig,
) -> Result<BTreeMap<MetricKind, MetricResult>> {
    check_alignment(gold, system)?;
    let totals = gold
        .par_iter()
        .zip(system.par_iter())
        .map(|(g, s)| score_sentence(g, s, cfg))
        .reduce(
            || [(0, 0); 5],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.0 += y.0;
                    x.1 += y.1;
                }
                a
            },
        );
    Ok(metrics
        .iter()
        .map(|&m| {
            let (correct, total) = totals[metric_slot(m)];
            (m, MetricResult { metric: m, correct, total })
        })
        .collect())
}

/// Parse both files and score them.
pub fn score_pair(
    gold: impl AsRef<Path>,
    system: impl AsRef<Path>,
    metrics: &[MetricKind],
    cfg: &MetricConfig,
) -> Result<BTreeMap<MetricKind, MetricResult>> {
    let gold = parse_conllu(gold)?;
    let system = parse_conllu(system)?;
    score_sentences(&gold, &system, metrics, cfg)
}

/// Render a sentence list back to CoNLL-U (unused columns as `_`).
pub fn write_conllu(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        for w in s {
            let feats = if w.feats.is_empty() {
                "_".to_string()
            } else {
                w.feats
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join("|")
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t_\t{}\t{}\t{}\t_\t_\n",
                w.index, w.form, w.lemma, w.upos, feats, w.head, w.deprel
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = "# text = He runs\n1\tHe\the\tPRON\t_\t_\t2\tnsubj\t_\t_\n2\truns\trun\tVERB\t_\t_\t0\troot\t_\t_\n\n";

    fn all() -> Vec<MetricKind> {
        MetricKind::ALL.to_vec()
    }

    #[test]
    fn minimal_sentence() {
        let s = read_conllu(TWO.as_bytes()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].len(), 2);
        assert_eq!(s[0][1].head, 0);
    }

    #[test]
    fn range_and_empty_nodes_dropped() {
        let text = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n\
                    1\tdo\tdo\tAUX\t_\t_\t0\troot\t_\t_\n\
                    1.1\tx\t_\t_\t_\t_\t_\t_\t_\t_\n\
                    2\tn't\tnot\tPART\t_\t_\t1\tadvmod\t_\t_\n";
        let s = read_conllu(text.as_bytes()).unwrap();
        assert_eq!(s[0].len(), 2);
    }

    #[test]
    fn head_out_of_range() {
        let text = "1\ta\t_\t_\t_\t_\t5\tx\t_\t_\n2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n3\tc\t_\t_\t_\t_\t2\tx\t_\t_\n";
        assert!(matches!(read_conllu(text.as_bytes()), Err(Error::Conllu { line: 1, .. })));
    }

    #[test]
    fn structural_errors() {
        let short = "1\ta\t_\t_\t_\t_\t0\n";
        assert!(matches!(read_conllu(short.as_bytes()), Err(Error::Conllu { .. })));
        let bad_head = "1\ta\t_\t_\t_\t_\tx\troot\t_\t_\n";
        assert!(matches!(read_conllu(bad_head.as_bytes()), Err(Error::Conllu { .. })));
        let gap = "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n3\tb\t_\t_\t_\t_\t1\tx\t_\t_\n";
        assert!(matches!(read_conllu(gap.as_bytes()), Err(Error::Conllu { line: 2, .. })));
        let self_head = "1\ta\t_\t_\t_\t_\t1\troot\t_\t_\n";
        assert!(matches!(read_conllu(self_head.as_bytes()), Err(Error::Conllu { .. })));
    }

    #[test]
    fn feats_parsed() {
        let text = "1\ta\t_\tNOUN\t_\tCase=Nom|Number=Sing\t0\troot\t_\t_\n";
        let s = read_conllu(text.as_bytes()).unwrap();
        assert_eq!(s[0][0].feats["Case"], "Nom");
        assert_eq!(s[0][0].feats.len(), 2);
    }

    #[test]
    fn self_comparison_is_perfect() {
        let s = read_conllu(TWO.as_bytes()).unwrap();
        let r = score_sentences(&s, &s, &all(), &MetricConfig::default()).unwrap();
        assert!(r.values().all(|m| m.score() == 100.0));
    }

    #[test]
    fn one_wrong_deprel() {
        let gold = read_conllu(TWO.as_bytes()).unwrap();
        let sys = read_conllu(TWO.replace("nsubj", "obj").as_bytes()).unwrap();
        let r = score_sentences(&gold, &sys, &all(), &MetricConfig::default()).unwrap();
        assert_eq!(r[&MetricKind::Uas].score(), 100.0);
        assert_eq!(r[&MetricKind::Las].score(), 50.0);
    }

    #[test]
    fn subtype_stripped_and_case_folded() {
        let gold = read_conllu(TWO.as_bytes()).unwrap();
        let sys = read_conllu(TWO.replace("nsubj", "NSUBJ:pass").as_bytes()).unwrap();
        let r = score_sentences(&gold, &sys, &[MetricKind::Las], &MetricConfig::default()).unwrap();
        assert_eq!(r[&MetricKind::Las].score(), 100.0);
    }

    #[test]
    fn misaligned_forms() {
        let gold = read_conllu(TWO.as_bytes()).unwrap();
        let sys = read_conllu(TWO.replace("\truns\t", "\tran\t").as_bytes()).unwrap();
        match score_sentences(&gold, &sys, &all(), &MetricConfig::default()) {
            Err(Error::Alignment { sentence: 1, word: Some(2), .. }) => {}
            other => panic!("{other:?}"),
        }
        let two = read_conllu(format!("{TWO}{TWO}").as_bytes()).unwrap();
        assert!(matches!(
            score_sentences(&gold, &two, &all(), &MetricConfig::default()),
            Err(Error::Alignment { sentence: 2, word: None, .. })
        ));
    }

    #[test]
    fn empty_totals_score_zero() {
        let r = MetricResult { metric: MetricKind::Clas, correct: 0, total: 0 };
        assert_eq!(r.score(), 0.0);
    }

    #[test]
    fn round_trip_writer() {
        let s = read_conllu(TWO.as_bytes()).unwrap();
        assert_eq!(read_conllu(write_conllu(&s).as_bytes()).unwrap(), s);
    }
}
