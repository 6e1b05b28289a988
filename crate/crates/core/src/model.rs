//! Score matrices, treebank metadata and subset definitions.
//!
//! A [`ScoreMatrix`] holds one percentage score per (parser, treebank,
//! metric) cell. Everything downstream (macro-averages, rankings, error
//! reductions) reads scores through the matrix so that the configured
//! [`MissingPolicy`] is applied uniformly.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Attachment-score family a cell belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MetricKind {
    Las,
    Uas,
    Clas,
    Mlas,
    Blex,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::Las,
        MetricKind::Uas,
        MetricKind::Clas,
        MetricKind::Mlas,
        MetricKind::Blex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Las => "LAS",
            MetricKind::Uas => "UAS",
            MetricKind::Clas => "CLAS",
            MetricKind::Mlas => "MLAS",
            MetricKind::Blex => "BLEX",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        MetricKind::ALL
            .into_iter()
            .find(|m| m.name() == upper)
            .ok_or_else(|| Error::Invalid(format!("unknown metric `{s}`")))
    }
}

/// What a lookup of an absent cell yields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingPolicy {
    /// Absent cells score 0, like a failed shared-task run.
    #[default]
    Zero,
    /// Absent cells are a hard failure.
    Error,
    /// Absent cells are left out of the average.
    Skip,
}

impl FromStr for MissingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zero" => Ok(MissingPolicy::Zero),
            "error" => Ok(MissingPolicy::Error),
            "skip" => Ok(MissingPolicy::Skip),
            _ => Err(Error::Invalid(format!("unknown missing policy `{s}`"))),
        }
    }
}

impl fmt::Display for MissingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MissingPolicy::Zero => "zero",
            MissingPolicy::Error => "error",
            MissingPolicy::Skip => "skip",
        })
    }
}

/// Delimiter of a scores file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TableFormat {
    #[default]
    Tsv,
    Csv,
}

impl TableFormat {
    fn delimiter(self) -> u8 {
        match self {
            TableFormat::Tsv => b'\t',
            TableFormat::Csv => b',',
        }
    }

    /// Guess from a file extension, defaulting to TSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => TableFormat::Csv,
            _ => TableFormat::Tsv,
        }
    }
}

/// Parser x treebank x metric table of percentage scores.
#[derive(Clone, Debug)]
pub struct ScoreMatrix<S> {
    parsers: Vec<String>,
    treebanks: Vec<String>,
    parser_index: HashMap<String, usize>,
    treebank_index: HashMap<String, usize>,
    cells: HashMap<(usize, usize, MetricKind), S>,
    missing_policy: MissingPolicy,
}

impl<S: Scalar> Default for ScoreMatrix<S> {
    fn default() -> Self {
        Self::new(MissingPolicy::default())
    }
}

impl<S: Scalar> ScoreMatrix<S> {
    pub fn new(missing_policy: MissingPolicy) -> Self {
        ScoreMatrix {
            parsers: Vec::new(),
            treebanks: Vec::new(),
            parser_index: HashMap::new(),
            treebank_index: HashMap::new(),
            cells: HashMap::new(),
            missing_policy,
        }
    }

    pub fn with_missing_policy(mut self, policy: MissingPolicy) -> Self {
        self.missing_policy = policy;
        self
    }

    pub fn missing_policy(&self) -> MissingPolicy {
        self.missing_policy
    }

    /// Parsers in first-seen order.
    pub fn parsers(&self) -> &[String] {
        &self.parsers
    }

    /// Treebanks in first-seen order.
    pub fn treebanks(&self) -> &[String] {
        &self.treebanks
    }

    pub fn parser_position(&self, parser: &str) -> Option<usize> {
        self.parser_index.get(parser).copied()
    }

    pub fn treebank_position(&self, treebank: &str) -> Option<usize> {
        self.treebank_index.get(treebank).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Metrics that have at least one stored cell.
    pub fn metrics(&self) -> BTreeSet<MetricKind> {
        self.cells.keys().map(|&(_, _, m)| m).collect()
    }

    /// Store a score. Values must be finite and within [0, 100]; a cell may
    /// only be set once.
    pub fn insert(&mut self, parser: &str, treebank: &str, metric: MetricKind, value: S) -> Result<()> {
        if !(value >= S::zero() && value <= S::hundred()) {
            return Err(Error::Range {
                line: 0,
                value: value.to_string(),
            });
        }
        let p = intern(&mut self.parsers, &mut self.parser_index, parser);
        let t = intern(&mut self.treebanks, &mut self.treebank_index, treebank);
        if self.cells.insert((p, t, metric), value).is_some() {
            return Err(Error::Conflict(format!(
                "duplicate cell ({parser}, {treebank}, {metric})"
            )));
        }
        Ok(())
    }

    /// Raw stored value, ignoring the missing policy.
    pub fn get(&self, parser: &str, treebank: &str, metric: MetricKind) -> Option<S> {
        let p = self.parser_position(parser)?;
        let t = self.treebank_position(treebank)?;
        self.cells.get(&(p, t, metric)).copied()
    }

    /// Value of a cell after applying the missing policy: `Ok(None)` means
    /// the cell is skipped.
    pub fn lookup(&self, parser: &str, treebank: &str, metric: MetricKind) -> Result<Option<S>> {
        if self.parser_position(parser).is_none() {
            return Err(Error::UnknownParser(parser.to_string()));
        }
        match self.get(parser, treebank, metric) {
            Some(v) => Ok(Some(v)),
            None => match self.missing_policy {
                MissingPolicy::Zero => Ok(Some(S::zero())),
                MissingPolicy::Skip => Ok(None),
                MissingPolicy::Error => Err(Error::MissingScore {
                    parser: parser.to_string(),
                    treebank: treebank.to_string(),
                    metric: metric.to_string(),
                }),
            },
        }
    }

    /// Unweighted mean of the parser's scores over the subset members.
    pub fn macro_average(&self, parser: &str, subset: &SubsetDef, metric: MetricKind) -> Result<S> {
        if subset.is_empty() {
            return Err(Error::EmptySubset(subset.name.clone()));
        }
        let mut sum = S::zero();
        let mut count = 0usize;
        for tb in &subset.members {
            if let Some(v) = self.lookup(parser, tb, metric)? {
                sum = sum + v;
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::AllSkipped {
                parser: parser.to_string(),
                subset: subset.name.clone(),
            });
        }
        Ok(sum / S::from_count(count))
    }

    /// Dense parser-major view of one metric, used by the sampling hot path.
    pub fn view(&self, metric: MetricKind) -> MetricView<'_, S> {
        let width = self.treebanks.len();
        let mut values = vec![None; self.parsers.len() * width];
        for (&(p, t, m), &v) in &self.cells {
            if m == metric {
                values[p * width + t] = Some(v);
            }
        }
        MetricView {
            matrix: self,
            metric,
            width,
            values,
        }
    }

    /// Rename treebanks through a code map; two codes collapsing onto the
    /// same canonical id with overlapping cells is a conflict.
    pub fn canonicalize(&self, codes: &CodeMap) -> Result<Self> {
        let mut out = ScoreMatrix::new(self.missing_policy);
        let mut rows: Vec<_> = self.cells.iter().collect();
        rows.sort_by_key(|(&k, _)| k);
        for (&(p, t, m), &v) in rows {
            out.insert(&self.parsers[p], codes.resolve(&self.treebanks[t]), m, v)?;
        }
        Ok(out)
    }

    /// Load a scores table with header `parser treebank metric value`.
    pub fn load(path: impl AsRef<Path>, format: TableFormat) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(file, format)
    }

    pub fn read<R: Read>(reader: R, format: TableFormat) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(format.delimiter())
            .trim(csv::Trim::All)
            .flexible(true)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut matrix = ScoreMatrix::default();
        let headers = rdr.headers().map_err(csv_error)?.clone();
        if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
            return Ok(matrix);
        }
        let cols = column_indices(&headers, &["parser", "treebank", "metric", "value"])?;

        for record in rdr.records() {
            let record = record.map_err(csv_error)?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != headers.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {} fields, found {}", headers.len(), record.len()),
                });
            }
            let metric: MetricKind = record[cols[2]].parse().map_err(|_| Error::Parse {
                line,
                message: format!("unknown metric `{}`", &record[cols[2]]),
            })?;
            let raw = &record[cols[3]];
            let value: S = raw.parse().map_err(|_| Error::Parse {
                line,
                message: format!("non-numeric score `{raw}`"),
            })?;
            let (parser, treebank) = (&record[cols[0]], &record[cols[1]]);
            if parser.is_empty() || treebank.is_empty() {
                return Err(Error::Parse {
                    line,
                    message: "empty parser or treebank id".into(),
                });
            }
            matrix
                .insert(parser, treebank, metric, value)
                .map_err(|e| match e {
                    Error::Range { .. } => Error::Range {
                        line,
                        value: raw.to_string(),
                    },
                    Error::Conflict(msg) => Error::Conflict(format!("line {line}: {msg}")),
                    other => other,
                })?;
        }
        Ok(matrix)
    }

    /// Emit the table in the same format [`ScoreMatrix::read`] accepts. Rows
    /// are sorted by (parser, treebank, metric) position.
    pub fn write<W: Write>(&self, writer: W, format: TableFormat) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .delimiter(format.delimiter())
            .from_writer(writer);
        wtr.write_record(["parser", "treebank", "metric", "value"])
            .map_err(csv_error)?;
        let mut rows: Vec<_> = self.cells.iter().collect();
        rows.sort_by_key(|(&k, _)| k);
        for (&(p, t, m), v) in rows {
            wtr.write_record([
                self.parsers[p].as_str(),
                self.treebanks[t].as_str(),
                m.name(),
                &v.to_string(),
            ])
            .map_err(csv_error)?;
        }
        wtr.flush().map_err(|e| Error::io("<writer>", e))?;
        Ok(())
    }
}

fn intern(list: &mut Vec<String>, index: &mut HashMap<String, usize>, id: &str) -> usize {
    if let Some(&i) = index.get(id) {
        return i;
    }
    list.push(id.to_string());
    index.insert(id.to_string(), list.len() - 1);
    list.len() - 1
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

fn column_indices(headers: &csv::StringRecord, wanted: &[&str]) -> Result<Vec<usize>> {
    wanted
        .iter()
        .map(|w| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(w))
                .ok_or_else(|| Error::MissingColumn((*w).to_string()))
        })
        .collect()
}

/// Why a dense-view average could not be resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unresolved {
    Missing { parser: usize, treebank: usize },
    AllSkipped { parser: usize },
}

/// One metric of a [`ScoreMatrix`] laid out densely.
pub struct MetricView<'a, S> {
    matrix: &'a ScoreMatrix<S>,
    metric: MetricKind,
    width: usize,
    values: Vec<Option<S>>,
}

impl<S: Scalar> MetricView<'_, S> {
    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn matrix(&self) -> &ScoreMatrix<S> {
        self.matrix
    }

    pub fn num_parsers(&self) -> usize {
        self.matrix.parsers.len()
    }

    pub fn cell(&self, parser: usize, treebank: usize) -> Option<S> {
        self.values[parser * self.width + treebank]
    }

    /// Mean over matrix columns under the matrix's missing policy.
    pub fn average(&self, parser: usize, columns: &[usize]) -> std::result::Result<S, Unresolved> {
        let row = &self.values[parser * self.width..(parser + 1) * self.width];
        let mut sum = S::zero();
        let mut count = 0usize;
        for &t in columns {
            match row[t] {
                Some(v) => {
                    sum = sum + v;
                    count += 1;
                }
                None => match self.matrix.missing_policy {
                    MissingPolicy::Zero => count += 1,
                    MissingPolicy::Skip => {}
                    MissingPolicy::Error => return Err(Unresolved::Missing { parser, treebank: t }),
                },
            }
        }
        if count == 0 {
            return Err(Unresolved::AllSkipped { parser });
        }
        Ok(sum / S::from_count(count))
    }

    pub fn unresolved_error(&self, u: Unresolved, subset: &str) -> Error {
        match u {
            Unresolved::Missing { parser, treebank } => Error::MissingScore {
                parser: self.matrix.parsers[parser].clone(),
                treebank: self.matrix.treebanks[treebank].clone(),
                metric: self.metric.to_string(),
            },
            Unresolved::AllSkipped { parser } => Error::AllSkipped {
                parser: self.matrix.parsers[parser].clone(),
                subset: subset.to_string(),
            },
        }
    }
}

/// Per-treebank metadata record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreebankMeta {
    pub treebank_id: String,
    pub language: String,
    pub family: String,
    pub size_tokens: u64,
    pub low_resource: bool,
}

/// Validated set of [`TreebankMeta`] records with id lookup.
#[derive(Clone, Debug, Default)]
pub struct Metadata {
    records: Vec<TreebankMeta>,
    index: HashMap<String, usize>,
}

impl Metadata {
    pub fn new(records: Vec<TreebankMeta>) -> Result<Self> {
        let mut index = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if index.insert(r.treebank_id.clone(), i).is_some() {
                return Err(Error::Conflict(format!("duplicate treebank_id `{}`", r.treebank_id)));
            }
        }
        Ok(Metadata { records, index })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(file)
    }

    pub fn read<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr.headers().map_err(csv_error)?.clone();
        let cols = column_indices(
            &headers,
            &["treebank_id", "language", "family", "size_tokens", "low_resource"],
        )?;
        let mut records = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(csv_error)?;
            let line = record.position().map_or(0, |p| p.line());
            let size_raw = &record[cols[3]];
            let size_tokens = size_raw.parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("size_tokens `{size_raw}` is not a non-negative integer"),
            })?;
            let flag_raw = &record[cols[4]];
            let low_resource = match flag_raw {
                "true" => true,
                "false" => false,
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("low_resource `{flag_raw}` is not true/false"),
                    })
                }
            };
            records.push(TreebankMeta {
                treebank_id: record[cols[0]].to_string(),
                language: record[cols[1]].to_string(),
                family: record[cols[2]].to_string(),
                size_tokens,
                low_resource,
            });
        }
        Metadata::new(records)
    }

    pub fn get(&self, treebank_id: &str) -> Option<&TreebankMeta> {
        self.index.get(treebank_id).map(|&i| &self.records[i])
    }

    pub fn records(&self) -> &[TreebankMeta] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Named set of treebanks evaluated together.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetDef {
    pub name: String,
    pub members: Vec<String>,
}

impl SubsetDef {
    pub fn new(name: impl Into<String>, members: Vec<String>) -> Result<Self> {
        let name = name.into();
        let mut seen = BTreeSet::new();
        for m in &members {
            if !seen.insert(m.as_str()) {
                return Err(Error::Conflict(format!("treebank `{m}` listed twice in subset `{name}`")));
            }
        }
        Ok(SubsetDef { name, members })
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every member must have a metadata record.
    pub fn validate(&self, meta: &Metadata) -> Result<()> {
        match self.members.iter().find(|m| meta.get(m).is_none()) {
            Some(m) => Err(Error::UnknownTreebank(m.clone())),
            None => Ok(()),
        }
    }

    /// Parse a JSON `{"name", "members"}` object or a plain list with one id
    /// per line, in which case `fallback_name` names the subset.
    pub fn parse(text: &str, fallback_name: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let raw: SubsetDef = serde_json::from_str(text)?;
            return SubsetDef::new(raw.name, raw.members);
        }
        let members = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect();
        SubsetDef::new(fallback_name, members)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("subset");
        SubsetDef::parse(&text, stem)
    }
}

/// Shared-task short codes (e.g. `pl_lfg`) to canonical treebank ids.
#[derive(Clone, Debug, Default)]
pub struct CodeMap {
    map: HashMap<String, String>,
}

impl CodeMap {
    pub fn read<R: Read>(reader: R) -> Result<Self> {
        let mut map = HashMap::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| Error::io("<code map>", e))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("code")) {
                continue;
            }
            let mut parts = line.split('\t');
            match (parts.next(), parts.next()) {
                (Some(code), Some(id)) => {
                    map.insert(code.trim().to_string(), id.trim().to_string());
                }
                _ => {
                    return Err(Error::Parse {
                        line: i as u64 + 1,
                        message: "expected `code<TAB>treebank_id`".into(),
                    })
                }
            }
        }
        Ok(CodeMap { map })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(file)
    }

    /// Canonical id for `id`, or `id` itself when it is not a known code.
    pub fn resolve<'a>(&'a self, id: &'a str) -> &'a str {
        self.map.get(id).map_or(id, String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset(members: &[&str]) -> SubsetDef {
        SubsetDef::new("s", members.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn loads_single_row() {
        let m = ScoreMatrix::<f64>::read("parser,treebank,metric,value\nP1, tb1, LAS, 87.74\n".as_bytes(), TableFormat::Csv)
            .unwrap();
        assert_eq!(m.get("P1", "tb1", MetricKind::Las), Some(87.74));
        assert_eq!(m.parsers(), ["P1"]);
    }

    #[test]
    fn empty_file_is_empty_matrix() {
        let m = ScoreMatrix::<f64>::read("".as_bytes(), TableFormat::Tsv).unwrap();
        assert!(m.parsers().is_empty());
        assert!(m.treebanks().is_empty());
    }

    #[test]
    fn out_of_range_score() {
        let err = ScoreMatrix::<f64>::read("parser,treebank,metric,value\nP1,tb1,LAS,103.2\n".as_bytes(), TableFormat::Csv)
            .unwrap_err();
        assert!(matches!(err, Error::Range { line: 2, .. }), "{err}");
    }

    #[test]
    fn duplicate_cell_conflicts() {
        let text = "parser\ttreebank\tmetric\tvalue\nP\tt\tlas\t1\nP\tt\tLAS\t2\n";
        let err = ScoreMatrix::<f64>::read(text.as_bytes(), TableFormat::Tsv).unwrap_err();
        assert!(matches!(err, Error::Conflict(_)), "{err}");
    }

    #[test]
    fn malformed_rows_report_line() {
        let text = "parser\ttreebank\tmetric\tvalue\nP\tt\tLAS\t1\nP\tu\tLAS\n";
        match ScoreMatrix::<f64>::read(text.as_bytes(), TableFormat::Tsv).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
        let text = "parser\ttreebank\tmetric\tvalue\nP\tt\tLAS\tabc\n";
        assert!(matches!(
            ScoreMatrix::<f64>::read(text.as_bytes(), TableFormat::Tsv),
            Err(Error::Parse { line: 2, .. })
        ));
        let text = "parser\ttreebank\tmetric\tvalue\nP\tt\tXAS\t1\n";
        assert!(matches!(
            ScoreMatrix::<f64>::read(text.as_bytes(), TableFormat::Tsv),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn missing_header_column() {
        let text = "parser\ttreebank\tvalue\nP\tt\t1\n";
        assert!(matches!(
            ScoreMatrix::<f64>::read(text.as_bytes(), TableFormat::Tsv),
            Err(Error::MissingColumn(c)) if c == "metric"
        ));
    }

    #[test]
    fn metadata_rows() {
        let text = "treebank_id\tlanguage\tfamily\tsize_tokens\tlow_resource\n\
                    Tamil-TTB\tTamil\tDravidian\t9000\ttrue\n\
                    Czech-PDT\tCzech\tSlavic\t1509000\tfalse\n";
        let meta = Metadata::read(text.as_bytes()).unwrap();
        assert_eq!(meta.get("Tamil-TTB").unwrap().size_tokens, 9000);
        assert!(meta.get("Tamil-TTB").unwrap().low_resource);
        assert_eq!(meta.get("Czech-PDT").unwrap().size_tokens, 1_509_000);
        assert_eq!(meta.get("Czech-PDT").unwrap().family, "Slavic");
    }

    #[test]
    fn metadata_errors() {
        let head = "treebank_id\tlanguage\tfamily\tsize_tokens\tlow_resource\n";
        let dup = format!("{head}a\tA\tF\t1\ttrue\na\tA\tF\t2\tfalse\n");
        assert!(matches!(Metadata::read(dup.as_bytes()), Err(Error::Conflict(_))));
        let bad_size = format!("{head}a\tA\tF\t-3\ttrue\n");
        assert!(matches!(Metadata::read(bad_size.as_bytes()), Err(Error::Parse { .. })));
        let bad_flag = format!("{head}a\tA\tF\t3\tyes\n");
        assert!(matches!(Metadata::read(bad_flag.as_bytes()), Err(Error::Parse { .. })));
        let no_col = "treebank_id\tlanguage\tsize_tokens\tlow_resource\na\tA\t3\ttrue\n";
        assert!(matches!(Metadata::read(no_col.as_bytes()), Err(Error::MissingColumn(_))));
    }

    #[test]
    fn macro_average_examples() {
        let mut m = ScoreMatrix::<f64>::default();
        m.insert("P", "a", MetricKind::Las, 98.0).unwrap();
        m.insert("P", "b", MetricKind::Las, 50.0).unwrap();
        m.insert("Q", "a", MetricKind::Las, 83.96).unwrap();
        assert_eq!(m.macro_average("P", &subset(&["a", "b"]), MetricKind::Las).unwrap(), 74.0);
        assert_eq!(m.macro_average("Q", &subset(&["a"]), MetricKind::Las).unwrap(), 83.96);
    }

    #[test]
    fn missing_policies() {
        let mut m = ScoreMatrix::<f64>::default();
        m.insert("P", "tb1", MetricKind::Las, 90.0).unwrap();
        m.insert("Q", "tb2", MetricKind::Las, 70.0).unwrap();
        let s = subset(&["tb1", "tb2"]);
        assert_eq!(m.macro_average("P", &s, MetricKind::Las).unwrap(), 45.0);
        let skip = m.clone().with_missing_policy(MissingPolicy::Skip);
        assert_eq!(skip.macro_average("P", &s, MetricKind::Las).unwrap(), 90.0);
        assert!(matches!(
            skip.macro_average("P", &subset(&["tb2"]), MetricKind::Las),
            Err(Error::AllSkipped { .. })
        ));
        let strict = m.with_missing_policy(MissingPolicy::Error);
        assert!(matches!(
            strict.macro_average("P", &s, MetricKind::Las),
            Err(Error::MissingScore { .. })
        ));
    }

    #[test]
    fn empty_subset_and_unknown_parser() {
        let mut m = ScoreMatrix::<f64>::default();
        m.insert("P", "a", MetricKind::Las, 1.0).unwrap();
        assert!(matches!(
            m.macro_average("P", &subset(&[]), MetricKind::Las),
            Err(Error::EmptySubset(_))
        ));
        assert!(matches!(
            m.macro_average("X", &subset(&["a"]), MetricKind::Las),
            Err(Error::UnknownParser(_))
        ));
    }

    #[test]
    fn subset_formats() {
        let s = SubsetDef::parse(r#"{"name": "Ma18", "members": ["a", "b"]}"#, "x").unwrap();
        assert_eq!(s.name, "Ma18");
        assert_eq!(s.size(), 2);
        let s = SubsetDef::parse("a\nb\n\nc\n", "plain").unwrap();
        assert_eq!(s.name, "plain");
        assert_eq!(s.members, ["a", "b", "c"]);
        assert!(SubsetDef::parse("a\na\n", "dup").is_err());
    }

    #[test]
    fn code_map_canonicalizes() {
        let codes = CodeMap::read("code\ttreebank_id\npl_sz\tPolish-PDB\n".as_bytes()).unwrap();
        let mut m = ScoreMatrix::<f64>::default();
        m.insert("P", "pl_sz", MetricKind::Las, 80.0).unwrap();
        m.insert("P", "Other-X", MetricKind::Las, 70.0).unwrap();
        let c = m.canonicalize(&codes).unwrap();
        assert_eq!(c.get("P", "Polish-PDB", MetricKind::Las), Some(80.0));
        assert_eq!(c.get("P", "Other-X", MetricKind::Las), Some(70.0));
    }
}
