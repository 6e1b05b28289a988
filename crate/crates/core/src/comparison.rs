//! Pairwise error-reduction reports and construction of an "easy" subset.
//!
//! Error reduction is computed per treebank and then averaged. The error
//! reduction of the two macro-averages is reported next to it because the
//! two can disagree, even in sign.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Metadata, MetricKind, ScoreMatrix, SubsetDef};
use crate::scalar::Scalar;

/// Fraction of the reference's errors removed by the compared system,
/// `(cmp - ref) / (100 - ref)`. `None` when the reference is perfect and
/// the compared system is not; two perfect scores give 0.
pub fn error_reduction<S: Scalar>(reference: S, compared: S) -> Option<S> {
    let hundred = S::hundred();
    if reference == hundred {
        return (compared == hundred).then(S::zero);
    }
    Some((compared - reference) / (hundred - reference))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReductionReport<S> {
    pub reference: String,
    pub compared: String,
    pub metric: MetricKind,
    pub subset: SubsetDef,
    /// Per-treebank error reduction as a fraction, in subset order.
    pub per_treebank: Vec<(String, S)>,
    /// Treebanks left out because a cell was skipped.
    pub skipped: Vec<String>,
    /// Mean of `per_treebank`, in percent.
    pub mean_e: S,
    /// Error reduction of the macro-averages, in percent.
    pub e_of_means: S,
    pub reference_average: S,
    pub compared_average: S,
}

impl<S: Scalar> ErrorReductionReport<S> {
    /// Macro-average difference, compared minus reference.
    pub fn macro_gap(&self) -> S {
        self.compared_average - self.reference_average
    }

    /// Mean-of-ERs minus ER-of-means, in percentage points.
    pub fn aggregation_gap(&self) -> S {
        self.mean_e - self.e_of_means
    }

    /// The macro-average gap and the mean error reduction point in
    /// opposite directions.
    pub fn sign_reversal(&self) -> bool {
        let gap = self.macro_gap();
        (gap > S::zero() && self.mean_e < S::zero()) || (gap < S::zero() && self.mean_e > S::zero())
    }
}

pub fn error_reduction_subset<S: Scalar>(
    matrix: &ScoreMatrix<S>,
    reference: &str,
    compared: &str,
    subset: &SubsetDef,
    metric: MetricKind,
) -> Result<ErrorReductionReport<S>> {
    if subset.is_empty() {
        return Err(Error::EmptySubset(subset.name.clone()));
    }
    let mut per_treebank = Vec::with_capacity(subset.size());
    let mut skipped = Vec::new();
    let (mut sum_ref, mut sum_cmp) = (S::zero(), S::zero());
    for tb in &subset.members {
        let r = matrix.lookup(reference, tb, metric)?;
        let c = matrix.lookup(compared, tb, metric)?;
        let (Some(r), Some(c)) = (r, c) else {
            skipped.push(tb.clone());
            continue;
        };
        let er = error_reduction(r, c).ok_or_else(|| Error::UndefinedErrorReduction {
            treebank: tb.clone(),
            compared: c.to_string(),
        })?;
        per_treebank.push((tb.clone(), er));
        sum_ref = sum_ref + r;
        sum_cmp = sum_cmp + c;
    }
    if per_treebank.is_empty() {
        return Err(Error::AllSkipped {
            parser: format!("{reference}/{compared}"),
            subset: subset.name.clone(),
        });
    }
    let n = S::from_count(per_treebank.len());
    let hundred = S::hundred();
    let mean_e = per_treebank.iter().map(|&(_, e)| e).sum::<S>() / n * hundred;
    let (reference_average, compared_average) = (sum_ref / n, sum_cmp / n);
    // Only undefined when every reference cell is 100, which the
    // per-treebank pass has already rejected unless both are perfect.
    let e_of_means = error_reduction(reference_average, compared_average).unwrap_or_else(S::zero) * hundred;
    Ok(ErrorReductionReport {
        reference: reference.to_string(),
        compared: compared.to_string(),
        metric,
        subset: subset.clone(),
        per_treebank,
        skipped,
        mean_e,
        e_of_means,
        reference_average,
        compared_average,
    })
}

/// Which LAS decides a treebank's difficulty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum EasyReference {
    /// Best score over all parsers.
    #[default]
    BestParser,
    Parser(String),
}

/// Greedily take the `n` treebanks with the highest LAS, at most one per
/// language. Ties are broken by treebank id.
pub fn build_easy_subset<S: Scalar>(
    matrix: &ScoreMatrix<S>,
    meta: &Metadata,
    n: usize,
    reference: &EasyReference,
) -> Result<SubsetDef> {
    if let EasyReference::Parser(p) = reference {
        if matrix.parser_position(p).is_none() {
            return Err(Error::UnknownParser(p.clone()));
        }
    }
    let mut scored: Vec<(S, &str)> = Vec::new();
    for tb in matrix.treebanks() {
        let best = match reference {
            EasyReference::BestParser => matrix
                .parsers()
                .iter()
                .filter_map(|p| matrix.get(p, tb, MetricKind::Las))
                .fold(None, |acc: Option<S>, v| Some(acc.map_or(v, |a| a.max(v)))),
            EasyReference::Parser(p) => matrix.get(p, tb, MetricKind::Las),
        };
        if let Some(best) = best {
            scored.push((best, tb));
        }
    }
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.cmp(b.1)));

    let mut languages = BTreeSet::new();
    let mut members = Vec::with_capacity(n);
    for &(_, tb) in &scored {
        let lang = &meta.get(tb).ok_or_else(|| Error::UnknownTreebank(tb.to_string()))?.language;
        if members.len() < n && languages.insert(lang.clone()) {
            members.push(tb.to_string());
        }
    }
    if members.len() < n {
        return Err(Error::NotEnoughLanguages {
            requested: n,
            available: languages.len(),
        });
    }
    SubsetDef::new("Easy", members)
}

/// Two-parser, two-treebank matrix on which the compared parser has the
/// higher macro-average but a negative mean error reduction.
#[derive(Clone, Debug)]
pub struct ReversalWitness<S> {
    pub matrix: ScoreMatrix<S>,
    pub subset: SubsetDef,
    pub report: ErrorReductionReport<S>,
}

/// Exhaustive search over score pairs drawn from `grid`, in lexicographic
/// order of (ref1, ref2, cmp1, cmp2). Returns the first witness found.
pub fn find_reversal_witness<S: Scalar>(grid: &[S]) -> Option<ReversalWitness<S>> {
    let subset = SubsetDef::new("witness", vec!["tb1".into(), "tb2".into()]).ok()?;
    for &r1 in grid {
        for &r2 in grid {
            for &c1 in grid {
                for &c2 in grid {
                    if c1 + c2 <= r1 + r2 {
                        continue;
                    }
                    let (Some(e1), Some(e2)) = (error_reduction(r1, c1), error_reduction(r2, c2)) else {
                        continue;
                    };
                    if e1 + e2 >= S::zero() {
                        continue;
                    }
                    let mut m = ScoreMatrix::default();
                    for (p, a, b) in [("M1", r1, r2), ("M2", c1, c2)] {
                        m.insert(p, "tb1", MetricKind::Las, a).ok()?;
                        m.insert(p, "tb2", MetricKind::Las, b).ok()?;
                    }
                    let report = error_reduction_subset(&m, "M1", "M2", &subset, MetricKind::Las).ok()?;
                    if report.sign_reversal() {
                        return Some(ReversalWitness {
                            matrix: m,
                            subset,
                            report,
                        });
                    }
                }
            }
        }
    }
    None
}
