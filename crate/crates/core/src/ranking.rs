//! Parser rankings on subsets and the distribution of those ranks over a
//! sample stream.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{MetricKind, MissingPolicy, ScoreMatrix};
use crate::sampler::{Sampler, SubsetSample};
use crate::scalar::Scalar;

/// Ranks of every parser on one subset (competition ranking, 1 = best).
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetRanking {
    pub subset: SubsetSample,
    pub metric: MetricKind,
    /// In matrix parser order.
    pub ranks: Vec<(String, usize)>,
}

impl SubsetRanking {
    pub fn rank_of(&self, parser: &str) -> Option<usize> {
        self.ranks.iter().find(|(p, _)| p == parser).map(|&(_, r)| r)
    }
}

/// Scores of one metric laid out by (parser, universe position).
#[derive(Clone, Debug)]
pub struct Ranker<S> {
    parsers: Vec<String>,
    universe: Vec<String>,
    metric: MetricKind,
    policy: MissingPolicy,
    values: Vec<Option<S>>,
}

impl<S: Scalar> Ranker<S> {
    pub fn new(matrix: &ScoreMatrix<S>, universe: &[String], metric: MetricKind) -> Result<Self> {
        if matrix.parsers().is_empty() {
            return Err(Error::NoParsers);
        }
        let view = matrix.view(metric);
        let columns: Vec<Option<usize>> = universe.iter().map(|t| matrix.treebank_position(t)).collect();
        let mut values = Vec::with_capacity(matrix.parsers().len() * universe.len());
        for p in 0..matrix.parsers().len() {
            values.extend(columns.iter().map(|c| c.and_then(|t| view.cell(p, t))));
        }
        Ok(Ranker {
            parsers: matrix.parsers().to_vec(),
            universe: universe.to_vec(),
            metric,
            policy: matrix.missing_policy(),
            values,
        })
    }

    pub fn parsers(&self) -> &[String] {
        &self.parsers
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn parser_position(&self, parser: &str) -> Option<usize> {
        self.parsers.iter().position(|p| p == parser)
    }

    /// Macro-average of parser `p` over universe positions `members`.
    pub fn average(&self, p: usize, members: &[usize]) -> Result<S> {
        let width = self.universe.len();
        let row = &self.values[p * width..(p + 1) * width];
        let mut sum = S::zero();
        let mut count = 0usize;
        for &u in members {
            match row[u] {
                Some(v) => {
                    sum = sum + v;
                    count += 1;
                }
                None => match self.policy {
                    MissingPolicy::Zero => count += 1,
                    MissingPolicy::Skip => {}
                    MissingPolicy::Error => {
                        return Err(Error::MissingScore {
                            parser: self.parsers[p].clone(),
                            treebank: self.universe[u].clone(),
                            metric: self.metric.to_string(),
                        })
                    }
                },
            }
        }
        if count == 0 {
            return Err(Error::AllSkipped {
                parser: self.parsers[p].clone(),
                subset: format!("{:?}", members),
            });
        }
        Ok(sum / S::from_count(count))
    }

    /// Competition ranks for every parser, written into `ranks`.
    pub fn rank_into(&self, members: &[usize], scratch: &mut RankScratch<S>, ranks: &mut Vec<usize>) -> Result<()> {
        let n = self.parsers.len();
        scratch.averages.clear();
        for p in 0..n {
            let avg = self.average(p, members)?;
            scratch.averages.push(avg);
        }
        competition_ranks(&scratch.averages, &mut scratch.order, ranks);
        Ok(())
    }

    pub fn rank_subset(&self, subset: &SubsetSample) -> Result<SubsetRanking> {
        let mut scratch = RankScratch::default();
        let mut ranks = Vec::new();
        self.rank_into(&subset.members, &mut scratch, &mut ranks)?;
        Ok(SubsetRanking {
            subset: subset.clone(),
            metric: self.metric,
            ranks: self.parsers.iter().cloned().zip(ranks).collect(),
        })
    }
}

/// Reusable buffers for [`Ranker::rank_into`].
#[derive(Clone, Debug)]
pub struct RankScratch<S> {
    averages: Vec<S>,
    order: Vec<usize>,
}

impl<S> Default for RankScratch<S> {
    fn default() -> Self {
        RankScratch {
            averages: Vec::new(),
            order: Vec::new(),
        }
    }
}

/// Competition ("1224") ranking of `scores`, higher is better. Ties are
/// decided on exact equality.
pub fn competition_ranks<S: Scalar>(scores: &[S], order: &mut Vec<usize>, ranks: &mut Vec<usize>) {
    order.clear();
    order.extend(0..scores.len());
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("scores are finite"));
    ranks.clear();
    ranks.resize(scores.len(), 0);
    for (pos, &p) in order.iter().enumerate() {
        ranks[p] = if pos > 0 && scores[order[pos - 1]] == scores[p] {
            ranks[order[pos - 1]]
        } else {
            pos + 1
        };
    }
}

pub fn rank_on_subset<S: Scalar>(
    matrix: &ScoreMatrix<S>,
    universe: &[String],
    subset: &SubsetSample,
    metric: MetricKind,
) -> Result<SubsetRanking> {
    Ranker::new(matrix, universe, metric)?.rank_subset(subset)
}

/// Per-parser rank histograms; merging is plain addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankAccumulator {
    num_parsers: usize,
    // parser-major, bins 0..=num_parsers (bin 0 unused).
    hist: Vec<u64>,
    samples: u64,
}

impl RankAccumulator {
    pub fn new(num_parsers: usize) -> Self {
        RankAccumulator {
            num_parsers,
            hist: vec![0; num_parsers * (num_parsers + 1)],
            samples: 0,
        }
    }

    pub fn push(&mut self, ranks: &[usize]) {
        debug_assert_eq!(ranks.len(), self.num_parsers);
        let width = self.num_parsers + 1;
        for (p, &r) in ranks.iter().enumerate() {
            self.hist[p * width + r] += 1;
        }
        self.samples += 1;
    }

    pub fn merge(mut self, other: RankAccumulator) -> Self {
        for (a, b) in self.hist.iter_mut().zip(other.hist) {
            *a += b;
        }
        self.samples += other.samples;
        self
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Histogram of parser `p`, indexed by rank (index 0 always empty).
    pub fn histogram(&self, p: usize) -> &[u64] {
        let width = self.num_parsers + 1;
        &self.hist[p * width..(p + 1) * width]
    }

    /// One distribution per parser, sorted by median, then mean, then
    /// matrix order.
    pub fn finish<S: Scalar>(
        &self,
        parsers: &[String],
        metric: MetricKind,
        convention: QuartileConvention,
    ) -> Result<Vec<RankDistribution<S>>> {
        if self.samples == 0 {
            return Err(Error::NoSamples);
        }
        let mut out: Vec<(usize, RankDistribution<S>)> = parsers
            .iter()
            .enumerate()
            .map(|(p, name)| (p, RankDistribution::from_histogram(name, metric, self.histogram(p), convention)))
            .collect();
        out.sort_by(|(pa, a), (pb, b)| {
            a.median
                .partial_cmp(&b.median)
                .unwrap()
                .then(a.mean.partial_cmp(&b.mean).unwrap())
                .then(pa.cmp(pb))
        });
        Ok(out.into_iter().map(|(_, d)| d).collect())
    }
}

/// How box-plot quartiles are read off the rank multiset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum QuartileConvention {
    /// Medians of the lower and upper halves; the median joins both halves
    /// when the count is odd.
    #[default]
    TukeyHinges,
    /// Linear interpolation between order statistics at (n - 1)p.
    Linear,
}

/// Quartiles, whiskers and outliers of a rank distribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxStats<S> {
    pub q1: S,
    pub median: S,
    pub q3: S,
    pub whisker_low: usize,
    pub whisker_high: usize,
    pub outliers: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankDistribution<S> {
    pub parser: String,
    pub metric: MetricKind,
    pub best: usize,
    pub worst: usize,
    pub mean: S,
    pub median: S,
    /// Population standard deviation.
    pub stddev: S,
    pub histogram: BTreeMap<usize, u64>,
    pub q1: S,
    pub q3: S,
    pub whisker_low: usize,
    pub whisker_high: usize,
    pub outlier_ranks: Vec<usize>,
}

impl<S: Scalar> RankDistribution<S> {
    /// Build from counts indexed by rank. Panics on an empty histogram.
    pub fn from_histogram(parser: &str, metric: MetricKind, counts: &[u64], convention: QuartileConvention) -> Self {
        let hist = Histogram::new(counts);
        let n = hist.total;
        assert!(n > 0, "empty rank histogram");
        let (sum, sum_sq) = counts.iter().enumerate().fold((0u128, 0u128), |(s, q), (r, &c)| {
            (s + r as u128 * c as u128, q + (r * r) as u128 * c as u128)
        });
        let n128 = n as u128;
        let to_s = |x: u128| S::from_u128(x).expect("representable");
        let mean = to_s(sum) / to_s(n128);
        // n * sum(r^2) - sum(r)^2 is exact, so a single-bin histogram gives 0.
        let var_num = n128 * sum_sq - sum * sum;
        let stddev = (to_s(var_num) / to_s(n128 * n128)).sqrt();
        let b = hist.box_stats::<S>(convention);
        RankDistribution {
            parser: parser.to_string(),
            metric,
            best: hist.min(),
            worst: hist.max(),
            mean,
            median: b.median,
            stddev,
            histogram: counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(r, &c)| (r, c))
                .collect(),
            q1: b.q1,
            q3: b.q3,
            whisker_low: b.whisker_low,
            whisker_high: b.whisker_high,
            outlier_ranks: b.outliers,
        }
    }

    pub fn num_samples(&self) -> u64 {
        self.histogram.values().sum()
    }

    pub fn box_stats(&self) -> BoxStats<S> {
        BoxStats {
            q1: self.q1,
            median: self.median,
            q3: self.q3,
            whisker_low: self.whisker_low,
            whisker_high: self.whisker_high,
            outliers: self.outlier_ranks.clone(),
        }
    }
}

/// Box-plot statistics of a rank distribution under `convention`.
pub fn boxplot_stats<S: Scalar>(d: &RankDistribution<S>, convention: QuartileConvention) -> Result<BoxStats<S>> {
    let max = d.histogram.keys().next_back().copied().ok_or(Error::NoSamples)?;
    let mut counts = vec![0u64; max + 1];
    for (&r, &c) in &d.histogram {
        counts[r] = c;
    }
    Ok(Histogram::new(&counts).box_stats(convention))
}

/// Box-plot statistics of an explicit list of ranks.
pub fn boxplot_of_ranks<S: Scalar>(ranks: &[usize], convention: QuartileConvention) -> Result<BoxStats<S>> {
    let max = ranks.iter().copied().max().ok_or(Error::NoSamples)?;
    let mut counts = vec![0u64; max + 1];
    for &r in ranks {
        counts[r] += 1;
    }
    Ok(Histogram::new(&counts).box_stats(convention))
}

struct Histogram<'a> {
    counts: &'a [u64],
    total: u64,
}

impl<'a> Histogram<'a> {
    fn new(counts: &'a [u64]) -> Self {
        Histogram {
            counts,
            total: counts.iter().sum(),
        }
    }

    fn min(&self) -> usize {
        self.counts.iter().position(|&c| c > 0).unwrap()
    }

    fn max(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).unwrap()
    }

    /// k-th smallest observation, 0-based.
    fn order_stat(&self, k: u64) -> usize {
        let mut seen = 0;
        for (r, &c) in self.counts.iter().enumerate() {
            seen += c;
            if k < seen {
                return r;
            }
        }
        unreachable!("order statistic {k} beyond {}", self.total)
    }

    /// Median of order statistics lo..hi (exclusive).
    fn median_of<S: Scalar>(&self, lo: u64, hi: u64) -> S {
        let len = hi - lo;
        let mid = lo + len / 2;
        if len % 2 == 1 {
            S::from_count(self.order_stat(mid))
        } else {
            let two = S::from_u8(2).unwrap();
            (S::from_count(self.order_stat(mid - 1)) + S::from_count(self.order_stat(mid))) / two
        }
    }

    fn linear_quantile<S: Scalar>(&self, p: f64) -> S {
        let h = (self.total - 1) as f64 * p;
        let lo = h.floor() as u64;
        let frac = S::from_f64(h - lo as f64).unwrap();
        let a = S::from_count(self.order_stat(lo));
        let b = S::from_count(self.order_stat((lo + 1).min(self.total - 1)));
        a + (b - a) * frac
    }

    fn box_stats<S: Scalar>(&self, convention: QuartileConvention) -> BoxStats<S> {
        let n = self.total;
        let median = self.median_of::<S>(0, n);
        let (q1, q3) = match convention {
            QuartileConvention::TukeyHinges => {
                let half = n.div_ceil(2);
                (self.median_of(0, half), self.median_of(n - half, n))
            }
            QuartileConvention::Linear => (self.linear_quantile(0.25), self.linear_quantile(0.75)),
        };
        let k = S::from_f64(1.5).unwrap();
        let iqr = q3 - q1;
        let (lo_fence, hi_fence) = (q1 - k * iqr, q3 + k * iqr);
        let inside = |r: usize| {
            let x = S::from_count(r);
            x >= lo_fence && x <= hi_fence
        };
        let observed = || self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(r, _)| r);
        let whisker_low = observed().find(|&r| inside(r)).unwrap_or_else(|| self.min());
        let whisker_high = observed().rfind(|&r| inside(r)).unwrap_or_else(|| self.max());
        BoxStats {
            q1,
            median,
            q3,
            whisker_low,
            whisker_high,
            outliers: observed().filter(|&r| !inside(r)).collect(),
        }
    }
}

/// Rank distributions over an arbitrary sample stream, sequentially.
pub fn aggregate<S: Scalar, I>(
    matrix: &ScoreMatrix<S>,
    universe: &[String],
    samples: I,
    metric: MetricKind,
) -> Result<Vec<RankDistribution<S>>>
where
    I: IntoIterator<Item = SubsetSample>,
{
    let ranker = Ranker::new(matrix, universe, metric)?;
    let mut acc = RankAccumulator::new(ranker.parsers().len());
    let mut scratch = RankScratch::default();
    let mut ranks = Vec::new();
    for s in samples {
        ranker.rank_into(&s.members, &mut scratch, &mut ranks)?;
        acc.push(&ranks);
    }
    acc.finish(ranker.parsers(), metric, QuartileConvention::default())
}

const CHUNK: u64 = 4096;

/// Histograms for every sample of `sampler`, computed on the current rayon
/// pool. The result does not depend on the number of workers.
pub fn accumulate_parallel<S: Scalar>(ranker: &Ranker<S>, sampler: &Sampler) -> Result<RankAccumulator> {
    let n = ranker.parsers().len();
    let run = |members: &mut dyn Iterator<Item = SubsetSample>| -> Result<RankAccumulator> {
        let mut acc = RankAccumulator::new(n);
        let mut scratch = RankScratch::default();
        let mut ranks = Vec::with_capacity(n);
        for s in members {
            ranker.rank_into(&s.members, &mut scratch, &mut ranks)?;
            acc.push(&ranks);
        }
        Ok(acc)
    };
    let reduce = |a: Result<RankAccumulator>, b: Result<RankAccumulator>| Ok(a?.merge(b?));
    if sampler.is_indexable() {
        let chunks = sampler.num_samples().div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let end = ((c + 1) * CHUNK).min(sampler.num_samples());
                run(&mut (c * CHUNK..end).map(|i| sampler.draw_at(i)))
            })
            .reduce(|| Ok(RankAccumulator::new(n)), reduce)
    } else {
        let all: Vec<SubsetSample> = sampler.iter().collect();
        all.par_chunks(CHUNK as usize)
            .map(|chunk| run(&mut chunk.iter().cloned()))
            .reduce(|| Ok(RankAccumulator::new(n)), reduce)
    }
}

/// Rank distributions over every sample of `sampler`.
pub fn aggregate_sampler<S: Scalar>(
    matrix: &ScoreMatrix<S>,
    sampler: &Sampler,
    metric: MetricKind,
    convention: QuartileConvention,
) -> Result<Vec<RankDistribution<S>>> {
    let ranker = Ranker::new(matrix, sampler.universe(), metric)?;
    accumulate_parallel(&ranker, sampler)?.finish(ranker.parsers(), metric, convention)
}
