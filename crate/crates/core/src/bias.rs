//! Subsets on which a parser reaches its extreme ranks, and whether their
//! composition is surprising under uniform sampling.

use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rand_core::RngCore;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergeom::{HypergeomParams, TailMode};
use crate::model::{Metadata, SubsetDef, TreebankMeta};
use crate::ranking::{RankScratch, Ranker};
use crate::sampler::{keyed_rng, Sampler, SubsetSample};
use crate::scalar::Scalar;

/// Predicate over treebank metadata marking members of a category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    LowResource,
    Family(String),
    Language(String),
}

impl Tag {
    pub fn matches(&self, meta: &TreebankMeta) -> bool {
        match self {
            Tag::LowResource => meta.low_resource,
            Tag::Family(f) => &meta.family == f,
            Tag::Language(l) => &meta.language == l,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Tag::LowResource => "lr",
            Tag::Family(f) | Tag::Language(f) => f,
        }
    }

    /// Fails when no metadata record carries the tag at all.
    pub fn check_present(&self, meta: &Metadata) -> Result<()> {
        if matches!(self, Tag::LowResource) || meta.records().iter().any(|m| self.matches(m)) {
            Ok(())
        } else {
            Err(Error::UnknownTag(self.to_string()))
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::LowResource => f.write_str("lr"),
            Tag::Family(x) => write!(f, "family={x}"),
            Tag::Language(x) => write!(f, "language={x}"),
        }
    }
}

impl FromStr for Tag {
    type Err = Error;

    /// `lr`, `low_resource`, `family=<name>` or `language=<name>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('=') {
            None if s == "lr" || s == "low_resource" => Ok(Tag::LowResource),
            Some(("family", v)) if !v.is_empty() => Ok(Tag::Family(v.to_string())),
            Some(("language", v)) if !v.is_empty() => Ok(Tag::Language(v.to_string())),
            _ => Err(Error::InvalidTag(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremeMode {
    Best,
    Worst,
}

/// A subset together with the rank the parser obtained on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exemplar {
    pub sample: SubsetSample,
    pub rank: usize,
}

// Tie-breaking stream for exemplar selection, separate from subset draws.
const PRIORITY_DOMAIN: u64 = 0x9e37_79b9_7f4a_7c15;

fn priority(seed: u64, index: u64) -> u64 {
    keyed_rng(seed ^ PRIORITY_DOMAIN, index).next_u64()
}

/// Keeps the `k` most extreme samples; ties inside a rank are decided by a
/// seeded per-sample priority, which makes the choice uniform among equally
/// ranked samples and independent of scan order.
#[derive(Clone, Debug)]
struct ExtremeKeeper {
    k: usize,
    mode: ExtremeMode,
    seed: u64,
    heap: BinaryHeap<(usize, u64, u64, Vec<usize>)>,
}

impl ExtremeKeeper {
    fn new(k: usize, mode: ExtremeMode, seed: u64) -> Self {
        ExtremeKeeper {
            k,
            mode,
            seed,
            heap: BinaryHeap::with_capacity(k + 1),
        }
    }

    fn key_rank(&self, rank: usize) -> usize {
        match self.mode {
            ExtremeMode::Best => rank,
            ExtremeMode::Worst => usize::MAX - rank,
        }
    }

    fn offer(&mut self, sample: &SubsetSample, rank: usize) {
        let key = (self.key_rank(rank), priority(self.seed, sample.index), sample.index);
        if self.heap.len() == self.k {
            let top = self.heap.peek().unwrap();
            if key >= (top.0, top.1, top.2) {
                return;
            }
        }
        self.heap.push((key.0, key.1, key.2, sample.members.clone()));
        if self.heap.len() > self.k {
            self.heap.pop();
        }
    }

    fn merge(mut self, other: ExtremeKeeper) -> Self {
        for entry in other.heap {
            self.heap.push(entry);
            if self.heap.len() > self.k {
                self.heap.pop();
            }
        }
        self
    }

    fn finish(self) -> Vec<Exemplar> {
        let mode = self.mode;
        let mut entries = self.heap.into_vec();
        entries.sort();
        entries
            .into_iter()
            .map(|(r, _, index, members)| Exemplar {
                sample: SubsetSample { index, members },
                rank: match mode {
                    ExtremeMode::Best => r,
                    ExtremeMode::Worst => usize::MAX - r,
                },
            })
            .collect()
    }
}

/// `k` subsets on which `parser` reaches its best (or worst) rank. When more
/// than `k` qualify, a seeded uniform choice is made; when fewer, the next
/// ranks fill the list. Results are ordered from most to least extreme.
pub fn find_extreme_subsets<S: Scalar, I>(
    ranker: &Ranker<S>,
    samples: I,
    parser: &str,
    mode: ExtremeMode,
    k: usize,
    seed: u64,
) -> Result<Vec<Exemplar>>
where
    I: IntoIterator<Item = SubsetSample>,
{
    let p = ranker
        .parser_position(parser)
        .ok_or_else(|| Error::UnknownParser(parser.to_string()))?;
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let mut keeper = ExtremeKeeper::new(k, mode, seed);
    let mut scratch = RankScratch::default();
    let mut ranks = Vec::new();
    let mut any = false;
    for s in samples {
        any = true;
        ranker.rank_into(&s.members, &mut scratch, &mut ranks)?;
        keeper.offer(&s, ranks[p]);
    }
    if !any {
        return Err(Error::NoSamples);
    }
    Ok(keeper.finish())
}

/// [`find_extreme_subsets`] over a sampler, sharded across the rayon pool.
pub fn find_extreme_subsets_par<S: Scalar>(
    ranker: &Ranker<S>,
    sampler: &Sampler,
    parser: &str,
    mode: ExtremeMode,
    k: usize,
    seed: u64,
) -> Result<Vec<Exemplar>> {
    if !sampler.is_indexable() {
        return find_extreme_subsets(ranker, sampler.iter(), parser, mode, k, seed);
    }
    let p = ranker
        .parser_position(parser)
        .ok_or_else(|| Error::UnknownParser(parser.to_string()))?;
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    const CHUNK: u64 = 4096;
    let chunks = sampler.num_samples().div_ceil(CHUNK);
    let keeper = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<ExtremeKeeper> {
            let mut keeper = ExtremeKeeper::new(k, mode, seed);
            let mut scratch = RankScratch::default();
            let mut ranks = Vec::new();
            for i in c * CHUNK..((c + 1) * CHUNK).min(sampler.num_samples()) {
                let s = sampler.draw_at(i);
                ranker.rank_into(&s.members, &mut scratch, &mut ranks)?;
                keeper.offer(&s, ranks[p]);
            }
            Ok(keeper)
        })
        .reduce(|| Ok(ExtremeKeeper::new(k, mode, seed)), |a, b| Ok(a?.merge(b?)))?;
    Ok(keeper.finish())
}

/// Average composition of a group of subsets.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionStats<S> {
    pub label: String,
    pub num_subsets: usize,
    /// Mean over subsets of the mean member size, in thousands of tokens.
    pub avg_size_tokens: S,
    /// Mean over subsets of the fraction of members carrying each tag.
    pub ratios: Vec<(String, S)>,
}

impl<S: Scalar> CompositionStats<S> {
    pub fn ratio(&self, tag: &str) -> Option<S> {
        self.ratios.iter().find(|(t, _)| t == tag).map(|&(_, r)| r)
    }
}

fn resolve<'a>(meta: &'a Metadata, id: &str) -> Result<&'a TreebankMeta> {
    meta.get(id).ok_or_else(|| Error::UnknownTreebank(id.to_string()))
}

pub fn composition<S: Scalar>(
    label: &str,
    subsets: &[SubsetDef],
    meta: &Metadata,
    tags: &[Tag],
) -> Result<CompositionStats<S>> {
    if subsets.is_empty() {
        return Err(Error::NoSamples);
    }
    let mut size_sum = S::zero();
    let mut ratio_sums = vec![S::zero(); tags.len()];
    for s in subsets {
        if s.is_empty() {
            return Err(Error::EmptySubset(s.name.clone()));
        }
        let members = s.members.iter().map(|m| resolve(meta, m)).collect::<Result<Vec<_>>>()?;
        let n = S::from_count(members.len());
        let tokens: u64 = members.iter().map(|m| m.size_tokens).sum();
        size_sum = size_sum + S::from_u64(tokens).unwrap() / n / S::from_u32(1000).unwrap();
        for (acc, tag) in ratio_sums.iter_mut().zip(tags) {
            let marked = members.iter().filter(|m| tag.matches(m)).count();
            *acc = *acc + S::from_count(marked) / n;
        }
    }
    let count = S::from_count(subsets.len());
    Ok(CompositionStats {
        label: label.to_string(),
        num_subsets: subsets.len(),
        avg_size_tokens: size_sum / count,
        ratios: tags
            .iter()
            .zip(ratio_sums)
            .map(|(t, s)| (t.label().to_string(), s / count))
            .collect(),
    })
}

/// Tag counts of one exemplar and their upper-tail probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct ExemplarDetail<S> {
    pub members: Vec<String>,
    pub rank: usize,
    pub counts: Vec<(String, usize)>,
    pub p_values: Vec<(String, S)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremeGroup<S> {
    /// Most extreme rank among the exemplars.
    pub rank: usize,
    pub exemplars: Vec<ExemplarDetail<S>>,
    pub composition: CompositionStats<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutlierReport<S> {
    pub parser: String,
    pub tail: TailMode,
    /// Population parameters used for each tag's p-values.
    pub params: Vec<(String, HypergeomParams)>,
    pub best: ExtremeGroup<S>,
    pub worst: ExtremeGroup<S>,
}

impl<S: Scalar> OutlierReport<S> {
    /// Best-minus-worst mean member size, thousands of tokens.
    pub fn size_delta(&self) -> S {
        self.best.composition.avg_size_tokens - self.worst.composition.avg_size_tokens
    }

    /// Best-minus-worst tag ratios.
    pub fn ratio_deltas(&self) -> Vec<(String, S)> {
        self.best
            .composition
            .ratios
            .iter()
            .zip(&self.worst.composition.ratios)
            .map(|((t, b), (_, w))| (t.clone(), *b - *w))
            .collect()
    }
}

/// Assemble the qualitative and quantitative view of a parser's extreme
/// subsets. `universe` is the population the samples were drawn from.
pub fn bias_report<S: Scalar>(
    parser: &str,
    best: &[Exemplar],
    worst: &[Exemplar],
    universe: &[String],
    meta: &Metadata,
    tags: &[Tag],
    tail: TailMode,
) -> Result<OutlierReport<S>> {
    if best.is_empty() || worst.is_empty() {
        return Err(Error::NoSamples);
    }
    let population = universe.iter().map(|id| resolve(meta, id)).collect::<Result<Vec<_>>>()?;
    let draws = best[0].sample.members.len() as u64;
    let params = tags
        .iter()
        .map(|t| {
            let marked = population.iter().filter(|m| t.matches(m)).count() as u64;
            HypergeomParams::new(universe.len() as u64, marked, draws).map(|p| (t.label().to_string(), p))
        })
        .collect::<Result<Vec<_>>>()?;

    let group = |label: &str, exemplars: &[Exemplar]| -> Result<ExtremeGroup<S>> {
        let defs: Vec<SubsetDef> = exemplars.iter().map(|e| e.sample.to_subset_def(universe)).collect();
        let mut details = Vec::with_capacity(exemplars.len());
        for (e, def) in exemplars.iter().zip(&defs) {
            let members = def.members.iter().map(|m| resolve(meta, m)).collect::<Result<Vec<_>>>()?;
            let mut counts = Vec::with_capacity(tags.len());
            let mut p_values = Vec::with_capacity(tags.len());
            for (tag, (label, params)) in tags.iter().zip(&params) {
                let c = members.iter().filter(|m| tag.matches(m)).count();
                let params = HypergeomParams::new(params.population, params.marked, members.len() as u64)?;
                counts.push((label.clone(), c));
                p_values.push((label.clone(), params.tail::<S>(c as i64, tail)));
            }
            details.push(ExemplarDetail {
                members: def.members.clone(),
                rank: e.rank,
                counts,
                p_values,
            });
        }
        Ok(ExtremeGroup {
            rank: exemplars[0].rank,
            exemplars: details,
            composition: composition(label, &defs, meta, tags)?,
        })
    };

    let best = group("best", best)?;
    let worst = group("worst", worst)?;
    Ok(OutlierReport {
        parser: parser.to_string(),
        tail,
        params,
        best,
        worst,
    })
}
