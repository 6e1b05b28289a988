use proptest::prelude::*;
use subsetbench_core::model::ScoreMatrix;
use subsetbench_core::ranking::{
    accumulate_parallel, aggregate, competition_ranks, QuartileConvention, RankAccumulator, RankScratch, Ranker,
};
use subsetbench_core::{MetricKind, Sampler, SamplerConfig};

fn build(rows: &[Vec<f64>]) -> (ScoreMatrix<f64>, Vec<String>) {
    let mut m = ScoreMatrix::default();
    let ntb = rows[0].len();
    let tbs: Vec<String> = (0..ntb).map(|t| format!("tb{t:02}")).collect();
    for (p, row) in rows.iter().enumerate() {
        for (t, &v) in row.iter().enumerate() {
            m.insert(&format!("p{p}"), &tbs[t], MetricKind::Las, v).unwrap();
        }
    }
    (m, tbs)
}

fn table() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..6, 3usize..8).prop_flat_map(|(np, nt)| {
        proptest::collection::vec(proptest::collection::vec((0u32..=400).prop_map(|x| x as f64 / 4.0), nt), np)
    })
}

fn ranks(scores: &[f64]) -> Vec<usize> {
    let (mut o, mut r) = (Vec::new(), Vec::new());
    competition_ranks(scores, &mut o, &mut r);
    r
}

/// Ranks straight from the definition: 1 + number of strictly better parsers.
fn oracle(scores: &[f64]) -> Vec<usize> {
    scores.iter().map(|s| 1 + scores.iter().filter(|o| *o > s).count()).collect()
}

proptest! {
    #[test]
    fn competition_matches_definition(scores in proptest::collection::vec((0u32..20).prop_map(f64::from), 1..10)) {
        prop_assert_eq!(ranks(&scores), oracle(&scores));
    }

    #[test]
    fn monotone_transform_keeps_ranks(scores in proptest::collection::vec(0.0f64..100.0, 1..10)) {
        let transformed: Vec<f64> = scores.iter().map(|s| (s / 10.0).exp() * 3.0 + 1.0).collect();
        prop_assert_eq!(ranks(&scores), ranks(&transformed));
    }

    #[test]
    fn dominated_parser_changes_nothing(rows in table(), seed in any::<u64>()) {
        let (m, tbs) = build(&rows);
        let mut extended = rows.clone();
        extended.push(vec![0.0; rows[0].len()]);
        // Strictly below every existing cell.
        for (t, v) in extended.last_mut().unwrap().iter_mut().enumerate() {
            *v = rows.iter().map(|r| r[t]).fold(f64::INFINITY, f64::min) - 1.0;
        }
        prop_assume!(extended.last().unwrap().iter().all(|&v| v >= 0.0));
        let (m2, _) = build(&extended);
        let mut cfg = SamplerConfig::new(tbs.clone());
        cfg.subset_size = 2;
        cfg.num_samples = 50;
        cfg.seed = seed;
        let sampler = Sampler::new(cfg).unwrap();
        let r1 = Ranker::new(&m, sampler.universe(), MetricKind::Las).unwrap();
        let r2 = Ranker::new(&m2, sampler.universe(), MetricKind::Las).unwrap();
        let (mut s1, mut s2) = (RankScratch::default(), RankScratch::default());
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for x in sampler.iter() {
            r1.rank_into(&x.members, &mut s1, &mut a).unwrap();
            r2.rank_into(&x.members, &mut s2, &mut b).unwrap();
            prop_assert_eq!(&b[..a.len()], &a[..]);
            prop_assert_eq!(b[a.len()], rows.len() + 1);
        }
    }

    #[test]
    fn merge_is_order_independent(
        hists in proptest::collection::vec(proptest::collection::vec(proptest::collection::vec(1usize..=4, 4), 0..20), 1..6),
        rot in 0usize..6,
    ) {
        let accs: Vec<RankAccumulator> = hists
            .iter()
            .map(|chunk| {
                let mut a = RankAccumulator::new(4);
                for r in chunk {
                    a.push(r);
                }
                a
            })
            .collect();
        let forward = accs.iter().cloned().fold(RankAccumulator::new(4), RankAccumulator::merge);
        let mut rotated = accs.clone();
        rotated.rotate_left(rot % accs.len());
        rotated.reverse();
        let backward = rotated.into_iter().fold(RankAccumulator::new(4), RankAccumulator::merge);
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn distribution_invariants(rows in table(), seed in any::<u64>()) {
        let (m, tbs) = build(&rows);
        let mut cfg = SamplerConfig::new(tbs);
        cfg.subset_size = 2;
        cfg.num_samples = 200;
        cfg.seed = seed;
        let sampler = Sampler::new(cfg).unwrap();
        let dists = aggregate(&m, sampler.universe(), sampler.iter(), MetricKind::Las).unwrap();
        for d in &dists {
            prop_assert_eq!(d.histogram.values().sum::<u64>(), 200);
            prop_assert!(d.best as f64 <= d.q1 && d.q1 <= d.median && d.median <= d.q3 && d.q3 <= d.worst as f64);
            prop_assert_eq!(d.stddev == 0.0, d.histogram.len() == 1);
        }
        prop_assert!(dists.windows(2).all(|w| (w[0].median, w[0].mean) <= (w[1].median, w[1].mean)));
    }
}

#[test]
fn parallel_matches_sequential_for_every_pool_size() {
    let rows: Vec<Vec<f64>> = (0..6)
        .map(|p| (0..20).map(|t| ((p * 37 + t * 11) % 50) as f64 + 40.0).collect())
        .collect();
    let (m, tbs) = build(&rows);
    let mut cfg = SamplerConfig::new(tbs);
    cfg.num_samples = 10_000;
    cfg.subset_size = 5;
    let sampler = Sampler::new(cfg).unwrap();
    let ranker = Ranker::new(&m, sampler.universe(), MetricKind::Las).unwrap();
    let seq = aggregate(&m, sampler.universe(), sampler.iter(), MetricKind::Las).unwrap();
    for threads in [1, 3, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let acc = pool.install(|| accumulate_parallel(&ranker, &sampler)).unwrap();
        let par = acc
            .finish::<f64>(ranker.parsers(), MetricKind::Las, QuartileConvention::TukeyHinges)
            .unwrap();
        assert_eq!(par, seq);
    }
}
