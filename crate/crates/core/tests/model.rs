use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use subsetbench_core::model::ScoreMatrix;
use subsetbench_core::{MetricKind, MissingPolicy, SubsetDef, TableFormat};

fn matrix_from(scores: &[f64]) -> (ScoreMatrix<f64>, Vec<String>) {
    let mut m = ScoreMatrix::new(MissingPolicy::Error);
    let ids: Vec<String> = (0..scores.len()).map(|i| format!("tb{i}")).collect();
    for (t, &v) in ids.iter().zip(scores) {
        m.insert("P", t, MetricKind::Las, v).unwrap();
    }
    (m, ids)
}

proptest! {
    #[test]
    fn macro_average_ignores_member_order(
        scores in proptest::collection::vec(0.0f64..=100.0, 1..12),
        seed in any::<u64>(),
    ) {
        let (m, ids) = matrix_from(&scores);
        let mut shuffled = ids.clone();
        let k = (seed as usize) % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        let a = m.macro_average("P", &SubsetDef::new("a", ids).unwrap(), MetricKind::Las).unwrap();
        let b = m.macro_average("P", &SubsetDef::new("b", shuffled).unwrap(), MetricKind::Las).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        let oracle = scores.iter().sum::<f64>() / scores.len() as f64;
        prop_assert!((a - oracle).abs() < 1e-9);
    }

    #[test]
    fn macro_average_of_constant(c in 0.0f64..=100.0, n in 1usize..20) {
        let (m, ids) = matrix_from(&vec![c; n]);
        let avg = m.macro_average("P", &SubsetDef::new("s", ids).unwrap(), MetricKind::Las).unwrap();
        prop_assert!((avg - c).abs() < 1e-9);
    }

    #[test]
    fn table_round_trip(
        cells in proptest::collection::vec((0usize..4, 0usize..6, 0usize..5, 0u32..=1_000_000), 1..40),
        csv in any::<bool>(),
    ) {
        let format = if csv { TableFormat::Csv } else { TableFormat::Tsv };
        let mut m = ScoreMatrix::<f64>::default();
        for (p, t, k, v) in cells {
            let value = v as f64 / 10_000.0;
            let _ = m.insert(&format!("p{p}"), &format!("t{t}"), MetricKind::ALL[k], value);
        }
        let mut buf = Vec::new();
        m.write(&mut buf, format).unwrap();
        let back = ScoreMatrix::<f64>::read(buf.as_slice(), format).unwrap();
        prop_assert_eq!(back.len(), m.len());
        for p in m.parsers() {
            for t in m.treebanks() {
                for k in MetricKind::ALL {
                    prop_assert_eq!(back.get(p, t, k), m.get(p, t, k));
                }
            }
        }
    }
}

#[test]
fn f32_matrix_agrees_with_f64() {
    let text = "parser\ttreebank\tmetric\tvalue\nA\tx\tLAS\t81.25\nA\ty\tLAS\t70.5\n";
    let m64 = ScoreMatrix::<f64>::read(text.as_bytes(), TableFormat::Tsv).unwrap();
    let m32 = ScoreMatrix::<f32>::read(text.as_bytes(), TableFormat::Tsv).unwrap();
    let s = SubsetDef::new("s", vec!["x".into(), "y".into()]).unwrap();
    let a = m64.macro_average("A", &s, MetricKind::Las).unwrap();
    let b = m32.macro_average("A", &s, MetricKind::Las).unwrap();
    assert_abs_diff_eq!(a, 75.875);
    assert_abs_diff_eq!(b as f64, a, epsilon = 1e-5);
}

#[test]
fn bundled_tables_load_from_disk() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let meta = subsetbench_core::Metadata::load(format!("{root}/treebanks.tsv")).unwrap();
    for name in subsetbench_core::data::subset_names() {
        let s = SubsetDef::load(format!("{root}/subsets/{name}.json")).unwrap();
        s.validate(&meta).unwrap();
        assert_eq!(s, subsetbench_core::data::subset(name).unwrap());
    }
}
