mod common;

use proptest::prelude::*;

use xcoref::scoring::metrics::{b_cubed, ceaf_e, ceaf_e_similarity, conll_f1, muc, MetricResult};
use xcoref::scoring::{evaluate, ChainSet};

fn partition(labels: &[u8]) -> ChainSet<u32> {
    let mut chains: Vec<Vec<u32>> = vec![Vec::new(); 8];
    for (m, &l) in labels.iter().enumerate() {
        chains[l as usize % 8].push(m as u32);
    }
    ChainSet::new(chains)
}

fn labels(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..8, 1..=max)
}

fn pair(max: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    labels(max).prop_flat_map(|g| {
        let n = g.len();
        (Just(g), prop::collection::vec(0u8..8, n))
    })
}

fn in_unit(m: &MetricResult) -> bool {
    [m.recall, m.precision, m.f1].iter().all(|x| (0.0..=1.0).contains(x))
}

#[test]
fn singletons_against_one_chain() {
    let gold = ChainSet::new(vec![vec![1, 2, 3, 4]]);
    let system = ChainSet::new(vec![vec![1], vec![2], vec![3], vec![4]]);
    let m = muc(&gold, &system);
    assert_eq!((m.recall, m.precision), (0.0, 0.0));
    let b = b_cubed(&gold, &system);
    assert!((b.recall - 0.25).abs() < 1e-12 && b.precision == 1.0);
    // Best match pairs the gold chain with one singleton: 2/5.
    let c = ceaf_e(&gold, &system);
    assert!((c.recall - 0.4).abs() < 1e-12 && (c.precision - 0.1).abs() < 1e-12);
}

#[test]
fn conll_average_edges() {
    let one = MetricResult::new(1.0, 1.0);
    assert_eq!(conll_f1(&[one, one, one]), 1.0);
    assert_eq!(conll_f1(&[MetricResult::ZERO; 3]), 0.0);
}

proptest! {
    #[test]
    fn identity_scores_one(l in labels(20)) {
        let x = partition(&l);
        let e = evaluate(&x, &x).unwrap();
        for m in [e.b_cubed, e.ceaf_e] {
            prop_assert_eq!((m.recall, m.precision, m.f1), (1.0, 1.0, 1.0));
        }
        // Without links MUC has nothing to score and reports zero.
        let has_links = x.chains().iter().any(|c| c.len() > 1);
        let want = if has_links { 1.0 } else { 0.0 };
        prop_assert_eq!((e.muc.recall, e.muc.precision, e.muc.f1), (want, want, want));
    }

    #[test]
    fn recall_and_precision_swap((g, s) in pair(20)) {
        let (g, s) = (partition(&g), partition(&s));
        let forward = muc(&g, &s);
        let backward = muc(&s, &g);
        prop_assert_eq!(forward.recall, backward.precision);
        prop_assert_eq!(forward.precision, backward.recall);
        let forward = b_cubed(&g, &s);
        let backward = b_cubed(&s, &g);
        prop_assert_eq!(forward.recall, backward.precision);
        prop_assert_eq!(forward.precision, backward.recall);
    }

    #[test]
    fn outputs_in_unit_interval((g, s) in pair(25)) {
        let e = evaluate(&partition(&g), &partition(&s)).unwrap();
        prop_assert!(in_unit(&e.muc) && in_unit(&e.b_cubed) && in_unit(&e.ceaf_e));
        prop_assert!((0.0..=1.0).contains(&e.conll_f1));
    }

    #[test]
    fn merging_system_chains_never_raises_b3_precision((g, s) in pair(20), a in 0u8..8, b in 0u8..8) {
        let gold = partition(&g);
        let split = partition(&s);
        let merged: Vec<u8> = s.iter().map(|&x| if x == b { a } else { x }).collect();
        let merged = partition(&merged);
        let before = b_cubed(&gold, &split);
        let after = b_cubed(&gold, &merged);
        prop_assert!(after.precision <= before.precision + 1e-12);
        prop_assert!(after.recall + 1e-12 >= before.recall);
    }

    #[test]
    fn ceaf_matches_enumeration(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rand::Rng::gen_range(&mut rng, 1..=9);
        let g = common::random_partition(&mut rng, n, 7);
        let s = common::random_partition(&mut rng, n, 7);
        prop_assert_eq!(ceaf_e_similarity(&g, &s), common::brute_force_ceaf(&g, &s));
    }
}
