mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use serde_json::json;

use xcoref::corpus::{chain_partition_check, load_corpus, read_corpus, Chain, CorpusBundle};
use xcoref::sieves::{replay, run_pipeline, PipelineConfig, PipelineError, PipelineOutput, STAGES};
use xcoref::type_scoring::{BaseType, ComparisonMatrix, ConceptType};
use xcoref::vectors::VectorStore;

fn micro() -> (CorpusBundle, VectorStore) {
    (
        load_corpus(common::micro("micro.jsonl")).unwrap(),
        VectorStore::load(common::micro("vectors.txt"), None).unwrap(),
    )
}

fn sets(chains: &[Chain]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = chains.iter().map(|c| c.mention_ids.iter().cloned().collect()).collect();
    out.sort();
    out
}

fn chain_with<'a>(chains: &'a [Chain], mention: &str) -> &'a Chain {
    chains.iter().find(|c| c.mention_ids.contains(mention)).unwrap()
}

fn together(chains: &[Chain], a: &str, b: &str) -> bool {
    chain_with(chains, a).mention_ids.contains(b)
}

#[test]
fn micro_stages_match_expected_partitions() {
    let (bundle, store) = micro();
    let out = run_pipeline(&bundle, &store, &PipelineConfig::default()).unwrap();
    let expected: BTreeMap<String, Vec<Vec<String>>> =
        serde_json::from_str(&std::fs::read_to_string(common::micro("expected_stages.json")).unwrap()).unwrap();
    assert_eq!(out.stages.len(), STAGES.len());
    for (stage, chains) in &out.stages {
        assert_eq!(&sets(chains), &expected[stage], "stage {stage}");
    }
}

#[test]
fn micro_quoted_pairs_resolve_in_their_sieve() {
    let (bundle, store) = micro();
    let out = run_pipeline(&bundle, &store, &PipelineConfig::default()).unwrap();
    let at = |stage: &str| out.stage(stage).unwrap();
    // "Kim" and "North Korean dictator Kim Jong Un"
    assert!(!together(at("S1"), "m17", "m03") && together(at("S2"), "m17", "m03"));
    // "Teresa May, the prime minister" and "the prime minister"
    assert!(!together(at("S2"), "m19", "m36") && together(at("S3"), "m19", "m36"));
    // "illegal aliens" and "undocumented immigrants"
    assert!(!together(at("S3"), "m08", "m22") && together(at("S4"), "m08", "m22"));
    // "American officials" and "the United States"
    assert!(!together(at("S3"), "m21", "m10") && together(at("S4"), "m21", "m10"));
    // "the Trump-Kim meeting" and "discussed an issue"
    assert!(!together(at("S4"), "m05", "m20") && together(at("S5"), "m05", "m20"));
}

#[test]
fn micro_split_on_conflicting_links() {
    let (bundle, store) = micro();
    let out = run_pipeline(&bundle, &store, &PipelineConfig::default()).unwrap();
    let init = out.stage("init").unwrap();
    assert!(!together(init, "m29", "m30"));
    // The untitled pronoun follows the group kept under the chain id.
    assert_eq!(chain_with(init, "m33").id, "d3-c1");
    assert_eq!(chain_with(init, "m29").id, "d3-c1#Moon_Jae-in");
}

#[test]
fn micro_trace_rules_by_sieve() {
    let (bundle, store) = micro();
    let out = run_pipeline(&bundle, &store, &PipelineConfig::default()).unwrap();
    let mut rules: BTreeMap<u8, BTreeSet<&str>> = BTreeMap::new();
    for e in &out.trace {
        rules.entry(e.sieve).or_default().insert(e.rule.as_str());
        assert!(e.rule.starts_with(&format!("s{}_", e.sieve)), "{e}");
        if matches!(e.rule.as_str(), "s3_repr" | "s3_tokens" | "s3_cosine" | "s4_country") {
            assert!(e.score.is_some(), "{e}");
        }
    }
    assert_eq!(rules[&1], BTreeSet::from(["s1_wiki"]));
    assert_eq!(rules[&2], BTreeSet::from(["s2_compound", "s2_head"]));
    assert_eq!(rules[&3], BTreeSet::from(["s3_cosine", "s3_repr", "s3_tokens"]));
    assert_eq!(rules[&4], BTreeSet::from(["s4_core", "s4_country"]));
    assert_eq!(rules[&5], BTreeSet::from(["s5_cluster"]));
}

#[test]
fn empty_corpus_gives_nothing() {
    let bundle = CorpusBundle::empty("t");
    let store = VectorStore::from_entries([("x", vec![1.0f32])]).unwrap();
    let out = run_pipeline(&bundle, &store, &PipelineConfig::default()).unwrap();
    assert!(out.chains.is_empty() && out.trace.is_empty());
}

fn tiny(words: &[&str], mentions: serde_json::Value, chains: serde_json::Value) -> CorpusBundle {
    let tokens: Vec<_> = words
        .iter()
        .enumerate()
        .map(|(i, w)| json!({"index": i, "text": w, "lemma": w, "pos": "NN", "stop": false}))
        .collect();
    let line = json!({"doc_id": "d", "sentences": [tokens], "mentions": mentions, "chains": chains});
    read_corpus(line.to_string().as_bytes(), "t").unwrap()
}

fn orthogonal_store(words: &[&str]) -> VectorStore {
    VectorStore::from_entries(words.iter().enumerate().map(|(i, w)| {
        let mut v = vec![0.0f32; words.len()];
        v[i] = 1.0;
        (w.to_string(), v)
    }))
    .unwrap()
}

#[test]
fn unique_titles_and_orthogonal_vectors_merge_nothing() {
    let words = ["alpha", "beta", "gamma", "delta"];
    let mentions: Vec<_> = (0..4)
        .map(|i| {
            json!({"id": format!("m{i}"), "sent": 0, "start": i, "end": i, "head": i,
                   "ne": "PERSON", "wiki": format!("T{i}"), "senses": [["noun.person", 1]]})
        })
        .collect();
    let bundle = tiny(&words, json!(mentions), json!([]));
    let out = run_pipeline(&bundle, &orthogonal_store(&words), &PipelineConfig::default()).unwrap();
    assert!(out.trace.is_empty());
    assert_eq!(sets(&out.chains), sets(&bundle.chains));
}

#[test]
fn group_chain_with_unrelated_members_splits_in_s4() {
    let words = ["officials", "economy", "weather"];
    let group = |i: usize| {
        json!({"id": format!("m{i}"), "sent": 0, "start": i, "end": i, "head": i,
               "senses": [["noun.group", 1]]})
    };
    let bundle = tiny(&words, json!([group(0), group(1)]), json!([{"id": "c", "mentions": ["m0", "m1"]}]));
    let out = run_pipeline(&bundle, &orthogonal_store(&words), &PipelineConfig::default()).unwrap();
    assert_eq!(out.stage("S3").unwrap().len(), 1);
    assert_eq!(out.stage("S4").unwrap().len(), 2);
    assert!(chain_partition_check(&out.chains, &bundle.mentions));
}

#[test]
fn invalid_threshold_rejected() {
    let (bundle, store) = micro();
    let config = PipelineConfig {
        t_cl: 0.0,
        ..PipelineConfig::default()
    };
    assert!(matches!(run_pipeline(&bundle, &store, &config), Err(PipelineError::Config(_))));
}

#[test]
fn disabling_a_matrix_entry_blocks_its_merges() {
    let (bundle, store) = micro();
    let person_ne = ConceptType {
        base: BaseType::Person,
        is_ne: true,
    };
    let mut config = PipelineConfig::default();
    config
        .matrices
        .set(2, ComparisonMatrix::from_fn(2, |x, y| x.base == y.base && x.is_ne && y.is_ne && x != person_ne));
    let out = run_pipeline(&bundle, &store, &config).unwrap();
    assert!(out.trace.iter().all(|e| e.sieve != 2));
    assert!(!together(out.stage("S2").unwrap(), "m17", "m03"));
}

#[test]
fn lookup_stats_cover_both_paths() {
    let (bundle, store) = micro();
    let out = run_pipeline(&bundle, &store, &PipelineConfig::default()).unwrap();
    assert!(out.lookups.exact > 0 && out.lookups.lowercase > 0);
    assert_eq!(out.lookups.oov, 0);
}

fn check_invariants(bundle: &CorpusBundle, config: &PipelineConfig, out: &PipelineOutput) -> Result<(), String> {
    for (stage, chains) in &out.stages {
        if !chain_partition_check(chains, &bundle.mentions) {
            return Err(format!("{stage} is not a partition"));
        }
    }
    for n in [1u8, 2, 3, 5] {
        let before = &out.stages[n as usize - 1].1;
        let after = &out.stages[n as usize].1;
        if after.len() > before.len() {
            return Err(format!("S{n} grew the chain count"));
        }
        let events: Vec<_> = out.trace.iter().filter(|e| e.sieve == n).cloned().collect();
        if replay(before, &events) != sets(after).into_iter().map(BTreeSet::from_iter).collect::<Vec<_>>() {
            return Err(format!("S{n} is not a union of its input chains"));
        }
    }
    for e in &out.trace {
        let allowed = config.matrices.get(e.sieve).allows(e.winner_type.unwrap(), e.absorbed_type.unwrap());
        if !allowed {
            return Err(format!("{e} joins incomparable types"));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_corpora_keep_invariants(seed in any::<u64>()) {
        let bundle = common::random_corpus(seed, 120);
        let store = common::random_store(seed);
        let config = PipelineConfig::default();
        let out = run_pipeline(&bundle, &store, &config).unwrap();
        prop_assert_eq!(check_invariants(&bundle, &config, &out), Ok(()));
    }

    #[test]
    fn runs_are_deterministic(seed in any::<u64>()) {
        let bundle = common::random_corpus(seed, 80);
        let store = common::random_store(seed);
        let config = PipelineConfig::default();
        let a = run_pipeline(&bundle, &store, &config).unwrap();
        let b = run_pipeline(&bundle, &store, &config).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn clustering_threshold_only_touches_s5(seed in any::<u64>()) {
        let bundle = common::random_corpus(seed, 80);
        let store = common::random_store(seed);
        let loose = PipelineConfig { t_cl: 0.6, ..PipelineConfig::default() };
        let strict = PipelineConfig { t_cl: 0.1, ..PipelineConfig::default() };
        let a = run_pipeline(&bundle, &store, &loose).unwrap();
        let b = run_pipeline(&bundle, &store, &strict).unwrap();
        prop_assert!(a.stage("S4") == b.stage("S4"));
        prop_assert!(a.trace.iter().filter(|e| e.sieve < 5).eq(b.trace.iter().filter(|e| e.sieve < 5)));
    }
}
