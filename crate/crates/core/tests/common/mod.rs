#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use xcoref::corpus::{read_corpus, CorpusBundle};
use xcoref::scoring::ChainSet;
use xcoref::vectors::{VectorStore, WordVector};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn micro(name: &str) -> PathBuf {
    fixture("micro").join(name)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: &[&str] = &["Trump", "Kim", "May", "Moon", "Merkel", "Putin"];
const NOUNS: &[(&str, &str, &str)] = &[
    ("wall", "wall", "NN"),
    ("border", "border", "NN"),
    ("meeting", "meeting", "NN"),
    ("summit", "summit", "NN"),
    ("talks", "talk", "NNS"),
    ("officials", "official", "NNS"),
    ("immigrants", "immigrant", "NNS"),
    ("migrants", "migrant", "NNS"),
    ("aliens", "alien", "NNS"),
    ("president", "president", "NN"),
    ("leader", "leader", "NN"),
    ("minister", "minister", "NN"),
    ("deal", "deal", "NN"),
    ("economy", "economy", "NN"),
    ("issue", "issue", "NN"),
    ("States", "States", "NNPS"),
];
const ADJECTIVES: &[&str] = &["illegal", "new", "American", "North", "prime", "historic", "Korean"];
const FUNCTION: &[&str] = &["the", "a", "he", "it", "and"];
const CATEGORIES: &[&str] = &[
    "noun.person",
    "noun.group",
    "noun.location",
    "noun.artifact",
    "noun.act",
    "noun.event",
    "noun.time",
    "verb.communication",
];
const RELATIONS: &[&str] = &["compound", "amod", "det", "appos", "nmod"];
const TITLES: &[&str] = &["T_a", "T_b", "T_c", "T_d", "T_e", "T_f"];

fn random_word(rng: &mut ChaCha8Rng) -> (String, String, String) {
    match rng.gen_range(0..4) {
        0 => {
            let n = NAMES.choose(rng).unwrap();
            (n.to_string(), n.to_string(), "NNP".into())
        }
        1 => {
            let a = ADJECTIVES.choose(rng).unwrap();
            (a.to_string(), a.to_lowercase(), "JJ".into())
        }
        2 => {
            let f = FUNCTION.choose(rng).unwrap();
            (f.to_string(), f.to_string(), "DT".into())
        }
        _ => {
            let (t, l, p) = NOUNS.choose(rng).unwrap();
            (t.to_string(), l.to_string(), p.to_string())
        }
    }
}

/// Random topic with at most `max_mentions` mentions, as JSONL text.
pub fn random_corpus_text(seed: u64, max_mentions: usize) -> String {
    let mut rng = rng(seed);
    let docs = rng.gen_range(1..=4);
    let mut budget = rng.gen_range(1..=max_mentions.max(1));
    let mut lines = Vec::new();
    for d in 0..docs {
        let doc_id = format!("d{d}");
        let mut sentences = Vec::new();
        let mut mentions: Vec<Value> = Vec::new();
        let sent_count = rng.gen_range(1..=12);
        for s in 0..sent_count {
            let len = rng.gen_range(4..=14);
            let words: Vec<_> = (0..len).map(|_| random_word(&mut rng)).collect();
            sentences.push(
                words
                    .iter()
                    .enumerate()
                    .map(|(i, (t, l, p))| {
                        json!({"index": i, "text": t, "lemma": l, "pos": p,
                               "stop": FUNCTION.contains(&t.as_str())})
                    })
                    .collect::<Vec<_>>(),
            );
            let mut i = 0;
            while i < len && budget > 0 {
                if rng.gen_bool(0.5) {
                    i += 1;
                    continue;
                }
                let end = (i + rng.gen_range(0..3)).min(len - 1);
                let head = end;
                let dep: Vec<Value> = (i..end)
                    .map(|t| json!([head, t, RELATIONS.choose(&mut rng).unwrap()]))
                    .collect();
                let (text, _, pos) = &words[head];
                let ne = if pos == "NNP" && rng.gen_bool(0.8) {
                    Some("PERSON")
                } else if text == "States" {
                    Some("GPE")
                } else if rng.gen_bool(0.1) {
                    Some(*["ORG", "GPE", "DATE"].choose(&mut rng).unwrap())
                } else {
                    None
                };
                let wiki = ne.filter(|_| rng.gen_bool(0.5)).map(|_| *TITLES.choose(&mut rng).unwrap());
                let mut senses = Vec::new();
                for rank in 1..=rng.gen_range(0..=3u32) {
                    senses.push(json!([CATEGORIES.choose(&mut rng).unwrap(), rank]));
                }
                let gold = if rng.gen_bool(0.7) {
                    format!("G_{}", text.to_lowercase())
                } else {
                    format!("G{}", rng.gen_range(0..8))
                };
                let mut m = json!({
                    "id": format!("{doc_id}-m{}", mentions.len()),
                    "sent": s, "start": i, "end": end, "head": head,
                    "senses": senses, "dep": dep,
                    "struct": (i..=end).collect::<Vec<_>>(),
                    "gold": gold,
                });
                if let Some(ne) = ne {
                    m["ne"] = json!(ne);
                }
                if let Some(w) = wiki {
                    m["wiki"] = json!(w);
                }
                mentions.push(m);
                budget -= 1;
                i = end + 1;
            }
        }
        let mut ids: Vec<String> = mentions
            .iter()
            .map(|m| m["id"].as_str().unwrap().to_string())
            .collect();
        ids.shuffle(&mut rng);
        let mut chains = Vec::new();
        for c in 0..rng.gen_range(0..=3) {
            let size = rng.gen_range(2..=4);
            if ids.len() < size {
                break;
            }
            let members: Vec<String> = ids.drain(..size).collect();
            chains.push(json!({"id": format!("{doc_id}-c{c}"), "mentions": members}));
        }
        lines.push(json!({"doc_id": doc_id, "sentences": sentences,
                          "mentions": mentions, "chains": chains}).to_string());
    }
    lines.join("\n") + "\n"
}

pub fn random_corpus(seed: u64, max_mentions: usize) -> CorpusBundle {
    read_corpus(random_corpus_text(seed, max_mentions).as_bytes(), format!("t{seed}"))
        .expect("generated corpus is valid")
}

/// Vectors for the generator vocabulary: four loose clusters, some words
/// left out so the out-of-vocabulary path runs too.
pub fn random_store(seed: u64) -> VectorStore {
    let mut rng = rng(seed ^ 0x5eed);
    let dim = 8;
    let centers: Vec<Vec<f64>> = (0..4)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let mut words: BTreeSet<String> = BTreeSet::new();
    for n in NAMES {
        words.insert(n.to_lowercase());
    }
    for (t, l, _) in NOUNS {
        words.insert(t.to_lowercase());
        words.insert(l.to_lowercase());
    }
    for a in ADJECTIVES.iter().chain(FUNCTION) {
        words.insert(a.to_lowercase());
    }
    let mut entries: Vec<(String, Vec<f32>)> = Vec::new();
    for w in words {
        if rng.gen_bool(0.1) {
            continue;
        }
        let c = centers.choose(&mut rng).unwrap();
        let v = c.iter().map(|x| (x + rng.gen_range(-0.3..0.3)) as f32).collect();
        entries.push((w, v));
    }
    VectorStore::from_entries(entries).unwrap().with_oov_seed(seed)
}

pub fn random_vectors(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<WordVector> {
    (0..n)
        .map(|_| WordVector::new((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()))
        .collect()
}

fn cosine_distance(a: &WordVector, b: &WordVector) -> f64 {
    let dot: f64 = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum();
    let na = a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        1.0
    } else {
        1.0 - dot / (na * nb)
    }
}

/// Average linkage recomputed from scratch at every step.
pub fn naive_hac(vectors: &[WordVector], threshold: f64) -> Vec<usize> {
    let n = vectors.len();
    let d: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { cosine_distance(&vectors[i], &vectors[j]) }).collect())
        .collect();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut total = 0.0;
                for &x in &clusters[a] {
                    for &y in &clusters[b] {
                        total += d[x][y];
                    }
                }
                let avg = total / (clusters[a].len() * clusters[b].len()) as f64;
                let better = match best {
                    None => true,
                    Some((bd, ba, bb)) => {
                        avg < bd || (avg == bd && (clusters[a][0], clusters[b][0]) < (clusters[ba][0], clusters[bb][0]))
                    }
                };
                if better {
                    best = Some((avg, a, b));
                }
            }
        }
        match best {
            Some((avg, a, b)) if avg <= threshold => {
                let moved = clusters.remove(b);
                clusters[a].extend(moved);
                clusters[a].sort();
                clusters.sort_by_key(|c| c[0]);
            }
            _ => break,
        }
    }
    let mut labels = vec![0; n];
    for (l, c) in clusters.iter().enumerate() {
        for &x in c {
            labels[x] = l;
        }
    }
    canonical(&labels)
}

pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(p) => p,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

/// Random partition of `0..n` into at most `max_chains` chains.
pub fn random_partition(rng: &mut ChaCha8Rng, n: u32, max_chains: usize) -> ChainSet<u32> {
    let k = rng.gen_range(1..=max_chains);
    let mut chains: Vec<Vec<u32>> = vec![Vec::new(); k];
    for m in 0..n {
        chains[rng.gen_range(0..k)].push(m);
    }
    ChainSet::new(chains)
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Best total φ4 over every injective matching, by enumeration.
pub fn brute_force_ceaf(gold: &ChainSet<u32>, system: &ChainSet<u32>) -> BigRational {
    let g = gold.chains();
    let s = system.chains();
    let phi = |a: &BTreeSet<u32>, b: &BTreeSet<u32>| ratio(2 * a.intersection(b).count(), a.len() + b.len());
    fn go(
        i: usize,
        used: &mut Vec<bool>,
        g: &[BTreeSet<u32>],
        s: &[BTreeSet<u32>],
        phi: &dyn Fn(&BTreeSet<u32>, &BTreeSet<u32>) -> BigRational,
    ) -> BigRational {
        if i == g.len() {
            return BigRational::zero();
        }
        let mut best = go(i + 1, used, g, s, phi);
        for j in 0..s.len() {
            if !used[j] {
                used[j] = true;
                let v = phi(&g[i], &s[j]) + go(i + 1, used, g, s, phi);
                used[j] = false;
                if v > best {
                    best = v;
                }
            }
        }
        best
    }
    go(0, &mut vec![false; s.len()], g, s, &phi)
}

/// Same-chain relation over every mention pair.
pub fn same_chain_pairs<K: Ord + Clone>(set: &ChainSet<K>) -> BTreeSet<(K, K)> {
    let mut out = BTreeSet::new();
    for c in set.chains() {
        for a in c {
            for b in c {
                if a < b {
                    out.insert((a.clone(), b.clone()));
                }
            }
        }
    }
    out
}
