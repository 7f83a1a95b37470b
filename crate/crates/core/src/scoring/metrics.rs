//! MUC, B³ and CEAF_e over [`ChainSet`]s.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::assignment::max_weight_assignment;
use super::ChainSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

impl MetricResult {
    pub const ZERO: MetricResult = MetricResult {
        recall: 0.0,
        precision: 0.0,
        f1: 0.0,
    };

    pub fn new(recall: f64, precision: f64) -> Self {
        let f1 = if recall + precision > 0.0 {
            2.0 * recall * precision / (recall + precision)
        } else {
            0.0
        };
        MetricResult {
            recall,
            precision,
            f1,
        }
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Sum over `key` chains of `|k| - partitions(k, response)` and of `|k| - 1`.
fn muc_counts<K: Ord>(key: &ChainSet<K>, response: &ChainSet<K>) -> (usize, usize) {
    let membership = response.membership();
    let (mut num, mut den) = (0, 0);
    for chain in key.chains() {
        let mut parts = BTreeSet::new();
        let mut missing = 0;
        for m in chain {
            match membership.get(m) {
                Some(i) => {
                    parts.insert(*i);
                }
                None => missing += 1,
            }
        }
        num += chain.len() - (parts.len() + missing);
        den += chain.len() - 1;
    }
    (num, den)
}

/// Link-based MUC score.
pub fn muc<K: Ord + Clone + Debug>(gold: &ChainSet<K>, system: &ChainSet<K>) -> MetricResult {
    let (rn, rd) = muc_counts(gold, system);
    let (pn, pd) = muc_counts(system, gold);
    MetricResult::new(ratio(rn as f64, rd as f64), ratio(pn as f64, pd as f64))
}

/// Mean over `key` mentions of overlap with the response chain, relative to
/// the key chain size.
fn b_cubed_side<K: Ord>(key: &ChainSet<K>, response: &ChainSet<K>) -> f64 {
    let membership = response.membership();
    let mut total = 0.0;
    let mut count = 0usize;
    for chain in key.chains() {
        let mut overlap: BTreeMap<usize, usize> = BTreeMap::new();
        for m in chain {
            if let Some(i) = membership.get(m) {
                *overlap.entry(*i).or_default() += 1;
            }
        }
        // Every mention of `chain` sharing response chain i scores
        // overlap[i] / |chain|; mentions missing from the response score 0.
        let n = chain.len() as f64;
        total += overlap.values().map(|&o| (o * o) as f64 / n).sum::<f64>();
        count += chain.len();
    }
    ratio(total, count as f64)
}

/// Mention-based B³ score.
pub fn b_cubed<K: Ord + Clone + Debug>(gold: &ChainSet<K>, system: &ChainSet<K>) -> MetricResult {
    MetricResult::new(b_cubed_side(gold, system), b_cubed_side(system, gold))
}

fn overlap<K: Ord>(a: &BTreeSet<K>, b: &BTreeSet<K>) -> usize {
    if a.len() <= b.len() {
        a.iter().filter(|k| b.contains(k)).count()
    } else {
        overlap(b, a)
    }
}

/// Entity similarity φ4 = 2|g ∩ s| / (|g| + |s|) as an exact fraction.
pub fn phi4<K: Ord>(g: &BTreeSet<K>, s: &BTreeSet<K>) -> BigRational {
    BigRational::new(
        BigInt::from(2 * overlap(g, s)),
        BigInt::from(g.len() + s.len()),
    )
}

/// Best total φ4 over one-to-one chain alignments, as an exact fraction.
///
/// The alignment is found in floating point; the winning pairs are then
/// summed exactly. Distinct alignment totals differ by far more than the
/// solver's rounding error for any realistic chain sizes.
pub fn ceaf_e_similarity<K: Ord>(gold: &ChainSet<K>, system: &ChainSet<K>) -> BigRational {
    let membership = system.membership();
    let weights: Vec<Vec<f64>> = gold
        .chains()
        .iter()
        .map(|g| {
            let mut row = vec![0.0; system.len()];
            let mut hits: BTreeMap<usize, usize> = BTreeMap::new();
            for m in g {
                if let Some(i) = membership.get(m) {
                    *hits.entry(*i).or_default() += 1;
                }
            }
            for (i, o) in hits {
                row[i] = 2.0 * o as f64 / (g.len() + system.chains()[i].len()) as f64;
            }
            row
        })
        .collect();
    max_weight_assignment(&weights)
        .into_iter()
        .enumerate()
        .filter_map(|(r, c)| c.map(|c| phi4(&gold.chains()[r], &system.chains()[c])))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// Entity-based CEAF score with the φ4 similarity.
pub fn ceaf_e<K: Ord + Clone + Debug>(gold: &ChainSet<K>, system: &ChainSet<K>) -> MetricResult {
    let best = ceaf_e_similarity(gold, system);
    let frac = |den: usize| {
        if den == 0 {
            0.0
        } else {
            (best.clone() / BigInt::from(den)).to_f64().unwrap_or(0.0)
        }
    };
    MetricResult::new(frac(gold.len()), frac(system.len()))
}

/// Mean of the F1 values.
pub fn conll_f1(results: &[MetricResult; 3]) -> f64 {
    results.iter().map(|r| r.f1).sum::<f64>() / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(chains: &[&str]) -> ChainSet<char> {
        ChainSet::new(chains.iter().map(|c| c.chars().collect::<Vec<_>>()))
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn worked_example() {
        let g = set(&["abc"]);
        let s = set(&["ab", "c"]);
        let m = muc(&g, &s);
        assert!(close(m.recall, 0.5) && close(m.precision, 1.0) && close(m.f1, 2.0 / 3.0));
        let b = b_cubed(&g, &s);
        assert!(close(b.recall, 5.0 / 9.0) && close(b.precision, 1.0) && close(b.f1, 5.0 / 7.0));
        let c = ceaf_e(&g, &s);
        assert!(close(c.recall, 0.8) && close(c.precision, 0.4) && close(c.f1, 8.0 / 15.0));
        let f = conll_f1(&[m, b, c]);
        assert!(close(f, (2.0 / 3.0 + 5.0 / 7.0 + 8.0 / 15.0) / 3.0));
        assert!((f - 0.638095).abs() < 1e-6);
    }

    #[test]
    fn identity() {
        let g = set(&["abc", "d", "ef"]);
        for r in [muc(&g, &g), b_cubed(&g, &g), ceaf_e(&g, &g)] {
            assert_eq!(r, MetricResult::new(1.0, 1.0));
        }
    }

    #[test]
    fn muc_all_singletons_is_zero() {
        let g = set(&["a", "b"]);
        assert_eq!(muc(&g, &g), MetricResult::ZERO);
    }

    #[test]
    fn b_cubed_merge_two_pairs() {
        let g = set(&["ab", "cd"]);
        let s = set(&["abcd"]);
        assert!(close(b_cubed(&g, &s).precision, 0.5));
    }

    #[test]
    fn empty_sides() {
        let e: ChainSet<char> = ChainSet::default();
        let g = set(&["ab"]);
        assert_eq!(b_cubed(&g, &e), MetricResult::ZERO);
        assert_eq!(ceaf_e(&e, &g), MetricResult::ZERO);
        assert_eq!(conll_f1(&[MetricResult::ZERO; 3]), 0.0);
    }

    #[test]
    fn conll_of_ones() {
        assert_eq!(conll_f1(&[MetricResult::new(1.0, 1.0); 3]), 1.0);
    }
}
