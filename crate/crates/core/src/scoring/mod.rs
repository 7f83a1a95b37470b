//! Coreference evaluation: MUC, B³, CEAF_e and their CoNLL average, plus
//! the CoNLL-2012 column format for cross-checking with external scorers.

pub mod assignment;
pub mod conll;
pub mod metrics;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{Chain, CorpusBundle, CorpusIndex, Mention};

pub use metrics::{b_cubed, ceaf_e, conll_f1, muc, MetricResult};

#[derive(Debug, thiserror::Error)]
pub enum ScoringError {
    #[error("mention {0} appears twice on the {1} side")]
    DuplicateMention(String, &'static str),
    #[error("CoNLL line {line}: {message}")]
    Conll { line: usize, message: String },
    #[error("mention {0} is not part of the corpus")]
    UnknownMention(String),
}

/// Document-level position of a mention; the unit both sides are aligned on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MentionKey {
    pub doc: String,
    pub sent: usize,
    pub start: usize,
    pub end: usize,
}

impl MentionKey {
    pub fn new(doc: impl Into<String>, sent: usize, start: usize, end: usize) -> Self {
        MentionKey {
            doc: doc.into(),
            sent,
            start,
            end,
        }
    }

    pub fn of(mention: &Mention) -> Self {
        MentionKey::new(
            mention.doc_id.clone(),
            mention.sent_index,
            mention.span.start,
            mention.span.end,
        )
    }
}

impl fmt::Display for MentionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}-{}", self.doc, self.sent, self.start, self.end)
    }
}

/// A set of chains over mention keys. Construction drops empty chains but
/// does not check disjointness; [`ChainSet::validate`] does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSet<K = MentionKey> {
    chains: Vec<BTreeSet<K>>,
}

impl<K> Default for ChainSet<K> {
    fn default() -> Self {
        ChainSet { chains: Vec::new() }
    }
}

impl<K: Ord> ChainSet<K> {
    pub fn new<C, I>(chains: C) -> Self
    where
        C: IntoIterator<Item = I>,
        I: IntoIterator<Item = K>,
    {
        ChainSet {
            chains: chains
                .into_iter()
                .map(|c| c.into_iter().collect::<BTreeSet<K>>())
                .filter(|c| !c.is_empty())
                .collect(),
        }
    }

    pub fn chains(&self) -> &[BTreeSet<K>] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn mention_count(&self) -> usize {
        self.chains.iter().map(BTreeSet::len).sum()
    }

    pub fn singleton_count(&self) -> usize {
        self.chains.iter().filter(|c| c.len() == 1).count()
    }

    pub fn mentions(&self) -> impl Iterator<Item = &K> {
        self.chains.iter().flatten()
    }

    /// Chain index per mention.
    pub fn membership(&self) -> std::collections::BTreeMap<&K, usize> {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |k| (k, i)))
            .collect()
    }

    pub fn validate(&self, side: &'static str) -> Result<(), ScoringError>
    where
        K: fmt::Debug,
    {
        let mut seen = BTreeSet::new();
        for key in self.mentions() {
            if !seen.insert(key) {
                return Err(ScoringError::DuplicateMention(format!("{key:?}"), side));
            }
        }
        Ok(())
    }

    /// Chains as sorted sets in sorted order, for order-insensitive
    /// comparison.
    pub fn canonical(&self) -> Vec<BTreeSet<K>>
    where
        K: Clone,
    {
        let mut out = self.chains.clone();
        out.sort();
        out
    }

    /// Concatenates several chain sets, as when pooling topics.
    pub fn pooled<'a>(sets: impl IntoIterator<Item = &'a ChainSet<K>>) -> Self
    where
        K: Clone + 'a,
    {
        ChainSet {
            chains: sets.into_iter().flat_map(|s| s.chains.iter().cloned()).collect(),
        }
    }
}

/// Checks both sides for duplicate keys. Spurious or missing mentions are
/// kept; the metrics account for them.
pub fn align<K: Ord + Clone + fmt::Debug>(
    gold: ChainSet<K>,
    system: ChainSet<K>,
) -> Result<(ChainSet<K>, ChainSet<K>), ScoringError> {
    gold.validate("gold")?;
    system.validate("system")?;
    Ok((gold, system))
}

/// System-side chain set for chains over a corpus.
pub fn chain_set(chains: &[Chain], index: &CorpusIndex<'_>) -> Result<ChainSet, ScoringError> {
    let mut out = Vec::with_capacity(chains.len());
    for chain in chains {
        let mut keys = BTreeSet::new();
        for id in &chain.mention_ids {
            let m = index
                .mention(id)
                .ok_or_else(|| ScoringError::UnknownMention(id.clone()))?;
            keys.insert(MentionKey::of(m));
        }
        out.push(keys);
    }
    Ok(ChainSet { chains: out })
}

/// Gold chains from the per-mention gold labels. Mentions without a label
/// are gold singletons. Chains are ordered by first mention.
pub fn gold_chain_set(bundle: &CorpusBundle) -> ChainSet {
    let mut chains: Vec<BTreeSet<MentionKey>> = Vec::new();
    let mut slot: std::collections::HashMap<&str, usize> = Default::default();
    for m in &bundle.mentions {
        let i = match m.gold_concept.as_deref() {
            Some(label) => *slot.entry(label).or_insert_with(|| {
                chains.push(BTreeSet::new());
                chains.len() - 1
            }),
            None => {
                chains.push(BTreeSet::new());
                chains.len() - 1
            }
        };
        chains[i].insert(MentionKey::of(m));
    }
    ChainSet { chains }
}

/// The three metrics and their mean F1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub muc: MetricResult,
    pub b_cubed: MetricResult,
    pub ceaf_e: MetricResult,
    pub conll_f1: f64,
}

impl Evaluation {
    pub fn from_metrics(muc: MetricResult, b_cubed: MetricResult, ceaf_e: MetricResult) -> Self {
        Evaluation {
            muc,
            b_cubed,
            ceaf_e,
            conll_f1: conll_f1(&[muc, b_cubed, ceaf_e]),
        }
    }

    /// Unweighted mean of each figure across evaluations.
    pub fn macro_average(evals: &[Evaluation]) -> Evaluation {
        if evals.is_empty() {
            return Evaluation::from_metrics(
                MetricResult::ZERO,
                MetricResult::ZERO,
                MetricResult::ZERO,
            );
        }
        let n = evals.len() as f64;
        let avg = |f: fn(&Evaluation) -> MetricResult| MetricResult {
            recall: evals.iter().map(|e| f(e).recall).sum::<f64>() / n,
            precision: evals.iter().map(|e| f(e).precision).sum::<f64>() / n,
            f1: evals.iter().map(|e| f(e).f1).sum::<f64>() / n,
        };
        Evaluation {
            muc: avg(|e| e.muc),
            b_cubed: avg(|e| e.b_cubed),
            ceaf_e: avg(|e| e.ceaf_e),
            conll_f1: evals.iter().map(|e| e.conll_f1).sum::<f64>() / n,
        }
    }
}

pub fn evaluate<K: Ord + Clone + fmt::Debug>(
    gold: &ChainSet<K>,
    system: &ChainSet<K>,
) -> Result<Evaluation, ScoringError> {
    gold.validate("gold")?;
    system.validate("system")?;
    Ok(Evaluation::from_metrics(
        muc(gold, system),
        b_cubed(gold, system),
        ceaf_e(gold, system),
    ))
}
