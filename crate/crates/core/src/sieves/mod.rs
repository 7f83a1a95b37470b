//! The five-sieve merge pipeline.
//!
//! Chains are first split on conflicting entity links and typed, then
//! passed through:
//!
//! | sieve | resolves | rule tags |
//! |---|---|---|
//! | S1 | chains sharing an entity-link title | `s1_wiki` |
//! | S2 | named-entity chains by head and compound match | `s2_head`, `s2_compound` |
//! | S3 | common-noun chains into named-entity chains | `s3_repr`, `s3_tokens`, `s3_cosine` |
//! | S4 | groups of people, then groups into countries | `s4_core`, `s4_country` |
//! | S5 | events and abstract entities by clustering | `s5_cluster` |
//!
//! Every sieve only compares chain types its comparison matrix allows.

mod abstract_entities;
mod config;
mod features;
mod groups;
mod heads;
mod nel;
mod non_ne;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{chain_partition_check, Chain, ChainOrigin, CorpusBundle, CorpusIndex};
use crate::preprocess::split_chains_by_wiki;
use crate::type_scoring::{BaseType, ConceptType, TypeAssigner, TypeError};
use crate::vectors::{LookupPath, VectorError, VectorStore};

pub use config::{ConfigError, PipelineConfig};
pub use features::Features;

pub const STAGES: [&str; 6] = ["init", "S1", "S2", "S3", "S4", "S5"];

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Vector(#[from] VectorError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("chains no longer partition the mentions after {stage}")]
    InvariantViolation { stage: String },
}

/// One merge, as written to the trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub sieve: u8,
    pub winner: String,
    pub absorbed: String,
    pub rule: String,
    pub score: Option<f64>,
    #[serde(skip)]
    pub winner_type: Option<ConceptType>,
    #[serde(skip)]
    pub absorbed_type: Option<ConceptType>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{} {} <- {} ({})", self.sieve, self.winner, self.absorbed, self.rule)?;
        if let Some(s) = self.score {
            write!(f, " {s:.4}")?;
        }
        Ok(())
    }
}

/// Chains under construction plus the merges applied so far.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChainState {
    pub chains: Vec<Chain>,
    pub trace: Vec<TraceEvent>,
}

const FALLBACK_TYPE: ConceptType = ConceptType::new(BaseType::Misc, false);

impl ChainState {
    pub fn new(chains: Vec<Chain>) -> Self {
        ChainState {
            chains,
            trace: Vec::new(),
        }
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.chains.iter().position(|c| c.id == id)
    }

    pub fn get(&self, id: &str) -> Option<&Chain> {
        self.find(id).map(|i| &self.chains[i])
    }

    pub fn type_of(&self, id: &str) -> ConceptType {
        self.get(id)
            .and_then(|c| c.concept_type)
            .unwrap_or(FALLBACK_TYPE)
    }

    /// `base` if unused, else `base` with primes appended until unique.
    pub fn fresh_id(&self, base: &str) -> String {
        let mut id = base.to_string();
        while self.find(&id).is_some() {
            id.push('\'');
        }
        id
    }

    /// Moves every mention of `absorbed` into `winner` and drops `absorbed`.
    /// The winner keeps its id and type, and adopts the absorbed chain's
    /// entity-link title if it had none.
    pub fn merge(&mut self, winner: &str, absorbed: &str, sieve: u8, rule: &str, score: Option<f64>) {
        let (Some(w), Some(a)) = (self.find(winner), self.find(absorbed)) else {
            return;
        };
        if w == a {
            return;
        }
        let gone = self.chains.remove(a);
        let w = if a < w { w - 1 } else { w };
        let target = &mut self.chains[w];
        self.trace.push(TraceEvent {
            sieve,
            winner: target.id.clone(),
            absorbed: gone.id.clone(),
            rule: rule.to_string(),
            score,
            winner_type: target.concept_type,
            absorbed_type: gone.concept_type,
        });
        target.mention_ids.extend(gone.mention_ids);
        target.origin = ChainOrigin::Merged;
        if target.wiki_title.is_none() {
            target.wiki_title = gone.wiki_title;
        }
    }

    /// Orders chains by the file position of their first mention.
    pub fn sort(&mut self, index: &CorpusIndex<'_>) {
        let key = |c: &Chain| {
            c.mention_ids
                .iter()
                .filter_map(|id| index.position(id))
                .min()
                .unwrap_or(usize::MAX)
        };
        self.chains.sort_by_cached_key(|c| (key(c), c.id.clone()));
    }
}

/// Counts of how vectorized words were found in the vector store.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LookupStats {
    pub exact: usize,
    pub lowercase: usize,
    pub oov: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub chains: Vec<Chain>,
    pub trace: Vec<TraceEvent>,
    /// Chains after preprocessing (`init`) and after each sieve.
    pub stages: Vec<(String, Vec<Chain>)>,
    pub lookups: LookupStats,
}

impl PipelineOutput {
    pub fn stage(&self, name: &str) -> Option<&[Chain]> {
        self.stages
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_slice())
    }
}

/// Shared read-only context for the sieves.
pub struct Pipeline<'a> {
    pub index: CorpusIndex<'a>,
    pub store: &'a VectorStore,
    pub config: &'a PipelineConfig,
    pub features: Features<'a>,
}

impl<'a> Pipeline<'a> {
    pub fn new(bundle: &'a CorpusBundle, store: &'a VectorStore, config: &'a PipelineConfig) -> Self {
        let index = bundle.index();
        Pipeline {
            features: Features::new(index.clone(), store, config),
            index,
            store,
            config,
        }
    }

    /// Splits chains on conflicting entity links and types every chain.
    pub fn initial_state(&self) -> ChainState {
        let assigner = TypeAssigner::new(self.config.categories.clone());
        let mut chains = split_chains_by_wiki(&self.index.bundle().chains, &self.index);
        for chain in &mut chains {
            chain.concept_type = Some(assigner.type_chain(chain, &self.index));
        }
        let mut state = ChainState::new(chains);
        state.sort(&self.index);
        state
    }

    pub fn sieve(&self, n: u8, state: &mut ChainState) -> Result<(), PipelineError> {
        match n {
            1 => nel::run(self, state),
            2 => heads::run(self, state),
            3 => non_ne::run(self, state)?,
            4 => groups::run(self, state)?,
            5 => abstract_entities::run(self, state)?,
            _ => {}
        }
        state.sort(&self.index);
        Ok(())
    }

    fn check(&self, state: &ChainState, stage: &str) -> Result<(), PipelineError> {
        if chain_partition_check(&state.chains, &self.index.bundle().mentions) {
            Ok(())
        } else {
            Err(PipelineError::InvariantViolation {
                stage: stage.to_string(),
            })
        }
    }

    pub fn run(&self) -> Result<PipelineOutput, PipelineError> {
        let mut state = self.initial_state();
        self.check(&state, STAGES[0])?;
        let mut stages = vec![(STAGES[0].to_string(), state.chains.clone())];
        for n in 1..=5u8 {
            self.sieve(n, &mut state)?;
            self.check(&state, STAGES[n as usize])?;
            stages.push((STAGES[n as usize].to_string(), state.chains.clone()));
        }
        Ok(PipelineOutput {
            chains: state.chains,
            trace: state.trace,
            stages,
            lookups: self.lookup_stats(),
        })
    }

    fn lookup_stats(&self) -> LookupStats {
        let mut stats = LookupStats::default();
        for word in self.features.vectorized_words() {
            match self.store.resolve(&word).1 {
                LookupPath::Exact => stats.exact += 1,
                LookupPath::Lowercase => stats.lowercase += 1,
                LookupPath::Oov => stats.oov += 1,
            }
        }
        stats
    }
}

/// Runs preprocessing and all five sieves on one topic.
pub fn run_pipeline(
    bundle: &CorpusBundle,
    store: &VectorStore,
    config: &PipelineConfig,
) -> Result<PipelineOutput, PipelineError> {
    config.validate()?;
    Pipeline::new(bundle, store, config).run()
}

/// Replays the merges of one sieve on the chains before it. Only meaningful
/// for the merge-only sieves (all but S4).
pub fn replay(before: &[Chain], events: &[TraceEvent]) -> Vec<BTreeSet<String>> {
    let mut state = ChainState::new(before.to_vec());
    for e in events {
        state.merge(&e.winner, &e.absorbed, e.sieve, &e.rule, e.score);
    }
    let mut out: Vec<BTreeSet<String>> = state.chains.into_iter().map(|c| c.mention_ids).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(id: &str, ms: &[&str]) -> Chain {
        Chain::new(id, ms.iter().copied(), ChainOrigin::Singleton)
    }

    #[test]
    fn merge_moves_mentions_and_logs() {
        let mut s = ChainState::new(vec![chain("a", &["1"]), chain("b", &["2", "3"])]);
        s.merge("b", "a", 1, "s1_wiki", None);
        assert_eq!(s.chains.len(), 1);
        assert_eq!(s.chains[0].id, "b");
        assert_eq!(s.chains[0].len(), 3);
        assert_eq!(s.chains[0].origin, ChainOrigin::Merged);
        assert_eq!(s.trace.len(), 1);
        assert_eq!(s.trace[0].to_string(), "S1 b <- a (s1_wiki)");
    }

    #[test]
    fn fresh_id_avoids_collisions() {
        let s = ChainState::new(vec![chain("x", &["1"]), chain("x'", &["2"])]);
        assert_eq!(s.fresh_id("x"), "x''");
        assert_eq!(s.fresh_id("y"), "y");
    }

    #[test]
    fn trace_json_shape() {
        let e = TraceEvent {
            sieve: 3,
            winner: "a".into(),
            absorbed: "b".into(),
            rule: "s3_cosine".into(),
            score: Some(0.75),
            winner_type: None,
            absorbed_type: None,
        };
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"sieve":3,"winner":"a","absorbed":"b","rule":"s3_cosine","score":0.75}"#
        );
    }
}
