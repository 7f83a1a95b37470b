//! S3: common-noun chains ("the prime minister") are merged into
//! named-entity chains when one of three tests holds:
//!
//! 1. the common-noun chain's representative phrase is a proper subset of
//!    the named-entity chain's, and its compound and apposition modifiers
//!    all lie in the shared part;
//! 2. the chains share at least two content words, including a head of
//!    each;
//! 3. the mean vectors of their content words have cosine at least `t_nn`.

use std::collections::{BTreeSet, HashSet};

use super::{ChainState, Pipeline, PipelineError};
use crate::vectors::{cosine, WordVector};

pub(super) const RULE_REPR: &str = "s3_repr";
pub(super) const RULE_TOKENS: &str = "s3_tokens";
pub(super) const RULE_COSINE: &str = "s3_cosine";

/// String features of one chain.
#[derive(Debug, Clone, Default)]
pub struct Profile {
    pub representative: BTreeSet<String>,
    pub modifiers: BTreeSet<String>,
    pub words: BTreeSet<String>,
    pub heads: BTreeSet<String>,
}

/// Test 1.
pub fn representative_match(nn: &Profile, ne: &Profile) -> bool {
    if nn.representative.is_empty()
        || nn.representative.len() >= ne.representative.len()
        || !nn.representative.is_subset(&ne.representative)
    {
        return false;
    }
    let shared: BTreeSet<&String> = nn.representative.intersection(&ne.representative).collect();
    nn.modifiers.iter().all(|m| shared.contains(m))
}

/// Test 2.
pub fn word_overlap_match(nn: &Profile, ne: &Profile) -> bool {
    let shared: BTreeSet<&String> = nn.words.intersection(&ne.words).collect();
    shared.len() >= 2
        && nn.heads.iter().any(|h| shared.contains(h))
        && ne.heads.iter().any(|h| shared.contains(h))
}

struct Entry {
    id: String,
    profile: Profile,
    vector: WordVector,
}

pub(super) fn run(p: &Pipeline<'_>, state: &mut ChainState) -> Result<(), PipelineError> {
    let matrix = p.config.matrices.get(3);
    loop {
        let mut named = Vec::new();
        let mut common = Vec::new();
        for c in &state.chains {
            let entry = Entry {
                id: c.id.clone(),
                profile: Profile {
                    representative: p.features.representative(c),
                    modifiers: p.features.compound_appos(c),
                    words: p.features.content_words(c),
                    heads: p.features.heads(c),
                },
                vector: p.features.chain_vector(c)?,
            };
            if p.features.is_ne_containing(c) {
                named.push(entry);
            } else {
                common.push(entry);
            }
        }

        let mut candidates = Vec::new();
        for ne in &named {
            for nn in &common {
                if !matrix.allows(state.type_of(&ne.id), state.type_of(&nn.id)) {
                    continue;
                }
                let cos = cosine(&ne.vector, &nn.vector)?;
                let rule = if representative_match(&nn.profile, &ne.profile) {
                    RULE_REPR
                } else if word_overlap_match(&nn.profile, &ne.profile) {
                    RULE_TOKENS
                } else if cos >= p.config.t_nn {
                    RULE_COSINE
                } else {
                    continue;
                };
                candidates.push((cos, ne.id.as_str(), nn.id.as_str(), rule));
            }
        }
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

        let mut absorbed: HashSet<String> = HashSet::new();
        let merges: Vec<(f64, String, String, &str)> = candidates
            .into_iter()
            .filter(|(_, _, nn, _)| absorbed.insert(nn.to_string()))
            .map(|(cos, ne, nn, r)| (cos, ne.to_string(), nn.to_string(), r))
            .collect();
        if merges.is_empty() {
            return Ok(());
        }
        for (cos, ne, nn, r) in merges {
            state.merge(&ne, &nn, 3, r, Some(cos));
        }
    }
}
