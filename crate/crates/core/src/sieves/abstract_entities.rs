//! S5: events and abstract entities.
//!
//! Unique mention strings of the participating chains are stripped of
//! articles, lemmatized, embedded with a head-weighted mean vector and
//! clustered with average linkage. Chains whose mentions share a cluster are
//! merged; existing chains are never split.

use std::collections::{BTreeSet, HashMap};

use super::nel::winner_order;
use super::{ChainState, Pipeline, PipelineError};
use crate::clustering::hac_average_cosine;
use crate::corpus::{Mention, Token};

pub(super) const RULE: &str = "s5_cluster";

const ARTICLES: &[&str] = &["a", "an", "the"];

/// Lemmatized tokens of a mention without articles, and the head's
/// position among them. The head itself is always kept.
pub fn normalized_tokens(span: &[Token], mention: &Mention) -> (Vec<Token>, usize) {
    let mut out = Vec::new();
    let mut head = 0;
    for (offset, t) in span.iter().enumerate() {
        let index = mention.span.start + offset;
        let is_head = index == mention.head_index;
        if !is_head && ARTICLES.contains(&t.text.to_lowercase().as_str()) {
            continue;
        }
        if is_head {
            head = out.len();
        }
        let mut t = t.clone();
        if !t.lemma.is_empty() {
            t.text = t.lemma.clone();
        }
        out.push(t);
    }
    (out, head)
}

fn resolve(alias: &HashMap<String, String>, id: &str) -> String {
    let mut cur = id.to_string();
    while let Some(next) = alias.get(&cur) {
        cur = next.clone();
    }
    cur
}

pub(super) fn run(p: &Pipeline<'_>, state: &mut ChainState) -> Result<(), PipelineError> {
    let matrix = p.config.matrices.get(5);
    let mut owners: Vec<String> = Vec::new();
    let mut vectors = Vec::new();
    for c in &state.chains {
        if !matrix.participates(state.type_of(&c.id)) {
            continue;
        }
        let mut seen = BTreeSet::new();
        for m in p.features.members(c) {
            let span = p.features.mention_tokens(m);
            let (tokens, head) = normalized_tokens(&span, m);
            let key: Vec<String> = tokens.iter().map(|t| t.text.to_lowercase()).collect();
            if tokens.is_empty() || !seen.insert(key) {
                continue;
            }
            vectors.push(p.features.weighted_vector(&tokens, head)?);
            owners.push(c.id.clone());
        }
    }
    if vectors.is_empty() {
        return Ok(());
    }

    let labels = hac_average_cosine(&vectors, p.config.t_cl)?;
    let cluster_count = labels.iter().max().map_or(0, |m| m + 1);
    let mut clusters: Vec<Vec<&str>> = vec![Vec::new(); cluster_count];
    for (owner, &label) in owners.iter().zip(&labels) {
        if !clusters[label].contains(&owner.as_str()) {
            clusters[label].push(owner);
        }
    }

    let mut alias: HashMap<String, String> = HashMap::new();
    for cluster in clusters {
        for other in cluster.iter().skip(1) {
            let a = resolve(&alias, cluster[0]);
            let b = resolve(&alias, other);
            if a == b || !matrix.allows(state.type_of(&a), state.type_of(&b)) {
                continue;
            }
            let size = |id: &str| state.get(id).map_or(0, |c| c.len());
            let (winner, loser) = if winner_order((size(&a), &a), (size(&b), &b)).is_le() {
                (a, b)
            } else {
                (b, a)
            };
            state.merge(&winner, &loser, 5, RULE, None);
            alias.insert(loser, winner);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Span;

    fn tok(i: usize, text: &str, lemma: &str) -> Token {
        Token {
            index: i,
            text: text.into(),
            lemma: lemma.into(),
            pos: "NN".into(),
            stopword: false,
        }
    }

    #[test]
    fn articles_dropped_and_lemmatized() {
        let span = vec![tok(3, "the", "the"), tok(4, "meetings", "meeting")];
        let m = Mention {
            id: "m".into(),
            doc_id: "d".into(),
            sent_index: 0,
            span: Span::new(3, 4),
            head_index: 4,
            ne_type: None,
            wiki_title: None,
            sense_ranks: vec![],
            dep_subtree: vec![],
            struct_subtree: vec![4],
            gold_concept: None,
        };
        let (tokens, head) = normalized_tokens(&span, &m);
        assert_eq!(tokens.len(), 1);
        assert_eq!(tokens[0].text, "meeting");
        assert_eq!(head, 0);
    }
}
