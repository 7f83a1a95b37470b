//! Head-lemma baseline: mentions whose heads share a lemma corefer.

use std::collections::BTreeMap;

use crate::corpus::{Chain, ChainOrigin, CorpusBundle, CorpusIndex, Mention};
use crate::scoring::{ChainSet, MentionKey};

/// Lowercased lemma of the mention head, falling back to the surface form
/// when the lemma is empty.
pub fn head_lemma(index: &CorpusIndex<'_>, mention: &Mention) -> String {
    index
        .head_token(mention)
        .map(|t| if t.lemma.is_empty() { &t.text } else { &t.lemma })
        .map(|s| s.to_lowercase())
        .unwrap_or_default()
}

/// One chain per distinct head lemma, in order of first mention.
pub fn lemma_chains(bundle: &CorpusBundle) -> Vec<Chain> {
    let index = bundle.index();
    let mut slots: BTreeMap<String, usize> = BTreeMap::new();
    let mut chains: Vec<Chain> = Vec::new();
    for m in &bundle.mentions {
        let lemma = head_lemma(&index, m);
        match slots.get(&lemma) {
            Some(&i) => {
                chains[i].mention_ids.insert(m.id.clone());
                chains[i].origin = ChainOrigin::Merged;
            }
            None => {
                slots.insert(lemma.clone(), chains.len());
                chains.push(Chain::new(format!("lemma:{lemma}"), [m.id.as_str()], ChainOrigin::Singleton));
            }
        }
    }
    chains
}

pub fn lemma_baseline(bundle: &CorpusBundle) -> ChainSet {
    let index = bundle.index();
    ChainSet::new(lemma_chains(bundle).iter().map(|c| {
        index
            .chain_mentions(c)
            .into_iter()
            .map(MentionKey::of)
            .collect::<Vec<_>>()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, Span, Token};

    fn bundle(heads: &[(&str, &str)]) -> CorpusBundle {
        let sentence: Vec<Token> = heads
            .iter()
            .enumerate()
            .map(|(i, (text, lemma))| Token {
                index: i,
                text: text.to_string(),
                lemma: lemma.to_string(),
                pos: "NN".into(),
                stopword: false,
            })
            .collect();
        let mentions = (0..heads.len())
            .map(|i| Mention {
                id: format!("m{}", i + 1),
                doc_id: "d".into(),
                sent_index: 0,
                span: Span::new(i, i),
                head_index: i,
                ne_type: None,
                wiki_title: None,
                sense_ranks: vec![],
                dep_subtree: vec![],
                struct_subtree: vec![i],
                gold_concept: None,
            })
            .collect();
        CorpusBundle {
            topic_id: "t".into(),
            documents: vec![Document {
                id: "d".into(),
                sentences: vec![sentence],
            }],
            mentions,
            chains: vec![],
        }
    }

    #[test]
    fn groups_by_lemma() {
        let b = bundle(&[("meeting", "meeting"), ("meetings", "meeting"), ("summit", "summit")]);
        let chains = lemma_chains(&b);
        assert_eq!(chains.len(), 2);
        assert_eq!(chains[0].len(), 2);
        assert!(chains[0].mention_ids.contains("m1") && chains[0].mention_ids.contains("m2"));
        assert_eq!(chains[1].mention_ids.len(), 1);
    }

    #[test]
    fn case_insensitive() {
        let b = bundle(&[("Wall", "Wall"), ("wall", "wall")]);
        assert_eq!(lemma_chains(&b).len(), 1);
        assert_eq!(head_lemma(&b.index(), &b.mentions[0]), "wall");
    }

    #[test]
    fn distinct_and_empty() {
        assert_eq!(lemma_chains(&bundle(&[("a", "a"), ("b", "b")])).len(), 2);
        assert!(lemma_baseline(&CorpusBundle::empty("t")).is_empty());
    }
}
