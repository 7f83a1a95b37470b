//! Chain hygiene and per-mention features: entity-link based chain
//! splitting, structure subtree capping, head modifiers and representative
//! phrases.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::corpus::{Chain, CorpusIndex, Mention, Token, MAX_SUBTREE_TOKENS};

/// Direct dependents of a mention head, bucketed by relation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Modifiers {
    pub compounds: Vec<usize>,
    pub appositions: Vec<usize>,
    pub adjectival: Vec<usize>,
    pub noun_mods: Vec<usize>,
}

impl Modifiers {
    pub fn is_empty(&self) -> bool {
        self.compounds.is_empty()
            && self.appositions.is_empty()
            && self.adjectival.is_empty()
            && self.noun_mods.is_empty()
    }
}

fn relation_base(rel: &str) -> &str {
    rel.split(':').next().unwrap_or(rel)
}

pub fn extract_modifiers(mention: &Mention) -> Modifiers {
    let mut mods = Modifiers::default();
    for edge in mention
        .dep_subtree
        .iter()
        .filter(|e| e.governor == mention.head_index)
    {
        let bucket = match relation_base(&edge.relation) {
            "compound" => &mut mods.compounds,
            "appos" => &mut mods.appositions,
            "amod" => &mut mods.adjectival,
            "nmod" | "nn" => &mut mods.noun_mods,
            _ => continue,
        };
        if !bucket.contains(&edge.dependent) {
            bucket.push(edge.dependent);
        }
    }
    mods
}

/// `root` plus everything below it in the mention's dependency subtree.
pub fn dependency_descendants(mention: &Mention, root: usize) -> Vec<usize> {
    let mut out = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(gov) = queue.pop_front() {
        for edge in mention.dep_subtree.iter().filter(|e| e.governor == gov) {
            if !out.contains(&edge.dependent) {
                out.push(edge.dependent);
                queue.push_back(edge.dependent);
            }
        }
    }
    out
}

fn lower(token: &Token) -> String {
    token.text.to_lowercase()
}

/// Lowercased head and direct adjectival/noun/compound modifiers of one
/// mention, plus the content words of every apposition.
pub fn mention_representative_phrase(mention: &Mention, sentence: &[Token]) -> BTreeSet<String> {
    let mods = extract_modifiers(mention);
    let text = |i: usize| sentence.get(i).map(lower);

    let mut out = BTreeSet::new();
    out.extend(text(mention.head_index));
    for &i in mods
        .adjectival
        .iter()
        .chain(&mods.noun_mods)
        .chain(&mods.compounds)
    {
        out.extend(text(i));
    }
    for &appos in &mods.appositions {
        out.extend(text(appos));
        for i in dependency_descendants(mention, appos).into_iter().skip(1) {
            if let Some(t) = sentence.get(i).filter(|t| !t.stopword) {
                out.insert(lower(t));
            }
        }
    }
    out
}

/// Union of the members' representative phrases.
pub fn representative_phrase(chain: &Chain, index: &CorpusIndex<'_>) -> BTreeSet<String> {
    index
        .chain_mentions(chain)
        .into_iter()
        .flat_map(|m| mention_representative_phrase(m, index.sentence(m)))
        .collect()
}

/// Largest constituent containing the head with at most 20 tokens; the
/// head alone when nothing qualifies. Constituents are inclusive ranges.
pub fn cap_structure_subtree(constituents: &[(usize, usize)], head_index: usize) -> Vec<usize> {
    constituents
        .iter()
        .filter(|(s, e)| s <= e && *s <= head_index && head_index <= *e)
        .filter(|(s, e)| e - s < MAX_SUBTREE_TOKENS)
        .max_by(|a, b| (a.1 - a.0).cmp(&(b.1 - b.0)).then(b.0.cmp(&a.0)))
        .map(|&(s, e)| (s..=e).collect())
        .unwrap_or_else(|| vec![head_index])
}

/// Splits chains whose members link to different encyclopedia pages.
///
/// Members are grouped by title; untitled members stay with the largest
/// titled group (ties go to the smaller title). The largest group keeps the
/// chain id, the others get `<id>#<title>`.
pub fn split_chains_by_wiki(chains: &[Chain], index: &CorpusIndex<'_>) -> Vec<Chain> {
    let mut out = Vec::with_capacity(chains.len());
    for chain in chains {
        let mut groups: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
        let mut untitled = BTreeSet::new();
        for id in &chain.mention_ids {
            match index.mention(id).and_then(|m| m.wiki_title.as_deref()) {
                Some(title) => {
                    groups.entry(title).or_default().insert(id.clone());
                }
                None => {
                    untitled.insert(id.clone());
                }
            }
        }

        if groups.is_empty() {
            out.push(chain.clone());
            continue;
        }

        let main = groups
            .iter()
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
            .map(|(t, _)| *t)
            .expect("non-empty");
        if groups.len() == 1 {
            let mut kept = chain.clone();
            kept.wiki_title = Some(main.to_string());
            out.push(kept);
            continue;
        }

        for (title, mut members) in groups {
            let id = if title == main {
                members.append(&mut untitled);
                chain.id.clone()
            } else {
                format!("{}#{}", chain.id, title)
            };
            out.push(Chain {
                id,
                mention_ids: members,
                concept_type: chain.concept_type,
                wiki_title: Some(title.to_string()),
                origin: chain.origin,
            });
        }
    }
    out
}
