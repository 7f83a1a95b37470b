//! Chain-level string and vector features shared by the sieves.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use super::PipelineConfig;
use crate::corpus::{Chain, CorpusIndex, Mention, Token};
use crate::preprocess::{extract_modifiers, representative_phrase};
use crate::vectors::{phrase_mean, weighted_phrase_vector, VectorError, VectorStore, WordVector};

const PROPER_NOUN_TAGS: &[&str] = &["NNP", "NNPS", "PROPN"];

pub struct Features<'a> {
    index: CorpusIndex<'a>,
    store: &'a VectorStore,
    config: &'a PipelineConfig,
    mention_vectors: RefCell<HashMap<String, WordVector>>,
    words: RefCell<BTreeSet<String>>,
}

fn lower(t: &Token) -> String {
    t.text.to_lowercase()
}

impl<'a> Features<'a> {
    pub fn new(index: CorpusIndex<'a>, store: &'a VectorStore, config: &'a PipelineConfig) -> Self {
        Features {
            index,
            store,
            config,
            mention_vectors: RefCell::new(HashMap::new()),
            words: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn members(&self, chain: &Chain) -> Vec<&'a Mention> {
        self.index.chain_mentions(chain)
    }

    /// Every word that has been looked up in the vector store so far.
    pub fn vectorized_words(&self) -> BTreeSet<String> {
        self.words.borrow().clone()
    }

    /// Copy of the token with the configured extra stopwords applied.
    pub fn prepared(&self, t: &Token) -> Token {
        let mut t = t.clone();
        if !t.stopword && self.config.stopwords.contains(&t.text.to_lowercase()) {
            t.stopword = true;
        }
        t
    }

    fn record(&self, tokens: &[&Token]) {
        let mut words = self.words.borrow_mut();
        let content: Vec<&&Token> = tokens.iter().filter(|t| !t.stopword).collect();
        if content.is_empty() {
            words.extend(tokens.iter().map(|t| t.text.clone()));
        } else {
            words.extend(content.iter().map(|t| t.text.clone()));
        }
    }

    /// Mean vector of the unique content words.
    pub fn vector(&self, tokens: &[Token]) -> Result<WordVector, VectorError> {
        let refs: Vec<&Token> = tokens.iter().collect();
        self.record(&refs);
        phrase_mean(self.store, &refs)
    }

    /// Head-weighted vector of a token sequence.
    pub fn weighted_vector(&self, tokens: &[Token], head: usize) -> Result<WordVector, VectorError> {
        let refs: Vec<&Token> = tokens.iter().collect();
        self.record(&refs);
        weighted_phrase_vector(self.store, &refs, head, self.config.k)
    }

    pub fn mention_tokens(&self, m: &Mention) -> Vec<Token> {
        self.index
            .span_tokens(m)
            .iter()
            .map(|t| self.prepared(t))
            .collect()
    }

    /// Mean vector of a mention's words, cached per mention.
    pub fn mention_vector(&self, m: &Mention) -> Result<WordVector, VectorError> {
        if let Some(v) = self.mention_vectors.borrow().get(&m.id) {
            return Ok(v.clone());
        }
        let v = self.vector(&self.mention_tokens(m))?;
        self.mention_vectors.borrow_mut().insert(m.id.clone(), v.clone());
        Ok(v)
    }

    /// Mean vector over the words of every member.
    pub fn chain_vector(&self, chain: &Chain) -> Result<WordVector, VectorError> {
        let tokens: Vec<Token> = self
            .members(chain)
            .into_iter()
            .flat_map(|m| self.mention_tokens(m))
            .collect();
        self.vector(&tokens)
    }

    pub fn is_ne_containing(&self, chain: &Chain) -> bool {
        self.members(chain).iter().any(|m| m.is_ne())
    }

    fn head_text(&self, m: &Mention) -> Option<String> {
        self.index.head_token(m).map(lower)
    }

    /// Lowercased heads of all members.
    pub fn heads(&self, chain: &Chain) -> BTreeSet<String> {
        self.members(chain)
            .into_iter()
            .filter_map(|m| self.head_text(m))
            .collect()
    }

    /// Lowercased heads of the named-entity members.
    pub fn ne_heads(&self, chain: &Chain) -> BTreeSet<String> {
        self.members(chain)
            .into_iter()
            .filter(|m| m.is_ne())
            .filter_map(|m| self.head_text(m))
            .collect()
    }

    /// Lowercased compound modifiers of the named-entity members' heads.
    pub fn ne_compounds(&self, chain: &Chain) -> BTreeSet<String> {
        self.members(chain)
            .into_iter()
            .filter(|m| m.is_ne())
            .flat_map(|m| {
                extract_modifiers(m)
                    .compounds
                    .into_iter()
                    .filter_map(move |i| self.index.token(m, i).map(lower))
            })
            .collect()
    }

    /// Lowercased non-stopword words of all members.
    pub fn content_words(&self, chain: &Chain) -> BTreeSet<String> {
        self.members(chain)
            .into_iter()
            .flat_map(|m| self.mention_tokens(m))
            .filter(|t| !t.stopword)
            .map(|t| lower(&t))
            .collect()
    }

    /// Lowercased compound and apposition modifiers of the members' heads.
    pub fn compound_appos(&self, chain: &Chain) -> BTreeSet<String> {
        self.members(chain)
            .into_iter()
            .flat_map(|m| {
                let mods = extract_modifiers(m);
                mods.compounds
                    .into_iter()
                    .chain(mods.appositions)
                    .filter_map(move |i| self.index.token(m, i).map(lower))
            })
            .collect()
    }

    pub fn representative(&self, chain: &Chain) -> BTreeSet<String> {
        representative_phrase(chain, &self.index)
    }

    pub fn head_tokens(&self, chain: &Chain) -> Vec<Token> {
        self.members(chain)
            .into_iter()
            .filter_map(|m| self.index.head_token(m).map(|t| self.prepared(t)))
            .collect()
    }

    /// A head modifier names an entity when it is a proper noun, lies inside
    /// a named-entity mention of the same sentence, or is a capitalized
    /// adjective that does not open the sentence.
    fn is_ne_modifier(&self, m: &Mention, i: usize, adjectival: bool) -> bool {
        let Some(t) = self.index.token(m, i) else {
            return false;
        };
        if PROPER_NOUN_TAGS.contains(&t.pos.as_str()) {
            return true;
        }
        if adjectival && i > 0 && t.text.chars().next().is_some_and(char::is_uppercase) {
            return true;
        }
        self.index.bundle().mentions.iter().any(|o| {
            o.is_ne() && o.doc_id == m.doc_id && o.sent_index == m.sent_index && o.span.contains(i)
        })
    }

    /// Compound and adjectival head modifiers that name entities, e.g.
    /// "American" in "American officials".
    pub fn ne_modifier_tokens(&self, chain: &Chain) -> Vec<Token> {
        let mut out = Vec::new();
        for m in self.members(chain) {
            let mods = extract_modifiers(m);
            let compounds = mods.compounds.iter().map(|&i| (i, false));
            let adjectives = mods.adjectival.iter().map(|&i| (i, true));
            for (i, adj) in compounds.chain(adjectives) {
                if self.is_ne_modifier(m, i, adj) {
                    if let Some(t) = self.index.token(m, i) {
                        out.push(self.prepared(t));
                    }
                }
            }
        }
        out
    }
}
