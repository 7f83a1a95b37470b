//! Corpus data model and its line-delimited JSON interchange format.
//!
//! One topic lives in one file. Every line holds one document object with
//! its tokenized sentences, the candidate mentions found in it and the
//! within-document coreference chains produced upstream:
//!
//! ```text
//! {"doc_id": "d1",
//!  "sentences": [[{"index": 0, "text": "Trump", "lemma": "Trump", "pos": "NNP", "stop": false}]],
//!  "mentions": [{"id": "m1", "sent": 0, "start": 0, "end": 0, "head": 0,
//!                "ne": "PERSON", "wiki": "Donald_Trump", "senses": [["noun.person", 1]],
//!                "dep": [], "struct": [0], "gold": "TRUMP"}],
//!  "chains": [{"id": "c1", "mentions": ["m1"], "wiki": null}]}
//! ```
//!
//! Chains may reference mentions from any document of the topic, since the
//! upstream resolver runs on the concatenated topic text. Mentions that no
//! chain covers are wrapped into singleton chains at load time.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::type_scoring::ConceptType;

/// Upper bound on the size of a mention's structure subtree.
pub const MAX_SUBTREE_TOKENS: usize = 20;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: schema error: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}: integrity error: {message}")]
    Integrity { line: usize, message: String },
}

impl CorpusError {
    fn integrity(line: usize, message: impl Into<String>) -> Self {
        CorpusError::Integrity {
            line,
            message: message.into(),
        }
    }

    /// Line of the offending record, when the error is tied to one.
    pub fn line(&self) -> Option<usize> {
        match self {
            CorpusError::Io { .. } => None,
            CorpusError::Schema { line, .. } | CorpusError::Integrity { line, .. } => Some(*line),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub index: usize,
    pub text: String,
    pub lemma: String,
    pub pos: String,
    #[serde(rename = "stop")]
    pub stopword: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Vec<Token>>,
}

/// Inclusive token range inside one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SenseRank {
    /// WordNet lexicographer category, e.g. `noun.person`.
    pub category: String,
    /// 1-based sense rank of the head word.
    pub rank: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DepEdge {
    pub governor: usize,
    pub dependent: usize,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub id: String,
    pub doc_id: String,
    pub sent_index: usize,
    pub span: Span,
    pub head_index: usize,
    pub ne_type: Option<String>,
    pub wiki_title: Option<String>,
    pub sense_ranks: Vec<SenseRank>,
    pub dep_subtree: Vec<DepEdge>,
    pub struct_subtree: Vec<usize>,
    /// Gold concept label. Only the scorer looks at it.
    pub gold_concept: Option<String>,
}

impl Mention {
    pub fn is_ne(&self) -> bool {
        self.ne_type.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChainOrigin {
    WithinDocCr,
    Singleton,
    Merged,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub id: String,
    pub mention_ids: BTreeSet<String>,
    pub concept_type: Option<ConceptType>,
    pub wiki_title: Option<String>,
    pub origin: ChainOrigin,
}

impl Chain {
    pub fn new<I, S>(id: impl Into<String>, mentions: I, origin: ChainOrigin) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Chain {
            id: id.into(),
            mention_ids: mentions.into_iter().map(Into::into).collect(),
            concept_type: None,
            wiki_title: None,
            origin,
        }
    }

    pub fn len(&self) -> usize {
        self.mention_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mention_ids.is_empty()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.id)?;
        for (i, m) in self.mention_ids.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(m)?;
        }
        f.write_str("}")
    }
}

/// A validated topic: documents, mentions and the chains covering them.
///
/// `chains` always partitions the mention set: upstream chains come first,
/// followed by one singleton chain per uncovered mention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusBundle {
    pub topic_id: String,
    pub documents: Vec<Document>,
    pub mentions: Vec<Mention>,
    pub chains: Vec<Chain>,
}

impl CorpusBundle {
    pub fn empty(topic_id: impl Into<String>) -> Self {
        CorpusBundle {
            topic_id: topic_id.into(),
            documents: Vec::new(),
            mentions: Vec::new(),
            chains: Vec::new(),
        }
    }

    pub fn index(&self) -> CorpusIndex<'_> {
        CorpusIndex::new(self)
    }

    /// The chains that came from the upstream within-document resolver.
    pub fn initial_chains(&self) -> impl Iterator<Item = &Chain> {
        self.chains
            .iter()
            .filter(|c| c.origin == ChainOrigin::WithinDocCr)
    }
}

/// Lookup tables over a bundle: mention id → mention, doc id → document.
#[derive(Debug, Clone)]
pub struct CorpusIndex<'a> {
    bundle: &'a CorpusBundle,
    mentions: HashMap<&'a str, usize>,
    docs: HashMap<&'a str, usize>,
}

impl<'a> CorpusIndex<'a> {
    pub fn new(bundle: &'a CorpusBundle) -> Self {
        let mentions = bundle
            .mentions
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.as_str(), i))
            .collect();
        let docs = bundle
            .documents
            .iter()
            .enumerate()
            .map(|(i, d)| (d.id.as_str(), i))
            .collect();
        CorpusIndex {
            bundle,
            mentions,
            docs,
        }
    }

    pub fn bundle(&self) -> &'a CorpusBundle {
        self.bundle
    }

    pub fn mention(&self, id: &str) -> Option<&'a Mention> {
        self.mentions.get(id).map(|&i| &self.bundle.mentions[i])
    }

    /// Position of the mention in file order.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.mentions.get(id).copied()
    }

    pub fn document(&self, id: &str) -> Option<&'a Document> {
        self.docs.get(id).map(|&i| &self.bundle.documents[i])
    }

    /// Sentence tokens the mention lives in.
    pub fn sentence(&self, mention: &Mention) -> &'a [Token] {
        self.document(&mention.doc_id)
            .and_then(|d| d.sentences.get(mention.sent_index))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn token(&self, mention: &Mention, index: usize) -> Option<&'a Token> {
        self.sentence(mention).get(index)
    }

    pub fn head_token(&self, mention: &Mention) -> Option<&'a Token> {
        self.token(mention, mention.head_index)
    }

    pub fn span_tokens(&self, mention: &Mention) -> &'a [Token] {
        let sentence = self.sentence(mention);
        sentence
            .get(mention.span.start..=mention.span.end)
            .unwrap_or(&[])
    }

    /// Chain members in file order.
    pub fn chain_mentions(&self, chain: &Chain) -> Vec<&'a Mention> {
        let mut members: Vec<_> = chain
            .mention_ids
            .iter()
            .filter_map(|id| self.mentions.get(id.as_str()).copied())
            .collect();
        members.sort_unstable();
        members
            .into_iter()
            .map(|i| &self.bundle.mentions[i])
            .collect()
    }
}

/// True iff `chains` partitions exactly the ids of `mentions`.
pub fn chain_partition_check(chains: &[Chain], mentions: &[Mention]) -> bool {
    let universe: HashSet<&str> = mentions.iter().map(|m| m.id.as_str()).collect();
    let mut seen = HashSet::with_capacity(universe.len());
    for chain in chains {
        if chain.mention_ids.is_empty() {
            return false;
        }
        for id in &chain.mention_ids {
            if !universe.contains(id.as_str()) || !seen.insert(id.as_str()) {
                return false;
            }
        }
    }
    seen.len() == universe.len()
}

#[derive(Debug, Serialize, Deserialize)]
struct RawDocument {
    doc_id: String,
    sentences: Vec<Vec<Token>>,
    #[serde(default)]
    mentions: Vec<RawMention>,
    #[serde(default)]
    chains: Vec<RawChain>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawMention {
    id: String,
    sent: usize,
    start: usize,
    end: usize,
    head: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ne: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wiki: Option<String>,
    #[serde(default)]
    senses: Vec<(String, u32)>,
    #[serde(default)]
    dep: Vec<(usize, usize, String)>,
    #[serde(default, rename = "struct")]
    structure: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gold: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawChain {
    id: String,
    mentions: Vec<String>,
    #[serde(default)]
    wiki: Option<String>,
}

/// Loads one topic file. The topic id is the file stem.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<CorpusBundle, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let topic = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_corpus(BufReader::new(file), topic).map_err(|e| match e {
        CorpusError::Io { source, .. } => CorpusError::Io {
            path: path.display().to_string(),
            source,
        },
        other => other,
    })
}

/// Parses and validates a topic from any buffered reader.
pub fn read_corpus<R: BufRead>(
    reader: R,
    topic_id: impl Into<String>,
) -> Result<CorpusBundle, CorpusError> {
    let mut documents = Vec::new();
    let mut mentions = Vec::new();
    // (line, raw chain) pairs, resolved once every mention is known.
    let mut raw_chains = Vec::new();
    let mut mention_ids: HashMap<String, usize> = HashMap::new();
    let mut doc_ids = HashSet::new();

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: String::new(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawDocument =
            serde_json::from_str(&line).map_err(|e| CorpusError::Schema {
                line: lineno,
                message: e.to_string(),
            })?;

        if !doc_ids.insert(raw.doc_id.clone()) {
            return Err(CorpusError::integrity(
                lineno,
                format!("duplicate document id {:?}", raw.doc_id),
            ));
        }
        validate_sentences(&raw, lineno)?;

        for rm in raw.mentions {
            let mention = build_mention(rm, &raw.doc_id, &raw.sentences, lineno)?;
            if mention_ids.insert(mention.id.clone(), mentions.len()).is_some() {
                return Err(CorpusError::integrity(
                    lineno,
                    format!("duplicate mention id {:?}", mention.id),
                ));
            }
            mentions.push(mention);
        }
        raw_chains.extend(raw.chains.into_iter().map(|c| (lineno, c)));
        documents.push(Document {
            id: raw.doc_id,
            sentences: raw.sentences,
        });
    }

    let mut chains = Vec::with_capacity(raw_chains.len());
    let mut covered: HashMap<String, String> = HashMap::new();
    let mut chain_ids = HashSet::new();
    for (lineno, rc) in raw_chains {
        if rc.mentions.is_empty() {
            return Err(CorpusError::integrity(
                lineno,
                format!("chain {:?} has no mentions", rc.id),
            ));
        }
        if !chain_ids.insert(rc.id.clone()) {
            return Err(CorpusError::integrity(
                lineno,
                format!("duplicate chain id {:?}", rc.id),
            ));
        }
        for mid in &rc.mentions {
            if !mention_ids.contains_key(mid) {
                return Err(CorpusError::integrity(
                    lineno,
                    format!("chain {:?} references unknown mention {:?}", rc.id, mid),
                ));
            }
            if let Some(other) = covered.insert(mid.clone(), rc.id.clone()) {
                if other != rc.id {
                    return Err(CorpusError::integrity(
                        lineno,
                        format!("mention {mid:?} appears in chains {other:?} and {:?}", rc.id),
                    ));
                }
            }
        }
        let mut chain = Chain::new(rc.id, rc.mentions, ChainOrigin::WithinDocCr);
        chain.wiki_title = rc.wiki;
        chains.push(chain);
    }

    // Canonical order: by the file position of each chain's first mention.
    chains.sort_by_key(|c| {
        c.mention_ids
            .iter()
            .map(|m| mention_ids[m])
            .min()
            .unwrap_or(usize::MAX)
    });

    for mention in &mentions {
        if covered.contains_key(&mention.id) {
            continue;
        }
        let mut id = format!("s:{}", mention.id);
        while chain_ids.contains(&id) {
            id.push('\'');
        }
        chain_ids.insert(id.clone());
        let mut chain = Chain::new(id, [mention.id.clone()], ChainOrigin::Singleton);
        chain.wiki_title = mention.wiki_title.clone();
        chains.push(chain);
    }

    Ok(CorpusBundle {
        topic_id: topic_id.into(),
        documents,
        mentions,
        chains,
    })
}

fn validate_sentences(raw: &RawDocument, line: usize) -> Result<(), CorpusError> {
    for (s, sentence) in raw.sentences.iter().enumerate() {
        for (i, token) in sentence.iter().enumerate() {
            if token.index != i {
                return Err(CorpusError::integrity(
                    line,
                    format!(
                        "sentence {s}: token at position {i} has index {}",
                        token.index
                    ),
                ));
            }
            if token.text.is_empty() {
                return Err(CorpusError::integrity(
                    line,
                    format!("sentence {s}: token {i} has empty text"),
                ));
            }
        }
    }
    Ok(())
}

fn build_mention(
    rm: RawMention,
    doc_id: &str,
    sentences: &[Vec<Token>],
    line: usize,
) -> Result<Mention, CorpusError> {
    let fail = |msg: String| CorpusError::integrity(line, format!("mention {:?}: {msg}", rm.id));

    let sentence = sentences
        .get(rm.sent)
        .ok_or_else(|| fail(format!("sentence {} does not exist", rm.sent)))?;
    if rm.start > rm.end {
        return Err(fail(format!("span [{}, {}] has start > end", rm.start, rm.end)));
    }
    if rm.end >= sentence.len() {
        return Err(fail(format!(
            "span [{}, {}] exceeds sentence of {} tokens",
            rm.start,
            rm.end,
            sentence.len()
        )));
    }
    let span = Span::new(rm.start, rm.end);
    if !span.contains(rm.head) {
        return Err(fail(format!("head {} outside span", rm.head)));
    }

    let mut dep_set = BTreeSet::from([rm.head]);
    for (gov, dep, _) in &rm.dep {
        dep_set.insert(*gov);
        dep_set.insert(*dep);
    }
    let structure = rm
        .structure
        .clone()
        .unwrap_or_else(|| dep_set.iter().copied().collect());
    if structure.len() > MAX_SUBTREE_TOKENS {
        return Err(fail(format!(
            "structure subtree has {} tokens (max {MAX_SUBTREE_TOKENS})",
            structure.len()
        )));
    }
    let struct_set: BTreeSet<usize> = structure.iter().copied().collect();
    if struct_set.len() != structure.len() {
        return Err(fail("structure subtree repeats a token".into()));
    }
    if !struct_set.contains(&rm.head) {
        return Err(fail("structure subtree does not contain the head".into()));
    }
    if let Some(&bad) = struct_set.iter().find(|&&t| t >= sentence.len()) {
        return Err(fail(format!("structure subtree token {bad} out of range")));
    }

    if dep_set != struct_set {
        return Err(fail(
            "dependency subtree tokens differ from structure subtree tokens".into(),
        ));
    }

    let mut seen_senses = HashSet::new();
    for (cat, rank) in &rm.senses {
        if *rank == 0 {
            return Err(fail(format!("sense {cat} has rank 0")));
        }
        if !seen_senses.insert((cat.as_str(), *rank)) {
            return Err(fail(format!("sense {cat} repeated at rank {rank}")));
        }
    }

    Ok(Mention {
        id: rm.id,
        doc_id: doc_id.to_string(),
        sent_index: rm.sent,
        span,
        head_index: rm.head,
        ne_type: rm.ne,
        wiki_title: rm.wiki,
        sense_ranks: rm
            .senses
            .into_iter()
            .map(|(category, rank)| SenseRank { category, rank })
            .collect(),
        dep_subtree: rm
            .dep
            .into_iter()
            .map(|(governor, dependent, relation)| DepEdge {
                governor,
                dependent,
                relation,
            })
            .collect(),
        struct_subtree: structure,
        gold_concept: rm.gold,
    })
}

/// Writes a bundle back in the interchange format.
///
/// Singleton wrappers are implicit and not written; every upstream chain is
/// stored on the line of the document holding its first mention.
pub fn write_corpus<W: Write>(bundle: &CorpusBundle, mut out: W) -> io::Result<()> {
    let position: HashMap<&str, usize> = bundle
        .mentions
        .iter()
        .enumerate()
        .map(|(i, m)| (m.id.as_str(), i))
        .collect();

    let mut chains_by_doc: HashMap<&str, Vec<&Chain>> = HashMap::new();
    for chain in bundle.initial_chains() {
        let first = chain
            .mention_ids
            .iter()
            .filter_map(|m| position.get(m.as_str()))
            .min()
            .copied();
        if let Some(first) = first {
            chains_by_doc
                .entry(bundle.mentions[first].doc_id.as_str())
                .or_default()
                .push(chain);
        }
    }

    for doc in &bundle.documents {
        let mentions = bundle
            .mentions
            .iter()
            .filter(|m| m.doc_id == doc.id)
            .map(|m| RawMention {
                id: m.id.clone(),
                sent: m.sent_index,
                start: m.span.start,
                end: m.span.end,
                head: m.head_index,
                ne: m.ne_type.clone(),
                wiki: m.wiki_title.clone(),
                senses: m
                    .sense_ranks
                    .iter()
                    .map(|s| (s.category.clone(), s.rank))
                    .collect(),
                dep: m
                    .dep_subtree
                    .iter()
                    .map(|e| (e.governor, e.dependent, e.relation.clone()))
                    .collect(),
                structure: Some(m.struct_subtree.clone()),
                gold: m.gold_concept.clone(),
            })
            .collect();
        let chains = chains_by_doc
            .remove(doc.id.as_str())
            .unwrap_or_default()
            .into_iter()
            .map(|c| {
                let mut ids: Vec<&String> = c.mention_ids.iter().collect();
                ids.sort_by_key(|m| position.get(m.as_str()).copied().unwrap_or(usize::MAX));
                RawChain {
                    id: c.id.clone(),
                    mentions: ids.into_iter().cloned().collect(),
                    wiki: c.wiki_title.clone(),
                }
            })
            .collect();
        let raw = RawDocument {
            doc_id: doc.id.clone(),
            sentences: doc.sentences.clone(),
            mentions,
            chains,
        };
        serde_json::to_writer(&mut out, &raw)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok(i: usize, text: &str) -> String {
        format!(
            r#"{{"index":{i},"text":"{text}","lemma":"{}","pos":"NN","stop":false}}"#,
            text.to_lowercase()
        )
    }

    fn doc_line(doc: &str, words: &[&str], mentions: &str, chains: &str) -> String {
        let toks: Vec<_> = words.iter().enumerate().map(|(i, w)| tok(i, w)).collect();
        format!(
            r#"{{"doc_id":"{doc}","sentences":[[{}]],"mentions":[{mentions}],"chains":[{chains}]}}"#,
            toks.join(",")
        )
    }

    fn parse(text: &str) -> Result<CorpusBundle, CorpusError> {
        read_corpus(text.as_bytes(), "t")
    }

    #[test]
    fn minimal_file_wraps_singleton() {
        let text = doc_line(
            "d1",
            &["Trump", "spoke"],
            r#"{"id":"m1","sent":0,"start":0,"end":0,"head":0}"#,
            "",
        );
        let bundle = parse(&text).unwrap();
        assert_eq!(bundle.mentions.len(), 1);
        assert_eq!(bundle.chains.len(), 1);
        assert_eq!(bundle.chains[0].origin, ChainOrigin::Singleton);
        assert_eq!(bundle.mentions[0].struct_subtree, vec![0]);
        assert!(chain_partition_check(&bundle.chains, &bundle.mentions));
    }

    #[test]
    fn reversed_span_is_integrity_error() {
        let words: Vec<String> = (0..8).map(|i| format!("w{i}")).collect();
        let words: Vec<&str> = words.iter().map(String::as_str).collect();
        let text = doc_line(
            "d1",
            &words,
            r#"{"id":"m1","sent":0,"start":5,"end":3,"head":4}"#,
            "",
        );
        let err = parse(&text).unwrap_err();
        assert!(matches!(err, CorpusError::Integrity { line: 1, .. }), "{err}");
    }

    #[test]
    fn missing_field_names_the_line() {
        let ok = doc_line("d1", &["a"], r#"{"id":"m1","sent":0,"start":0,"end":0,"head":0}"#, "");
        let bad = doc_line("d2", &["b"], r#"{"id":"m2","sent":0,"start":0,"head":0}"#, "");
        let err = parse(&format!("{ok}\n{bad}\n")).unwrap_err();
        match err {
            CorpusError::Schema { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("end"), "{message}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn mistyped_field_is_schema_error() {
        let bad = doc_line("d1", &["a"], r#"{"id":"m1","sent":"zero","start":0,"end":0,"head":0}"#, "");
        assert!(matches!(parse(&bad), Err(CorpusError::Schema { line: 1, .. })));
    }

    #[test]
    fn dangling_chain_reference() {
        let text = doc_line(
            "d1",
            &["a"],
            r#"{"id":"m1","sent":0,"start":0,"end":0,"head":0}"#,
            r#"{"id":"c1","mentions":["m1","m9"]}"#,
        );
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("m9"));
    }

    #[test]
    fn oversized_subtree_rejected() {
        let words: Vec<String> = (0..25).map(|i| format!("w{i}")).collect();
        let words: Vec<&str> = words.iter().map(String::as_str).collect();
        let structure: Vec<String> = (0..21).map(|i| i.to_string()).collect();
        let deps: Vec<String> = (1..21).map(|i| format!(r#"[0,{i},"dep"]"#)).collect();
        let mention = format!(
            r#"{{"id":"m1","sent":0,"start":0,"end":0,"head":0,"struct":[{}],"dep":[{}]}}"#,
            structure.join(","),
            deps.join(",")
        );
        let err = parse(&doc_line("d1", &words, &mention, "")).unwrap_err();
        assert!(err.to_string().contains("max 20"), "{err}");
    }

    #[test]
    fn dep_and_struct_must_agree() {
        let mention =
            r#"{"id":"m1","sent":0,"start":0,"end":1,"head":1,"struct":[0,1],"dep":[]}"#;
        let err = parse(&doc_line("d1", &["Donald", "Trump"], mention, "")).unwrap_err();
        assert!(matches!(err, CorpusError::Integrity { .. }));
    }

    #[test]
    fn sense_rank_zero_rejected() {
        let mention =
            r#"{"id":"m1","sent":0,"start":0,"end":0,"head":0,"senses":[["noun.person",0]]}"#;
        assert!(parse(&doc_line("d1", &["a"], mention, "")).is_err());
    }

    #[test]
    fn mention_in_two_chains_rejected() {
        let text = doc_line(
            "d1",
            &["a", "b"],
            r#"{"id":"m1","sent":0,"start":0,"end":0,"head":0},{"id":"m2","sent":0,"start":1,"end":1,"head":1}"#,
            r#"{"id":"c1","mentions":["m1","m2"]},{"id":"c2","mentions":["m2"]}"#,
        );
        assert!(parse(&text).is_err());
    }

    #[test]
    fn partition_check_cases() {
        let mentions: Vec<Mention> = ["a", "b", "c"]
            .iter()
            .map(|id| Mention {
                id: id.to_string(),
                doc_id: "d".into(),
                sent_index: 0,
                span: Span::new(0, 0),
                head_index: 0,
                ne_type: None,
                wiki_title: None,
                sense_ranks: vec![],
                dep_subtree: vec![],
                struct_subtree: vec![0],
                gold_concept: None,
            })
            .collect();
        let ch = |id: &str, ms: &[&str]| Chain::new(id, ms.iter().copied(), ChainOrigin::Merged);
        assert!(chain_partition_check(
            &[ch("x", &["a", "b"]), ch("y", &["c"])],
            &mentions
        ));
        assert!(!chain_partition_check(
            &[ch("x", &["a", "b"]), ch("y", &["b", "c"])],
            &mentions
        ));
        assert!(!chain_partition_check(&[ch("x", &["a"])], &mentions[..2]));
    }
}
