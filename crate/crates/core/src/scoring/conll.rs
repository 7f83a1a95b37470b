//! CoNLL-2012 column files: one token per line, coreference brackets in the
//! last column.
//!
//! ```text
//! #begin document (d1); part 000
//! d1	0	0	Kim	(0
//! d1	0	1	Jong	-
//! d1	0	2	Un	0)
//! d1	0	3	met	-
//! d1	0	4	him	(0)
//!
//! #end document
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use super::{ChainSet, MentionKey, ScoringError};
use crate::corpus::CorpusBundle;

/// Token text per sentence for each document, in output order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocLayout {
    pub docs: Vec<(String, Vec<Vec<String>>)>,
}

impl DocLayout {
    pub fn from_bundles<'a>(bundles: impl IntoIterator<Item = &'a CorpusBundle>) -> Self {
        let docs = bundles
            .into_iter()
            .flat_map(|b| &b.documents)
            .map(|d| {
                let sentences = d
                    .sentences
                    .iter()
                    .map(|s| s.iter().map(|t| t.text.clone()).collect())
                    .collect();
                (d.id.clone(), sentences)
            })
            .collect();
        DocLayout { docs }
    }

    /// Placeholder layout just large enough for the given mentions, with
    /// `_` as every token. Documents are ordered by id.
    pub fn infer<'a>(sets: impl IntoIterator<Item = &'a ChainSet>) -> Self {
        let mut extent: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for key in sets.into_iter().flat_map(|s| s.mentions()) {
            let sents = extent.entry(key.doc.as_str()).or_default();
            if sents.len() <= key.sent {
                sents.resize(key.sent + 1, 1);
            }
            sents[key.sent] = sents[key.sent].max(key.end + 1);
        }
        let docs = extent
            .into_iter()
            .map(|(doc, sents)| {
                let sentences = sents.into_iter().map(|n| vec!["_".to_string(); n]).collect();
                (doc.to_string(), sentences)
            })
            .collect();
        DocLayout { docs }
    }
}

/// Renders chains into CoNLL-2012 columns. Chain `i` of the set gets
/// coreference id `i`. Mentions outside the layout are silently absent.
/// Two spans of one chain that cross each other cannot be told apart by a
/// reader; nested and disjoint spans round-trip.
pub fn write_conll(layout: &DocLayout, chains: &ChainSet) -> String {
    // (doc, sent, token) -> (openers, closers, singles) as (chain, other end)
    type Marks = (Vec<(usize, usize)>, Vec<(usize, usize)>, Vec<usize>);
    let mut marks: HashMap<(&str, usize, usize), Marks> = HashMap::new();
    for (id, chain) in chains.chains().iter().enumerate() {
        for k in chain {
            if k.start == k.end {
                marks.entry((&k.doc, k.sent, k.start)).or_default().2.push(id);
            } else {
                marks.entry((&k.doc, k.sent, k.start)).or_default().0.push((id, k.end));
                marks.entry((&k.doc, k.sent, k.end)).or_default().1.push((id, k.start));
            }
        }
    }

    let mut out = String::new();
    for (doc, sentences) in &layout.docs {
        let _ = writeln!(out, "#begin document ({doc}); part 000");
        for (s, tokens) in sentences.iter().enumerate() {
            for (t, word) in tokens.iter().enumerate() {
                let column = match marks.get_mut(&(doc.as_str(), s, t)) {
                    Some((open, close, single)) => {
                        // Inner spans close first, outer spans open first.
                        close.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
                        single.sort_unstable();
                        open.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
                        let parts: Vec<String> = close
                            .iter()
                            .map(|(id, _)| format!("{id})"))
                            .chain(single.iter().map(|id| format!("({id})")))
                            .chain(open.iter().map(|(id, _)| format!("({id}")))
                            .collect();
                        parts.join("|")
                    }
                    None => "-".to_string(),
                };
                let word: String = word
                    .chars()
                    .map(|c| if c.is_whitespace() { '_' } else { c })
                    .collect();
                let _ = writeln!(out, "{doc}\t0\t{t}\t{word}\t{column}");
            }
            out.push('\n');
        }
        out.push_str("#end document\n");
    }
    out
}

/// Parses CoNLL-2012 columns back into chains, ordered by coreference id.
/// Sentences are counted by blank lines; the token index is the third
/// column.
pub fn read_conll(text: &str) -> Result<ChainSet, ScoringError> {
    let mut chains: BTreeMap<u64, Vec<MentionKey>> = BTreeMap::new();
    let mut doc: Option<String> = None;
    let mut sent = 0usize;
    let mut open: HashMap<u64, Vec<usize>> = HashMap::new();

    let err = |line: usize, message: String| ScoringError::Conll { line, message };

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim_end();
        if let Some(rest) = line.strip_prefix("#begin document") {
            let name = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .map(|(name, _)| name.to_string())
                .ok_or_else(|| err(line_no, "malformed #begin line".into()))?;
            doc = Some(name);
            sent = 0;
            open.clear();
            continue;
        }
        if line.starts_with("#end document") {
            if let Some((id, _)) = open.iter().find(|(_, v)| !v.is_empty()) {
                return Err(err(line_no, format!("chain {id} left open")));
            }
            doc = None;
            continue;
        }
        if line.is_empty() {
            if doc.is_some() {
                sent += 1;
            }
            continue;
        }
        let Some(doc_name) = doc.as_deref() else {
            return Err(err(line_no, "token line outside a document".into()));
        };
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() < 4 {
            return Err(err(line_no, format!("expected at least 4 columns, found {}", cols.len())));
        }
        let token: usize = cols[2]
            .parse()
            .map_err(|_| err(line_no, format!("bad token index {:?}", cols[2])))?;
        let coref = cols[cols.len() - 1];
        if coref == "-" {
            continue;
        }
        for part in coref.split('|') {
            let opens = part.starts_with('(');
            let closes = part.ends_with(')');
            let digits = part.trim_start_matches('(').trim_end_matches(')');
            let id: u64 = digits
                .parse()
                .map_err(|_| err(line_no, format!("bad coreference entry {part:?}")))?;
            match (opens, closes) {
                (true, true) => chains
                    .entry(id)
                    .or_default()
                    .push(MentionKey::new(doc_name, sent, token, token)),
                (true, false) => open.entry(id).or_default().push(token),
                (false, true) => {
                    let start = open
                        .get_mut(&id)
                        .and_then(Vec::pop)
                        .ok_or_else(|| err(line_no, format!("chain {id} closed without opening")))?;
                    chains
                        .entry(id)
                        .or_default()
                        .push(MentionKey::new(doc_name, sent, start, token));
                }
                (false, false) => return Err(err(line_no, format!("bad coreference entry {part:?}"))),
            }
        }
    }
    if doc.is_some() {
        return Err(err(text.lines().count(), "missing #end document".into()));
    }
    Ok(ChainSet::new(chains.into_values()))
}
