//! Chain and trace files written by the command line tool.
//!
//! Chains file:
//!
//! ```json
//! {
//!   "trace": "out.trace.jsonl",
//!   "chains": [
//!     {"topic": "t1", "chain_id": "c3",
//!      "mentions": [{"doc": "d1", "sent": 0, "start": 0, "end": 1}]}
//!   ]
//! }
//! ```
//!
//! Trace file: one merge per line,
//! `{"sieve":1,"winner":"c3","absorbed":"c7","rule":"s1_wiki","score":null,"topic":"t1"}`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{Chain, CorpusIndex};
use crate::scoring::{ChainSet, MentionKey};
use crate::sieves::TraceEvent;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub topic: String,
    pub chain_id: String,
    pub mentions: Vec<MentionKey>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainsFile {
    pub trace: Option<String>,
    pub chains: Vec<ChainRecord>,
}

impl ChainsFile {
    /// Appends one topic's chains, members in file order.
    pub fn push_topic(&mut self, topic: &str, chains: &[Chain], index: &CorpusIndex<'_>) {
        for c in chains {
            self.chains.push(ChainRecord {
                topic: topic.to_string(),
                chain_id: c.id.clone(),
                mentions: index.chain_mentions(c).into_iter().map(MentionKey::of).collect(),
            });
        }
    }

    /// Chain sets keyed by topic.
    pub fn by_topic(&self) -> BTreeMap<String, ChainSet> {
        let mut grouped: BTreeMap<String, Vec<Vec<MentionKey>>> = BTreeMap::new();
        for r in &self.chains {
            grouped.entry(r.topic.clone()).or_default().push(r.mentions.clone());
        }
        grouped
            .into_iter()
            .map(|(t, chains)| (t, ChainSet::new(chains)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("chains serialize");
        s.push('\n');
        s
    }
}

#[derive(Serialize)]
struct TraceLine<'a> {
    #[serde(flatten)]
    event: &'a TraceEvent,
    topic: &'a str,
}

pub fn write_trace<W: Write>(mut out: W, topic: &str, events: &[TraceEvent]) -> std::io::Result<()> {
    for event in events {
        serde_json::to_writer(&mut out, &TraceLine { event, topic })?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_line_format() {
        let e = TraceEvent {
            sieve: 1,
            winner: "c3".into(),
            absorbed: "c7".into(),
            rule: "s1_wiki".into(),
            score: None,
            winner_type: None,
            absorbed_type: None,
        };
        let mut buf = Vec::new();
        write_trace(&mut buf, "t1", &[e]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"sieve\":1,\"winner\":\"c3\",\"absorbed\":\"c7\",\"rule\":\"s1_wiki\",\"score\":null,\"topic\":\"t1\"}\n"
        );
    }

    #[test]
    fn chains_file_round_trip() {
        let f = ChainsFile {
            trace: None,
            chains: vec![ChainRecord {
                topic: "t".into(),
                chain_id: "c".into(),
                mentions: vec![MentionKey::new("d", 0, 1, 2)],
            }],
        };
        let back: ChainsFile = serde_json::from_str(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.by_topic()["t"].mention_count(), 1);
    }
}
