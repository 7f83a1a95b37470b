//! Score tables in the usual R / P / F1 per metric layout.

use std::fmt;

use serde::Serialize;

use crate::config::{Aggregate, ConfigFile};
use crate::scoring::{evaluate, ChainSet, Evaluation, MentionKey, MetricResult, ScoringError};

/// Gold and system chains of one topic.
#[derive(Debug, Clone)]
pub struct TopicPair {
    pub topic: String,
    pub gold: ChainSet,
    pub system: ChainSet,
}

fn qualified(topic: &str, set: &ChainSet) -> ChainSet {
    ChainSet::new(set.chains().iter().map(|c| {
        c.iter()
            .map(|k| MentionKey::new(format!("{topic}/{}", k.doc), k.sent, k.start, k.end))
            .collect::<Vec<_>>()
    }))
}

/// Scores every topic and combines them. Pooling prefixes document ids
/// with the topic so equal ids in different topics stay apart.
pub fn aggregate(
    pairs: &[TopicPair],
    mode: Aggregate,
) -> Result<(Evaluation, Vec<(String, Evaluation)>), ScoringError> {
    let per_topic = pairs
        .iter()
        .map(|p| Ok((p.topic.clone(), evaluate(&p.gold, &p.system)?)))
        .collect::<Result<Vec<_>, ScoringError>>()?;
    let total = match mode {
        Aggregate::Macro => {
            Evaluation::macro_average(&per_topic.iter().map(|(_, e)| *e).collect::<Vec<_>>())
        }
        Aggregate::Pooled => {
            let gold: Vec<ChainSet> = pairs.iter().map(|p| qualified(&p.topic, &p.gold)).collect();
            let system: Vec<ChainSet> = pairs.iter().map(|p| qualified(&p.topic, &p.system)).collect();
            evaluate(&ChainSet::pooled(&gold), &ChainSet::pooled(&system))?
        }
    };
    Ok((total, per_topic))
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub method: String,
    pub sieve: String,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub aggregate: Aggregate,
    pub rows: Vec<ReportRow>,
    /// Per-topic scores of the final system output.
    pub per_topic: Vec<(String, Evaluation)>,
    pub chain_count: usize,
    pub singleton_count: usize,
    pub config: ConfigFile,
    pub trace: Option<String>,
}

impl RunReport {
    /// Aggregate F1_CoNLL of the last row.
    pub fn final_conll(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.evaluation.conll_f1)
    }
}

fn cells(m: &MetricResult) -> String {
    format!(
        "{:>6.1} {:>6.1} {:>6.1}",
        100.0 * m.recall,
        100.0 * m.precision,
        100.0 * m.f1
    )
}

pub fn format_rows(rows: &[ReportRow]) -> String {
    let method_w = rows.iter().map(|r| r.method.len()).max().unwrap_or(0).max(6);
    let sieve_w = rows.iter().map(|r| r.sieve.len()).max().unwrap_or(0).max(5);
    let mut out = format!(
        "{:<mw$} {:<sw$} | {:^20} | {:^20} | {:^20} | {:>8}\n",
        "Method",
        "Sieve",
        "MUC",
        "B3",
        "CEAF_e",
        "F1_CoNLL",
        mw = method_w,
        sw = sieve_w
    );
    let rpf = format!("{:>6} {:>6} {:>6}", "R", "P", "F1");
    out.push_str(&format!(
        "{:<mw$} {:<sw$} | {rpf} | {rpf} | {rpf} | {:>8}\n",
        "",
        "",
        "",
        mw = method_w,
        sw = sieve_w
    ));
    for r in rows {
        let e = &r.evaluation;
        out.push_str(&format!(
            "{:<mw$} {:<sw$} | {} | {} | {} | {:>8.1}\n",
            r.method,
            r.sieve,
            cells(&e.muc),
            cells(&e.b_cubed),
            cells(&e.ceaf_e),
            100.0 * e.conll_f1,
            mw = method_w,
            sw = sieve_w
        ));
    }
    out
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rows(&self.rows))?;
        writeln!(f, "aggregate: {}", self.aggregate)?;
        writeln!(
            f,
            "chains: {} ({} singletons)",
            self.chain_count, self.singleton_count
        )?;
        if let Some(t) = &self.trace {
            writeln!(f, "trace: {t}")?;
        }
        writeln!(f, "F1_CoNLL {:.3}", self.final_conll())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(doc: &str, i: usize) -> MentionKey {
        MentionKey::new(doc, 0, i, i)
    }

    #[test]
    fn pooled_keeps_topics_apart() {
        let set = ChainSet::new(vec![vec![key("d", 0), key("d", 1)]]);
        let pairs = vec![
            TopicPair {
                topic: "a".into(),
                gold: set.clone(),
                system: set.clone(),
            },
            TopicPair {
                topic: "b".into(),
                gold: set.clone(),
                system: set,
            },
        ];
        let (total, per) = aggregate(&pairs, Aggregate::Pooled).unwrap();
        assert_eq!(total.conll_f1, 1.0);
        assert_eq!(per.len(), 2);
    }

    #[test]
    fn macro_is_mean() {
        let g = ChainSet::new(vec![vec![key("d", 0), key("d", 1)]]);
        let s_bad = ChainSet::new(vec![vec![key("d", 0)], vec![key("d", 1)]]);
        let pairs = vec![
            TopicPair {
                topic: "a".into(),
                gold: g.clone(),
                system: g.clone(),
            },
            TopicPair {
                topic: "b".into(),
                gold: g,
                system: s_bad,
            },
        ];
        let (total, per) = aggregate(&pairs, Aggregate::Macro).unwrap();
        let mean = (per[0].1.conll_f1 + per[1].1.conll_f1) / 2.0;
        assert!((total.conll_f1 - mean).abs() < 1e-15);
    }

    #[test]
    fn table_layout() {
        let e = Evaluation::from_metrics(
            MetricResult::new(1.0, 1.0),
            MetricResult::new(1.0, 1.0),
            MetricResult::new(1.0, 1.0),
        );
        let text = format_rows(&[ReportRow {
            method: "Lemma".into(),
            sieve: "-".into(),
            evaluation: e,
        }]);
        assert!(text.lines().nth(2).unwrap().ends_with("100.0"));
        assert_eq!(text.lines().count(), 3);
    }
}
