//! S1: chains linked to the same encyclopedia page are merged, the largest
//! chain taking the others.

use std::collections::BTreeMap;

use super::{ChainState, Pipeline};

pub(super) const RULE: &str = "s1_wiki";

/// Largest first, then smallest id.
pub(super) fn winner_order(a: (usize, &str), b: (usize, &str)) -> std::cmp::Ordering {
    b.0.cmp(&a.0).then(a.1.cmp(b.1))
}

pub(super) fn run(p: &Pipeline<'_>, state: &mut ChainState) {
    let matrix = p.config.matrices.get(1);
    let mut by_title: BTreeMap<String, Vec<(usize, String)>> = BTreeMap::new();
    for c in &state.chains {
        if let Some(title) = &c.wiki_title {
            by_title
                .entry(title.clone())
                .or_default()
                .push((c.len(), c.id.clone()));
        }
    }
    for (_, mut group) in by_title {
        if group.len() < 2 {
            continue;
        }
        group.sort_by(|a, b| winner_order((a.0, &a.1), (b.0, &b.1)));
        let winner = group[0].1.clone();
        for (_, other) in &group[1..] {
            if matrix.allows(state.type_of(&winner), state.type_of(other)) {
                state.merge(&winner, other, 1, RULE, None);
            }
        }
    }
}
