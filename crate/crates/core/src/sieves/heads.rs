//! S2: named-entity chains with a shared head, or a head that reappears as
//! another chain's compound ("Donald" / "Donald Trump"), are merged into the
//! larger chain.

use std::collections::{BTreeSet, HashSet};

use super::nel::winner_order;
use super::{ChainState, Pipeline};

pub(super) const RULE_HEAD: &str = "s2_head";
pub(super) const RULE_COMPOUND: &str = "s2_compound";

struct Entry {
    id: String,
    size: usize,
    heads: BTreeSet<String>,
    compounds: BTreeSet<String>,
}

fn rule(a: &Entry, b: &Entry) -> Option<&'static str> {
    if !a.heads.is_disjoint(&b.heads) {
        Some(RULE_HEAD)
    } else if !a.heads.is_disjoint(&b.compounds) || !b.heads.is_disjoint(&a.compounds) {
        Some(RULE_COMPOUND)
    } else {
        None
    }
}

pub(super) fn run(p: &Pipeline<'_>, state: &mut ChainState) {
    let matrix = p.config.matrices.get(2);
    loop {
        let entries: Vec<Entry> = state
            .chains
            .iter()
            .filter(|c| p.features.is_ne_containing(c))
            .map(|c| Entry {
                id: c.id.clone(),
                size: c.len(),
                heads: p.features.ne_heads(c),
                compounds: p.features.ne_compounds(c),
            })
            .collect();

        let mut candidates = Vec::new();
        for (i, a) in entries.iter().enumerate() {
            for b in &entries[i + 1..] {
                if !matrix.allows(state.type_of(&a.id), state.type_of(&b.id)) {
                    continue;
                }
                if let Some(r) = rule(a, b) {
                    let (lo, hi) = if a.id <= b.id { (a, b) } else { (b, a) };
                    candidates.push((a.size.min(b.size), lo.id.clone(), hi.id.clone(), r));
                }
            }
        }
        candidates.sort();

        let mut absorbed: HashSet<String> = HashSet::new();
        for (_, x, y, r) in candidates {
            if absorbed.contains(&x) || absorbed.contains(&y) {
                continue;
            }
            let (sx, sy) = (state.get(&x).map_or(0, |c| c.len()), state.get(&y).map_or(0, |c| c.len()));
            let (winner, loser) = if winner_order((sx, &x), (sy, &y)).is_le() {
                (x, y)
            } else {
                (y, x)
            };
            state.merge(&winner, &loser, 2, r, None);
            absorbed.insert(loser);
        }
        if absorbed.is_empty() {
            break;
        }
    }
}
