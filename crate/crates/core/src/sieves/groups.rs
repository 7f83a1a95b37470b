//! S4: groups of people.
//!
//! Mentions of common-noun group chains are pooled and re-clustered with
//! core detection; mentions that fit no core become singletons. Group chains
//! whose named-entity modifiers ("American" in "American officials") are
//! close to a country's heads are then merged into that country.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{ChainState, Pipeline, PipelineError, TraceEvent};
use crate::clustering::core_cluster;
use crate::corpus::{Chain, ChainOrigin};
use crate::type_scoring::{BaseType, ConceptType};
use crate::vectors::cosine;

pub(super) const RULE_CORE: &str = "s4_core";
pub(super) const RULE_COUNTRY: &str = "s4_country";

const GROUP_NN: ConceptType = ConceptType::new(BaseType::Group, false);
const COUNTRY_NE: ConceptType = ConceptType::new(BaseType::Country, true);

pub(super) fn run(p: &Pipeline<'_>, state: &mut ChainState) -> Result<(), PipelineError> {
    regroup(p, state)?;
    merge_into_countries(p, state)
}

fn regroup(p: &Pipeline<'_>, state: &mut ChainState) -> Result<(), PipelineError> {
    let matrix = p.config.matrices.get(4);
    if !matrix.allows(GROUP_NN, GROUP_NN) {
        return Ok(());
    }
    let pooled: Vec<Chain> = state
        .chains
        .iter()
        .filter(|c| c.concept_type == Some(GROUP_NN) && !p.features.is_ne_containing(c))
        .cloned()
        .collect();
    if pooled.is_empty() {
        return Ok(());
    }

    // Mentions in file order, with the chain each came from.
    let mut members = Vec::new();
    for c in &pooled {
        for m in p.features.members(c) {
            members.push((p.index.position(&m.id).unwrap_or(usize::MAX), m, c.id.as_str()));
        }
    }
    members.sort_by_key(|(pos, _, _)| *pos);
    let vectors = members
        .iter()
        .map(|(_, m, _)| p.features.mention_vector(m))
        .collect::<Result<Vec<_>, _>>()?;
    let clustering = core_cluster(&vectors, &p.config.core)?;

    let groups: Vec<(Vec<usize>, bool)> = clustering
        .clusters
        .into_iter()
        .map(|c| (c, true))
        .chain(clustering.unassigned.into_iter().map(|i| (vec![i], false)))
        .collect();

    let pooled_ids: BTreeSet<&str> = pooled.iter().map(|c| c.id.as_str()).collect();
    let mut rest = ChainState::new(
        state
            .chains
            .iter()
            .filter(|c| !pooled_ids.contains(c.id.as_str()))
            .cloned()
            .collect(),
    );
    let mut claimed: HashSet<String> = HashSet::new();
    let mut events = Vec::new();
    let mut rebuilt = Vec::new();

    for (items, clustered) in groups {
        let mention_ids: BTreeSet<String> = items.iter().map(|&i| members[i].1.id.clone()).collect();
        if let Some(same) = pooled.iter().find(|c| c.mention_ids == mention_ids) {
            if claimed.insert(same.id.clone()) {
                rebuilt.push(same.clone());
                continue;
            }
        }

        let mut sources: BTreeMap<&str, usize> = BTreeMap::new();
        for &i in &items {
            *sources.entry(members[i].2).or_default() += 1;
        }
        let largest = sources
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(id, _)| *id)
            .expect("group is non-empty");

        let id = if clustered && !claimed.contains(largest) {
            largest.to_string()
        } else {
            let prefix = if clustered { "g:" } else { "s:" };
            let mut id = format!("{prefix}{}", members[items[0]].1.id);
            while claimed.contains(&id) || pooled_ids.contains(id.as_str()) {
                id.push('\'');
            }
            rest.fresh_id(&id)
        };
        claimed.insert(id.clone());

        if clustered {
            for src in sources.keys().filter(|s| **s != id) {
                events.push(TraceEvent {
                    sieve: 4,
                    winner: id.clone(),
                    absorbed: src.to_string(),
                    rule: RULE_CORE.to_string(),
                    score: None,
                    winner_type: Some(GROUP_NN),
                    absorbed_type: Some(GROUP_NN),
                });
            }
        }
        let wiki_title = pooled
            .iter()
            .find(|c| c.id == largest)
            .and_then(|c| c.wiki_title.clone());
        rebuilt.push(Chain {
            id,
            mention_ids,
            concept_type: Some(GROUP_NN),
            wiki_title,
            origin: if clustered {
                ChainOrigin::Merged
            } else {
                ChainOrigin::Singleton
            },
        });
    }

    rest.chains.extend(rebuilt);
    state.chains = rest.chains;
    state.trace.extend(events);
    Ok(())
}

fn merge_into_countries(p: &Pipeline<'_>, state: &mut ChainState) -> Result<(), PipelineError> {
    let matrix = p.config.matrices.get(4);
    let mut countries = Vec::new();
    let mut groups = Vec::new();
    for c in &state.chains {
        match c.concept_type {
            Some(COUNTRY_NE) => {
                let heads = p.features.head_tokens(c);
                if !heads.is_empty() {
                    countries.push((c.id.clone(), p.features.vector(&heads)?));
                }
            }
            Some(t) if t.base == BaseType::Group => {
                let mods = p.features.ne_modifier_tokens(c);
                if !mods.is_empty() {
                    groups.push((c.id.clone(), t, p.features.vector(&mods)?));
                }
            }
            _ => {}
        }
    }

    let mut candidates = Vec::new();
    for (cid, hv) in &countries {
        for (gid, gt, mv) in &groups {
            if !matrix.allows(COUNTRY_NE, *gt) {
                continue;
            }
            let cos = cosine(hv, mv)?;
            if cos >= p.config.t_gr {
                candidates.push((cos, cid.as_str(), gid.as_str()));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut absorbed = HashSet::new();
    let merges: Vec<(f64, String, String)> = candidates
        .into_iter()
        .filter(|(_, _, g)| absorbed.insert(*g))
        .map(|(cos, c, g)| (cos, c.to_string(), g.to_string()))
        .collect();
    for (cos, country, group) in merges {
        state.merge(&country, &group, 4, RULE_COUNTRY, Some(cos));
    }
    Ok(())
}
