//! Read-only questions over a materialized [`KnowledgeBase`]: capabilities,
//! instances, affordances, derivation trees and Graphviz export.

mod dot;
mod explain;

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

pub use dot::{export_dot, DotOptions};
pub use explain::{explain, DerivationNode};

use crate::incremental::KnowledgeBase;
use crate::model::Axiom;
use crate::store::{Pattern, TermId, Triple, TripleStore};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("fact not in store: {0}")]
    FactNotInStore(Triple),
    #[error("agent {agent} has {} capability individuals; expected at most one", found.len())]
    MultipleCapabilityIndividuals { agent: TermId, found: Vec<TermId> },
}

/// IRIs that give the capability query its meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapabilityVocabulary {
    pub has_capability: String,
    pub has_component: String,
    pub capability_root: String,
}

impl Default for CapabilityVocabulary {
    fn default() -> Self {
        Self {
            has_capability: "http://ex.org/hasCapability".into(),
            has_component: "http://ex.org/hasComponent".into(),
            capability_root: "http://ex.org/Capability".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapabilityReport {
    pub agent: TermId,
    /// `None` when the agent has no `hasCapability` edge.
    pub capability_individual: Option<TermId>,
    /// Types of the capability individual that are (reflexively and
    /// transitively) subclasses of the capability root.
    pub capabilities: BTreeSet<TermId>,
    /// The subset of `capabilities` defined by an equivalence axiom.
    pub defined: BTreeSet<TermId>,
    /// Everything reachable from the agent over `hasComponent`.
    pub components: BTreeSet<TermId>,
}

fn objects(store: &TripleStore, s: TermId, p: TermId) -> impl Iterator<Item = TermId> + '_ {
    store
        .matching(Pattern::new(Some(s), Some(p), None))
        .map(|t| t.o)
        .filter(|o| !store.dictionary().is_literal(*o))
}

/// Reachable set over `p` from `start`, excluding `start` unless it lies on
/// a cycle.
fn reachable(store: &TripleStore, start: TermId, p: TermId, forward: bool) -> BTreeSet<TermId> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        let next: Vec<TermId> = if forward {
            objects(store, n, p).collect()
        } else {
            store.matching(Pattern::new(None, Some(p), Some(n))).map(|t| t.s).collect()
        };
        for m in next {
            if seen.insert(m) {
                queue.push_back(m);
            }
        }
    }
    seen
}

pub fn capabilities_of(
    kb: &KnowledgeBase,
    agent: TermId,
    vocab: &CapabilityVocabulary,
) -> Result<CapabilityReport, QueryError> {
    let store = kb.store();
    let mut report = CapabilityReport {
        agent,
        capability_individual: None,
        capabilities: BTreeSet::new(),
        defined: BTreeSet::new(),
        components: BTreeSet::new(),
    };
    if let Some(hc) = store.lookup_iri(&vocab.has_component) {
        report.components = reachable(store, agent, hc, true);
    }
    let individuals: Vec<TermId> = match store.lookup_iri(&vocab.has_capability) {
        Some(hc) => objects(store, agent, hc).collect(),
        None => Vec::new(),
    };
    let individual = match individuals.as_slice() {
        [] => return Ok(report),
        [one] => *one,
        _ => {
            return Err(QueryError::MultipleCapabilityIndividuals {
                agent,
                found: individuals,
            })
        }
    };
    report.capability_individual = Some(individual);
    let Some(root) = store.lookup_iri(&vocab.capability_root) else {
        return Ok(report);
    };
    let vocab_ids = store.vocabulary();
    let mut under_root = reachable(store, root, vocab_ids.sub_class_of, false);
    under_root.insert(root);
    let defined_classes: BTreeSet<TermId> = kb
        .axioms()
        .iter()
        .filter_map(|a| match a {
            Axiom::EquivalentTo { class, .. } => class.as_named().copied(),
            _ => None,
        })
        .collect();
    for c in objects(store, individual, vocab_ids.rdf_type) {
        if under_root.contains(&c) {
            report.capabilities.insert(c);
            if defined_classes.contains(&c) {
                report.defined.insert(c);
            }
        }
    }
    Ok(report)
}

/// Every `x` with `type(x, class)`.
pub fn instances_of(kb: &KnowledgeBase, class: TermId) -> BTreeSet<TermId> {
    let ty = kb.store().vocabulary().rdf_type;
    kb.store()
        .matching(Pattern::new(None, Some(ty), Some(class)))
        .map(|t| t.s)
        .collect()
}

/// Every `(p, o)` with `p(agent, o)` for `p` among `properties`.
pub fn affordances_of(
    kb: &KnowledgeBase,
    agent: TermId,
    properties: &[TermId],
) -> BTreeSet<(TermId, TermId)> {
    properties
        .iter()
        .flat_map(|&p| objects(kb.store(), agent, p).map(move |o| (p, o)))
        .collect()
}
