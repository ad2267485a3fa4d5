//! Derivation trees from recorded supports.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use super::QueryError;
use crate::incremental::{KnowledgeBase, Support};
use crate::parser::render_term;
use crate::store::{Origin, Triple, TripleStore};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationNode {
    pub fact: Triple,
    pub kind: Origin,
    /// Rule that produced the fact; `None` for asserted facts.
    pub rule: Option<String>,
    /// Instantiated premises, in rule-body order.
    pub children: Vec<DerivationNode>,
    /// Set when the depth limit (or a cycle) stopped the expansion here.
    pub truncated: bool,
}

impl DerivationNode {
    /// Number of node levels (a leaf has height 1).
    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Self::height).max().unwrap_or(0)
    }

    /// Indented text rendering, one fact per line.
    pub fn render(&self, store: &TripleStore, prefixes: &BTreeMap<String, String>) -> String {
        let mut out = String::new();
        self.render_into(store, prefixes, 0, &mut out);
        out
    }

    fn render_into(
        &self,
        store: &TripleStore,
        prefixes: &BTreeMap<String, String>,
        depth: usize,
        out: &mut String,
    ) {
        let t = |id| render_term(store.resolve(id), prefixes);
        let _ = write!(out, "{:indent$}{} {} {}", "", t(self.fact.s), t(self.fact.p), t(self.fact.o), indent = depth * 2);
        match (&self.rule, self.truncated) {
            (None, _) => out.push_str("  (asserted)"),
            (Some(rule), false) => {
                let _ = write!(out, "  [{rule}]");
            }
            (Some(rule), true) => {
                let _ = write!(out, "  [{rule}] ...");
            }
        }
        out.push('\n');
        for c in &self.children {
            c.render_into(store, prefixes, depth + 1, out);
        }
    }
}

/// Builds a derivation tree for `fact`, expanding at most `max_depth` rule
/// applications below the root.
///
/// Each derived node expands one support: among supports whose premises
/// were all stored before the fact itself (so the tree is well founded),
/// the one with the smallest rule name, then the smallest premises.
pub fn explain(kb: &KnowledgeBase, fact: Triple, max_depth: usize) -> Result<DerivationNode, QueryError> {
    if !kb.store().contains(&fact) {
        return Err(QueryError::FactNotInStore(fact));
    }
    let mut path = HashSet::new();
    Ok(build(kb, fact, max_depth, &mut path))
}

fn build(kb: &KnowledgeBase, fact: Triple, budget: usize, path: &mut HashSet<Triple>) -> DerivationNode {
    let store = kb.store();
    if store.origin(&fact) != Some(Origin::Derived) {
        return DerivationNode {
            fact,
            kind: Origin::Asserted,
            rule: None,
            children: Vec::new(),
            truncated: false,
        };
    }
    let name = |s: &Support| kb.program().rule(s.rule).name.as_str();
    let stamp = store.stamp(&fact);
    let well_founded = |s: &&Support| s.premises.iter().all(|p| store.stamp(p) < stamp);
    let acyclic = |s: &&Support| s.premises.iter().all(|p| !path.contains(p));
    let key = |s: &&Support| (name(s).to_string(), s.premises.clone());
    let chosen = kb
        .provenance()
        .supports_of(&fact)
        .filter(well_founded)
        .min_by_key(key)
        .or_else(|| kb.provenance().supports_of(&fact).filter(acyclic).min_by_key(key));

    let Some(support) = chosen else {
        return DerivationNode {
            fact,
            kind: Origin::Derived,
            rule: None,
            children: Vec::new(),
            truncated: true,
        };
    };
    let rule = Some(name(support).to_string());
    if budget == 0 {
        return DerivationNode {
            fact,
            kind: Origin::Derived,
            rule,
            children: Vec::new(),
            truncated: true,
        };
    }
    path.insert(fact);
    let children = support
        .premises
        .iter()
        .map(|p| build(kb, *p, budget - 1, path))
        .collect();
    path.remove(&fact);
    DerivationNode {
        fact,
        kind: Origin::Derived,
        rule,
        children,
        truncated: false,
    }
}
