//! Graphviz export of the instance/class graph.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write;

use crate::incremental::KnowledgeBase;
use crate::parser::render_term;
use crate::store::{Origin, Term, TermId, Triple};
use crate::vocab;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DotOptions {
    pub show_derived: bool,
    /// Restrict the graph to nodes within `depth` edges (in either
    /// direction) of this term.
    pub focus: Option<TermId>,
    pub depth: usize,
}

impl Default for DotOptions {
    fn default() -> Self {
        Self {
            show_derived: true,
            focus: None,
            depth: 1,
        }
    }
}

const HEADER: &str = "// capakb knowledge graph\n";

/// Whether a triple belongs in the picture: schema plumbing (collections,
/// restrictions, OWL/RDFS declarations) and literal values are left out.
fn drawable(kb: &KnowledgeBase, t: &Triple) -> bool {
    let store = kb.store();
    let v = store.vocabulary();
    let iri = |id: TermId| store.resolve(id).as_iri();
    let Some(o) = iri(t.o) else { return false };
    let Some(s) = iri(t.s) else { return false };
    let p = iri(t.p).unwrap_or_default();
    if vocab::is_skolem(s) || vocab::is_skolem(o) {
        return false;
    }
    if t.p != v.rdf_type && t.p != v.sub_class_of && [vocab::RDF_NS, vocab::RDFS_NS, vocab::OWL_NS].iter().any(|ns| p.starts_with(ns)) {
        return false;
    }
    !(o.starts_with(vocab::OWL_NS) || o.starts_with(vocab::RDFS_NS))
}

fn local_name(iri: &str) -> &str {
    iri.rsplit(['#', '/']).next().filter(|s| !s.is_empty()).unwrap_or(iri)
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders the graph as DOT. Individuals are ellipses and classes boxes;
/// asserted edges are solid and derived ones dashed; `rdf:type` edges are
/// labelled `isA`. Nodes and edges are sorted, so output is stable.
pub fn export_dot(kb: &KnowledgeBase, options: &DotOptions, prefixes: &BTreeMap<String, String>) -> String {
    let store = kb.store();
    let v = store.vocabulary();
    let lex = |id: TermId| store.resolve(id).lexical().to_string();

    let mut edges: Vec<(Triple, Origin)> = store
        .iter_with_origin()
        .filter(|(t, o)| (options.show_derived || *o == Origin::Asserted) && drawable(kb, t))
        .collect();

    if let Some(focus) = options.focus {
        let mut adj: HashMap<TermId, Vec<TermId>> = HashMap::new();
        for (t, _) in &edges {
            adj.entry(t.s).or_default().push(t.o);
            adj.entry(t.o).or_default().push(t.s);
        }
        let mut dist = HashMap::from([(focus, 0usize)]);
        let mut queue = VecDeque::from([focus]);
        while let Some(n) = queue.pop_front() {
            let d = dist[&n];
            if d == options.depth {
                continue;
            }
            for &m in adj.get(&n).into_iter().flatten() {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(m) {
                    e.insert(d + 1);
                    queue.push_back(m);
                }
            }
        }
        edges.retain(|(t, _)| dist.contains_key(&t.s) && dist.contains_key(&t.o));
    }

    if edges.is_empty() {
        return format!("{HEADER}digraph capakb {{}}\n");
    }

    let mut classes = BTreeSet::new();
    let mut nodes: BTreeMap<String, TermId> = BTreeMap::new();
    for (t, _) in &edges {
        nodes.insert(lex(t.s), t.s);
        nodes.insert(lex(t.o), t.o);
        if t.p == v.rdf_type {
            classes.insert(t.o);
        }
        if t.p == v.sub_class_of {
            classes.insert(t.s);
            classes.insert(t.o);
        }
    }

    let mut out = String::from(HEADER);
    out.push_str("digraph capakb {\n  rankdir=LR;\n");
    for (iri, id) in &nodes {
        let shape = if classes.contains(id) { "box" } else { "ellipse" };
        let label = render_term(&Term::iri(iri.clone()), prefixes);
        let _ = writeln!(out, "  {} [label={}, shape={shape}];", quoted(iri), quoted(&label));
    }
    let mut lines: Vec<(String, String, String, Origin)> = edges
        .iter()
        .map(|(t, o)| {
            let label = if t.p == v.rdf_type {
                "isA".to_string()
            } else {
                local_name(&lex(t.p)).to_string()
            };
            (lex(t.s), lex(t.o), label, *o)
        })
        .collect();
    lines.sort();
    for (s, o, label, origin) in lines {
        let style = match origin {
            Origin::Asserted => "solid",
            Origin::Derived => "dashed",
        };
        let _ = writeln!(out, "  {} -> {} [label={}, style={style}];", quoted(&s), quoted(&o), quoted(&label));
    }
    out.push_str("}\n");
    out
}
