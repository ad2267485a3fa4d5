//! Dictionary-encoded triple store with `spo`, `pos` and `osp` indexes.
//!
//! Every triple lives in all three orderings, which serve range scans, and in
//! a hashed metadata table that serves point lookups. The metadata records
//! whether the triple was asserted or derived and a monotonically increasing
//! insertion stamp that the explainer uses to pick well-founded supports.

mod dictionary;

use std::collections::{btree_set, BTreeSet};
use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

pub use dictionary::{is_absolute_iri, Dictionary, LiteralKind, Term, TermId, TermKind};

use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("malformed IRI (no scheme): {0:?}")]
    MalformedIri(String),
    #[error("empty lexical form")]
    EmptyLexical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub s: TermId,
    pub p: TermId,
    pub o: TermId,
}

impl Triple {
    pub const fn new(s: TermId, p: TermId, o: TermId) -> Self {
        Self { s, p, o }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.s, self.p, self.o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Asserted,
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct FactMeta {
    origin: Origin,
    stamp: u64,
}

/// A lookup pattern; `None` is a wildcard.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Pattern {
    pub s: Option<TermId>,
    pub p: Option<TermId>,
    pub o: Option<TermId>,
}

impl Pattern {
    pub fn new(s: Option<TermId>, p: Option<TermId>, o: Option<TermId>) -> Self {
        Self { s, p, o }
    }

    pub fn matches(&self, t: &Triple) -> bool {
        self.s.is_none_or(|s| s == t.s)
            && self.p.is_none_or(|p| p == t.p)
            && self.o.is_none_or(|o| o == t.o)
    }
}

/// Reserved ids for the two predicates the compiled rules refer to directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vocabulary {
    pub rdf_type: TermId,
    pub sub_class_of: TermId,
}

type Key = (TermId, TermId, TermId);

#[derive(Debug, Clone)]
pub struct TripleStore {
    dict: Dictionary,
    vocab: Vocabulary,
    /// Point lookups; the ordered indexes below serve range scans.
    meta: FxHashMap<Key, FactMeta>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    asserted: usize,
    next_stamp: u64,
}

impl Default for TripleStore {
    fn default() -> Self {
        Self::new()
    }
}

impl TripleStore {
    pub fn new() -> Self {
        let mut dict = Dictionary::new();
        let vocab = Vocabulary {
            rdf_type: dict.intern_iri(vocab::RDF_TYPE).expect("valid IRI"),
            sub_class_of: dict.intern_iri(vocab::RDFS_SUB_CLASS_OF).expect("valid IRI"),
        };
        Self {
            dict,
            vocab,
            meta: FxHashMap::default(),
            spo: BTreeSet::new(),
            pos: BTreeSet::new(),
            osp: BTreeSet::new(),
            asserted: 0,
            next_stamp: 0,
        }
    }

    pub fn vocabulary(&self) -> Vocabulary {
        self.vocab
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    pub fn intern(&mut self, term: &Term) -> Result<TermId, StoreError> {
        self.dict.intern(term)
    }

    pub fn intern_iri(&mut self, iri: &str) -> Result<TermId, StoreError> {
        self.dict.intern_iri(iri)
    }

    pub fn resolve(&self, id: TermId) -> &Term {
        self.dict.resolve(id)
    }

    pub fn lookup(&self, term: &Term) -> Option<TermId> {
        self.dict.get(term)
    }

    pub fn lookup_iri(&self, iri: &str) -> Option<TermId> {
        self.dict.get_iri(iri)
    }

    /// Returns true iff the triple was absent. Re-inserting a derived triple
    /// as asserted upgrades its flag (and still returns false).
    pub fn insert(&mut self, t: Triple, origin: Origin) -> bool {
        debug_assert!(self.dict.try_resolve(t.s).is_some());
        debug_assert!(self.dict.try_resolve(t.o).is_some());
        debug_assert_eq!(
            self.dict.try_resolve(t.p).map(Term::kind),
            Some(TermKind::Iri),
            "predicate must be an IRI"
        );
        if let Some(meta) = self.meta.get_mut(&(t.s, t.p, t.o)) {
            if origin == Origin::Asserted && meta.origin == Origin::Derived {
                meta.origin = Origin::Asserted;
                self.asserted += 1;
            }
            return false;
        }
        let stamp = self.next_stamp;
        self.next_stamp += 1;
        self.meta.insert((t.s, t.p, t.o), FactMeta { origin, stamp });
        self.spo.insert((t.s, t.p, t.o));
        self.pos.insert((t.p, t.o, t.s));
        self.osp.insert((t.o, t.s, t.p));
        if origin == Origin::Asserted {
            self.asserted += 1;
        }
        true
    }

    pub fn erase(&mut self, t: &Triple) -> bool {
        match self.meta.remove(&(t.s, t.p, t.o)) {
            Some(meta) => {
                self.spo.remove(&(t.s, t.p, t.o));
                self.pos.remove(&(t.p, t.o, t.s));
                self.osp.remove(&(t.o, t.s, t.p));
                if meta.origin == Origin::Asserted {
                    self.asserted -= 1;
                }
                true
            }
            None => false,
        }
    }

    /// Downgrades an asserted triple to derived. Returns false if the triple
    /// is absent or already derived.
    pub fn demote(&mut self, t: &Triple) -> bool {
        match self.meta.get_mut(&(t.s, t.p, t.o)) {
            Some(meta) if meta.origin == Origin::Asserted => {
                meta.origin = Origin::Derived;
                self.asserted -= 1;
                true
            }
            _ => false,
        }
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.meta.contains_key(&(t.s, t.p, t.o))
    }

    pub fn origin(&self, t: &Triple) -> Option<Origin> {
        self.meta.get(&(t.s, t.p, t.o)).map(|m| m.origin)
    }

    pub fn is_asserted(&self, t: &Triple) -> bool {
        self.origin(t) == Some(Origin::Asserted)
    }

    /// Insertion order stamp; strictly increasing across the store's life.
    pub fn stamp(&self, t: &Triple) -> Option<u64> {
        self.meta.get(&(t.s, t.p, t.o)).map(|m| m.stamp)
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn asserted_count(&self) -> usize {
        self.asserted
    }

    pub fn derived_count(&self) -> usize {
        self.spo.len() - self.asserted
    }

    /// All triples in `spo` order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(|&(s, p, o)| Triple::new(s, p, o))
    }

    pub fn iter_with_origin(&self) -> impl Iterator<Item = (Triple, Origin)> + '_ {
        self.spo
            .iter()
            .map(|k| (Triple::new(k.0, k.1, k.2), self.meta[k].origin))
    }

    pub fn asserted(&self) -> impl Iterator<Item = Triple> + '_ {
        self.iter_with_origin()
            .filter(|(_, o)| *o == Origin::Asserted)
            .map(|(t, _)| t)
    }

    /// Drops every derived triple; returns how many were removed.
    pub fn clear_derived(&mut self) -> usize {
        let derived: Vec<Triple> = self
            .iter_with_origin()
            .filter(|(_, o)| *o == Origin::Derived)
            .map(|(t, _)| t)
            .collect();
        for t in &derived {
            self.erase(t);
        }
        derived.len()
    }

    /// Yields every triple matching the pattern exactly once, ascending in
    /// the order of the index chosen for the bound positions.
    pub fn matching(&self, pat: Pattern) -> Matches<'_> {
        let inner = match (pat.s, pat.p, pat.o) {
            (Some(s), Some(p), Some(o)) => {
                let t = Triple::new(s, p, o);
                MatchesInner::One(self.contains(&t).then_some(t))
            }
            (Some(s), p, o) => {
                let (lo, hi) = match p {
                    Some(p) => ((s, p, TermId::MIN), (s, p, TermId::MAX)),
                    None => ((s, TermId::MIN, TermId::MIN), (s, TermId::MAX, TermId::MAX)),
                };
                MatchesInner::Spo(self.spo.range(lo..=hi), o)
            }
            (None, Some(p), o) => {
                let (lo, hi) = match o {
                    Some(o) => ((p, o, TermId::MIN), (p, o, TermId::MAX)),
                    None => ((p, TermId::MIN, TermId::MIN), (p, TermId::MAX, TermId::MAX)),
                };
                MatchesInner::Pos(self.pos.range(lo..=hi))
            }
            (None, None, Some(o)) => MatchesInner::Osp(
                self.osp
                    .range((o, TermId::MIN, TermId::MIN)..=(o, TermId::MAX, TermId::MAX)),
            ),
            (None, None, None) => MatchesInner::All(self.spo.iter()),
        };
        Matches { inner }
    }

    /// Checks that the three indexes hold the same triple set and that the
    /// asserted counter agrees with the flags.
    pub fn audit(&self) -> Result<(), String> {
        if self.meta.len() != self.spo.len()
            || self.spo.len() != self.pos.len()
            || self.spo.len() != self.osp.len()
        {
            return Err(format!(
                "index sizes differ: meta={} spo={} pos={} osp={}",
                self.meta.len(),
                self.spo.len(),
                self.pos.len(),
                self.osp.len()
            ));
        }
        for &(s, p, o) in &self.spo {
            if !self.meta.contains_key(&(s, p, o))
                || !self.pos.contains(&(p, o, s))
                || !self.osp.contains(&(o, s, p))
            {
                return Err(format!("triple ({s} {p} {o}) missing from pos/osp"));
            }
        }
        let asserted = self
            .meta
            .values()
            .filter(|m| m.origin == Origin::Asserted)
            .count();
        if asserted != self.asserted {
            return Err(format!(
                "asserted counter {} but {} flagged",
                self.asserted, asserted
            ));
        }
        Ok(())
    }
}

/// Iterator over the triples matching a [`Pattern`].
pub struct Matches<'a> {
    inner: MatchesInner<'a>,
}

enum MatchesInner<'a> {
    One(Option<Triple>),
    Spo(btree_set::Range<'a, Key>, Option<TermId>),
    Pos(btree_set::Range<'a, Key>),
    Osp(btree_set::Range<'a, Key>),
    All(btree_set::Iter<'a, Key>),
}

impl Iterator for Matches<'_> {
    type Item = Triple;

    fn next(&mut self) -> Option<Triple> {
        match &mut self.inner {
            MatchesInner::One(t) => t.take(),
            MatchesInner::Spo(range, o) => range
                .find(|(_, _, to)| o.is_none_or(|o| o == *to))
                .map(|&(s, p, o)| Triple::new(s, p, o)),
            MatchesInner::Pos(range) => range.next().map(|&(p, o, s)| Triple::new(s, p, o)),
            MatchesInner::Osp(range) => range.next().map(|&(o, s, p)| Triple::new(s, p, o)),
            MatchesInner::All(keys) => keys.next().map(|&(s, p, o)| Triple::new(s, p, o)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store_with(names: &[&str]) -> (TripleStore, Vec<TermId>) {
        let mut st = TripleStore::new();
        let ids = names
            .iter()
            .map(|n| st.intern_iri(&format!("http://ex.org/{n}")).unwrap())
            .collect();
        (st, ids)
    }

    #[test]
    fn set_semantics() {
        let (mut st, ids) = store_with(&["pepper", "hasComponent", "head"]);
        let t = Triple::new(ids[0], ids[1], ids[2]);
        assert!(st.insert(t, Origin::Asserted));
        assert!(!st.insert(t, Origin::Asserted));
        assert_eq!(st.len(), 1);
    }

    #[test]
    fn inserted_triple_is_visible_through_every_index() {
        let (mut st, ids) = store_with(&["pepper", "hasComponent", "head"]);
        let t = Triple::new(ids[0], ids[1], ids[2]);
        st.insert(t, Origin::Asserted);
        let via = |p: Pattern| st.matching(p).collect::<Vec<_>>();
        assert_eq!(via(Pattern::new(Some(t.s), None, None)), vec![t]);
        assert_eq!(via(Pattern::new(None, Some(t.p), None)), vec![t]);
        assert_eq!(via(Pattern::new(None, None, Some(t.o))), vec![t]);
        assert_eq!(via(Pattern::new(None, Some(t.p), Some(t.o))), vec![t]);
        assert_eq!(via(Pattern::new(Some(t.s), Some(t.p), Some(t.o))), vec![t]);
        st.audit().unwrap();
    }

    #[test]
    fn derived_then_asserted_upgrades_flag() {
        let (mut st, ids) = store_with(&["a", "p", "b"]);
        let t = Triple::new(ids[0], ids[1], ids[2]);
        assert!(st.insert(t, Origin::Derived));
        assert_eq!(st.derived_count(), 1);
        assert!(!st.insert(t, Origin::Asserted));
        assert_eq!(st.origin(&t), Some(Origin::Asserted));
        assert_eq!((st.asserted_count(), st.derived_count()), (1, 0));
        // Asserted is never downgraded by a derived insert.
        assert!(!st.insert(t, Origin::Derived));
        assert_eq!(st.origin(&t), Some(Origin::Asserted));
    }

    #[test]
    fn erase_semantics() {
        let (mut st, ids) = store_with(&["a", "p", "b", "c"]);
        let ab = Triple::new(ids[0], ids[1], ids[2]);
        let ac = Triple::new(ids[0], ids[1], ids[3]);
        assert!(!st.erase(&ab));
        assert!(st.is_empty());
        st.insert(ab, Origin::Asserted);
        st.insert(ac, Origin::Asserted);
        assert!(st.erase(&ab));
        assert!(!st.contains(&ab));
        assert!(st.contains(&ac));
        assert_eq!(
            st.matching(Pattern::new(Some(ids[0]), None, None)).collect::<Vec<_>>(),
            vec![ac]
        );
        st.audit().unwrap();
    }

    #[test]
    fn empty_store_matches_nothing() {
        let st = TripleStore::new();
        assert_eq!(st.matching(Pattern::default()).count(), 0);
    }

    #[test]
    fn clear_derived_keeps_asserted() {
        let (mut st, ids) = store_with(&["a", "p", "b", "c"]);
        st.insert(Triple::new(ids[0], ids[1], ids[2]), Origin::Asserted);
        st.insert(Triple::new(ids[0], ids[1], ids[3]), Origin::Derived);
        assert_eq!(st.clear_derived(), 1);
        assert_eq!(st.len(), 1);
        assert_eq!(st.asserted_count(), 1);
        st.audit().unwrap();
    }
}
