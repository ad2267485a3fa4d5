use std::collections::BTreeMap;

use capakb::store::{Origin, Pattern, Term, TermId, Triple, TripleStore};
use proptest::prelude::*;

/// Ten IRIs, interned in order; the returned ids index the model.
fn store_with_terms() -> (TripleStore, Vec<TermId>) {
    let mut store = TripleStore::new();
    let ids = (0..10)
        .map(|i| store.intern_iri(&format!("http://ex.org/t{i}")).unwrap())
        .collect();
    (store, ids)
}

#[derive(Debug, Clone)]
enum Op {
    Insert(usize, usize, usize, bool),
    Erase(usize, usize, usize),
    Demote(usize, usize, usize),
}

fn op() -> impl Strategy<Value = Op> {
    let idx = || 0..10usize;
    prop_oneof![
        3 => (idx(), idx(), idx(), any::<bool>()).prop_map(|(s, p, o, a)| Op::Insert(s, p, o, a)),
        1 => (idx(), idx(), idx()).prop_map(|(s, p, o)| Op::Erase(s, p, o)),
        1 => (idx(), idx(), idx()).prop_map(|(s, p, o)| Op::Demote(s, p, o)),
    ]
}

proptest! {
    #[test]
    fn store_agrees_with_a_map_model(ops in prop::collection::vec(op(), 0..200)) {
        let (mut store, ids) = store_with_terms();
        let mut model: BTreeMap<Triple, Origin> = BTreeMap::new();
        let t = |s: usize, p: usize, o: usize| Triple::new(ids[s], ids[p], ids[o]);
        for op in ops {
            match op {
                Op::Insert(s, p, o, asserted) => {
                    let origin = if asserted { Origin::Asserted } else { Origin::Derived };
                    let fresh = store.insert(t(s, p, o), origin);
                    prop_assert_eq!(fresh, !model.contains_key(&t(s, p, o)));
                    let entry = model.entry(t(s, p, o)).or_insert(origin);
                    if origin == Origin::Asserted {
                        *entry = Origin::Asserted;
                    }
                }
                Op::Erase(s, p, o) => {
                    prop_assert_eq!(store.erase(&t(s, p, o)), model.remove(&t(s, p, o)).is_some());
                }
                Op::Demote(s, p, o) => {
                    let was = model.get(&t(s, p, o)) == Some(&Origin::Asserted);
                    prop_assert_eq!(store.demote(&t(s, p, o)), was);
                    if was {
                        model.insert(t(s, p, o), Origin::Derived);
                    }
                }
            }
        }
        prop_assert_eq!(store.len(), model.len());
        prop_assert_eq!(store.asserted_count(), model.values().filter(|o| **o == Origin::Asserted).count());
        prop_assert_eq!(store.derived_count(), model.len() - store.asserted_count());
        let listed: BTreeMap<Triple, Origin> = store.iter_with_origin().collect();
        prop_assert_eq!(&listed, &model);
        prop_assert!(store.audit().is_ok());
    }

    #[test]
    fn every_pattern_yields_exactly_the_matching_triples(
        triples in prop::collection::btree_set((0..6usize, 0..6usize, 0..6usize), 0..80),
        probe in (0..6usize, 0..6usize, 0..6usize),
        mask in 0..8u8,
    ) {
        let (mut store, ids) = store_with_terms();
        let all: Vec<Triple> = triples
            .iter()
            .map(|&(s, p, o)| Triple::new(ids[s], ids[p], ids[o]))
            .collect();
        for t in &all {
            store.insert(*t, Origin::Asserted);
        }
        let pick = |bit: u8, i: usize| (mask & bit != 0).then_some(ids[i]);
        let pat = Pattern::new(pick(1, probe.0), pick(2, probe.1), pick(4, probe.2));
        let mut got: Vec<Triple> = store.matching(pat).collect();
        got.sort();
        let mut expected: Vec<Triple> = all.iter().copied().filter(|t| pat.matches(t)).collect();
        expected.sort();
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn derived_then_asserted_upgrades_the_flag() {
    let (mut store, ids) = store_with_terms();
    let t = Triple::new(ids[0], ids[1], ids[2]);
    assert!(store.insert(t, Origin::Derived));
    assert!(!store.insert(t, Origin::Asserted));
    assert_eq!(store.origin(&t), Some(Origin::Asserted));
    // A later derivation never downgrades.
    assert!(!store.insert(t, Origin::Derived));
    assert!(store.is_asserted(&t));
    assert_eq!(store.asserted_count(), 1);
}

#[test]
fn stamps_increase_and_survive_flag_changes() {
    let (mut store, ids) = store_with_terms();
    let a = Triple::new(ids[0], ids[1], ids[2]);
    let b = Triple::new(ids[3], ids[1], ids[2]);
    store.insert(a, Origin::Derived);
    store.insert(b, Origin::Asserted);
    let (sa, sb) = (store.stamp(&a).unwrap(), store.stamp(&b).unwrap());
    assert!(sa < sb);
    store.insert(a, Origin::Asserted);
    assert_eq!(store.stamp(&a), Some(sa));
    store.erase(&a);
    assert_eq!(store.stamp(&a), None);
    store.insert(a, Origin::Asserted);
    assert!(store.stamp(&a).unwrap() > sb);
}

#[test]
fn clear_derived_keeps_asserted_facts() {
    let (mut store, ids) = store_with_terms();
    let a = Triple::new(ids[0], ids[1], ids[2]);
    let b = Triple::new(ids[2], ids[1], ids[3]);
    store.insert(a, Origin::Asserted);
    store.insert(b, Origin::Derived);
    assert_eq!(store.clear_derived(), 1);
    assert_eq!(store.iter().collect::<Vec<_>>(), vec![a]);
}

#[test]
fn interning_is_stable_and_kind_aware() {
    let mut store = TripleStore::new();
    let a = store.intern(&Term::iri("http://ex.org/a")).unwrap();
    let again = store.intern(&Term::iri("http://ex.org/a")).unwrap();
    let lit = store.intern(&Term::string("http://ex.org/a")).unwrap();
    assert_eq!(a, again);
    assert_ne!(a, lit);
    assert!(store.dictionary().is_literal(lit));
    assert_eq!(store.resolve(a), &Term::iri("http://ex.org/a"));
    assert!(store.intern_iri("relative/iri").is_err());
}
