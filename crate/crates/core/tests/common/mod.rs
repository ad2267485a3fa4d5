//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use capakb::fixtures::{RandomKb, RANDOM_NS};
use capakb::incremental::KnowledgeBase;
use capakb::reasoner::{naive_fixpoint, ReasonerConfig};
use capakb::store::{Origin, TermId, Triple, TripleStore};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn facts(store: &TripleStore) -> BTreeMap<Triple, bool> {
    store
        .iter_with_origin()
        .map(|(t, o)| (t, o == Origin::Asserted))
        .collect()
}

/// Whether two knowledge bases hold the same facts with the same origins
/// and the same set of supports.
pub fn same_state(a: &KnowledgeBase, b: &KnowledgeBase) -> bool {
    facts(a.store()) == facts(b.store())
        && a.provenance().len() == b.provenance().len()
        && a.provenance().iter().all(|(_, s)| b.provenance().contains(s))
}

/// A from-scratch materialization of the asserted facts of `kb`.
pub fn rebuilt(kb: &KnowledgeBase) -> KnowledgeBase {
    let mut store = kb.store().clone();
    store.clear_derived();
    KnowledgeBase::new(store, kb.axioms().to_vec(), kb.rules().to_vec(), *kb.config())
        .expect("rebuild")
        .0
}

/// The asserted facts of `kb` closed under its program by the naive oracle.
pub fn naive(kb: &KnowledgeBase) -> TripleStore {
    let mut store = kb.store().clone();
    store.clear_derived();
    naive_fixpoint(&mut store, kb.program(), &ReasonerConfig::default()).expect("naive fixpoint");
    store
}

pub fn iri(kb: &KnowledgeBase, iri: &str) -> TermId {
    kb.store()
        .lookup_iri(iri)
        .unwrap_or_else(|| panic!("{iri} not interned"))
}

pub fn ex(kb: &KnowledgeBase, local: &str) -> TermId {
    iri(kb, &format!("http://ex.org/{local}"))
}

pub fn ex_triple(kb: &KnowledgeBase, s: &str, p: &str, o: &str) -> Triple {
    let p = if p == "a" {
        kb.store().vocabulary().rdf_type
    } else {
        ex(kb, p)
    };
    Triple::new(ex(kb, s), p, ex(kb, o))
}

#[derive(Debug, Clone)]
pub enum Step {
    Assert(Vec<Triple>),
    Retract(Vec<Triple>),
}

/// A random batch of one to three assertions over the random namespace, or
/// of retractions drawn from the currently asserted facts.
pub fn random_step(rng: &mut impl Rng, kb: &mut KnowledgeBase, random: &RandomKb) -> Step {
    let asserted: Vec<Triple> = kb.store().asserted().collect();
    let n = rng.gen_range(1..=3);
    if asserted.is_empty() || rng.gen_bool(0.5) {
        let individuals = individuals_of(random).max(2);
        let classes = classes_of(random).max(1);
        let mut batch = Vec::new();
        for _ in 0..n {
            let mut term = |local: String| {
                kb.intern(&capakb::store::Term::iri(format!("{RANDOM_NS}{local}")))
                    .expect("intern")
            };
            let s = term(format!("i{}", rng.gen_range(0..individuals)));
            let t = if rng.gen_bool(0.3) {
                let c = term(format!("C{}", rng.gen_range(0..classes)));
                Triple::new(s, kb.store().vocabulary().rdf_type, c)
            } else {
                let p = term(format!("p{}", rng.gen_range(0..capakb::fixtures::PROPERTIES)));
                let o = term(format!("i{}", rng.gen_range(0..individuals)));
                Triple::new(s, p, o)
            };
            batch.push(t);
        }
        Step::Assert(batch)
    } else {
        Step::Retract(asserted.choose_multiple(rng, n).copied().collect())
    }
}

fn count_prefixed(random: &RandomKb, marker: &str) -> usize {
    let mut max = 0;
    for t in &random.document.triples {
        for term in [&t.s, &t.o] {
            if let Some(rest) = term.as_iri().and_then(|i| i.strip_prefix(RANDOM_NS)) {
                if let Some(n) = rest.strip_prefix(marker).and_then(|n| n.parse::<usize>().ok()) {
                    max = max.max(n + 1);
                }
            }
        }
    }
    max
}

pub fn individuals_of(random: &RandomKb) -> usize {
    count_prefixed(random, "i")
}

pub fn classes_of(random: &RandomKb) -> usize {
    count_prefixed(random, "C")
}

pub fn apply(kb: &mut KnowledgeBase, step: &Step) {
    match step {
        Step::Assert(batch) => kb.assert_all(batch.iter().copied()).expect("assert"),
        Step::Retract(batch) => kb.retract_all(batch.iter().copied()).expect("retract"),
    };
}
