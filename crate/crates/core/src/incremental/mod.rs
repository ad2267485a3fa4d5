//! A materialized knowledge base that stays materialized under assertion and
//! retraction.
//!
//! Assertion runs delta rounds seeded by the new facts. Retraction uses
//! delete-and-rederive: every derived fact reachable from the retracted ones
//! through recorded supports is removed, facts that still have a support
//! outside the removed region are restored, and delta rounds seeded by the
//! restored facts bring back everything else that remains derivable.

pub mod provenance;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rustc_hash::FxHashSet;
use thiserror::Error;

pub use provenance::{ProvenanceIndex, Support, SupportId};

use crate::model::{compile, Axiom, CompileError, HornRule, InferenceProgram};
use crate::parser::OntologyDocument;
use crate::reasoner::{self, MaterializationStats, ReasonerConfig, ReasonerError};
use crate::store::{Origin, StoreError, Term, TermId, Triple, TripleStore};

#[derive(Debug, Error)]
pub enum KbError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("cannot retract derived fact; retract its asserted supports: {0}")]
    RetractDerived(Triple),
}

/// Outcome of one assert or retract batch.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaReport {
    /// Newly present facts, including newly asserted ones, in insertion order.
    pub added: Vec<Triple>,
    /// Facts gone after the operation, sorted.
    pub removed: Vec<Triple>,
    /// Facts that were provisionally deleted and then restored, sorted.
    pub rederived: Vec<Triple>,
    pub elapsed: Duration,
}

impl DeltaReport {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty() && self.rederived.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    store: TripleStore,
    program: InferenceProgram,
    provenance: ProvenanceIndex,
    config: ReasonerConfig,
    axioms: Vec<Axiom>,
    rules: Vec<HornRule>,
}

impl KnowledgeBase {
    /// Compiles the schema against `store` (which holds the asserted facts)
    /// and materializes.
    pub fn new(
        store: TripleStore,
        axioms: Vec<Axiom>,
        rules: Vec<HornRule>,
        config: ReasonerConfig,
    ) -> Result<(Self, MaterializationStats), KbError> {
        let program = compile(&axioms, &rules, store.vocabulary(), store.dictionary())?;
        let mut kb = Self {
            store,
            program,
            provenance: ProvenanceIndex::new(),
            config,
            axioms,
            rules,
        };
        let stats = kb.rebuild()?;
        Ok((kb, stats))
    }

    /// Builds a store holding every triple of `documents` as asserted, interns
    /// the schema and rules into it, and materializes.
    pub fn from_documents(
        documents: &[OntologyDocument],
        rules: &[HornRule<Term>],
        config: ReasonerConfig,
    ) -> Result<(Self, MaterializationStats), KbError> {
        let mut store = TripleStore::new();
        let mut axioms = Vec::new();
        for doc in documents {
            for t in &doc.triples {
                let triple = Triple::new(store.intern(&t.s)?, store.intern(&t.p)?, store.intern(&t.o)?);
                store.insert(triple, Origin::Asserted);
            }
            for a in &doc.axioms {
                axioms.push(a.try_map(|t| store.intern(t))?);
            }
        }
        let rules = rules
            .iter()
            .map(|r| r.try_map(|t| store.intern(t)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(store, axioms, rules, config)
    }

    pub fn store(&self) -> &TripleStore {
        &self.store
    }

    pub fn program(&self) -> &InferenceProgram {
        &self.program
    }

    pub fn provenance(&self) -> &ProvenanceIndex {
        &self.provenance
    }

    pub fn config(&self) -> &ReasonerConfig {
        &self.config
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn rules(&self) -> &[HornRule] {
        &self.rules
    }

    /// Interns a term so that it can be used in a fact. Interning alone never
    /// changes the fact set.
    pub fn intern(&mut self, term: &Term) -> Result<TermId, StoreError> {
        self.store.intern(term)
    }

    /// An immutable copy that can be shared with readers while this knowledge
    /// base keeps changing.
    pub fn snapshot(&self) -> Arc<KnowledgeBase> {
        Arc::new(self.clone())
    }

    /// Drops every derived triple and all provenance, then materializes from
    /// the asserted facts.
    pub fn rebuild(&mut self) -> Result<MaterializationStats, KbError> {
        self.store.clear_derived();
        self.provenance.clear();
        Ok(reasoner::materialize(
            &mut self.store,
            &self.program,
            &mut self.provenance,
            &self.config,
        )?)
    }

    pub fn assert_fact(&mut self, fact: Triple) -> Result<DeltaReport, KbError> {
        self.assert_all([fact])
    }

    /// Asserts a batch and runs one round of delta propagation for all of it.
    /// Facts that were already derived are only upgraded to asserted.
    pub fn assert_all(
        &mut self,
        facts: impl IntoIterator<Item = Triple>,
    ) -> Result<DeltaReport, KbError> {
        let started = Instant::now();
        let mut fresh = Vec::new();
        for f in facts {
            if self.store.insert(f, Origin::Asserted) {
                fresh.push(f);
            }
        }
        if fresh.is_empty() {
            return Ok(DeltaReport {
                elapsed: started.elapsed(),
                ..DeltaReport::default()
            });
        }
        let rounds = reasoner::run_rounds(
            &mut self.store,
            &self.program,
            &mut self.provenance,
            &self.config,
            Some(fresh.clone()),
        )?;
        fresh.extend(rounds.added);
        Ok(DeltaReport {
            added: fresh,
            removed: Vec::new(),
            rederived: Vec::new(),
            elapsed: started.elapsed(),
        })
    }

    pub fn retract_fact(&mut self, fact: Triple) -> Result<DeltaReport, KbError> {
        self.retract_all([fact])
    }

    /// Retracts a batch of asserted facts with one delete/rederive cycle.
    /// Absent facts are ignored; a derived fact anywhere in the batch is an
    /// error and leaves the knowledge base untouched.
    pub fn retract_all(
        &mut self,
        facts: impl IntoIterator<Item = Triple>,
    ) -> Result<DeltaReport, KbError> {
        let started = Instant::now();
        let mut seeds = Vec::new();
        for f in facts {
            match self.store.origin(&f) {
                None => {}
                Some(Origin::Derived) => return Err(KbError::RetractDerived(f)),
                Some(Origin::Asserted) => seeds.push(f),
            }
        }
        if seeds.is_empty() {
            return Ok(DeltaReport {
                elapsed: started.elapsed(),
                ..DeltaReport::default()
            });
        }

        // Overdelete: everything derived that depends, through some support,
        // on a retracted fact.
        let mut doomed: FxHashSet<Triple> = FxHashSet::default();
        let mut order: Vec<Triple> = Vec::new();
        for f in seeds {
            if doomed.insert(f) {
                order.push(f);
            }
        }
        let mut i = 0;
        while i < order.len() {
            let f = order[i];
            i += 1;
            for id in self.provenance.used_by(&f) {
                let g = self.provenance.get(id).expect("live support").fact;
                if self.store.origin(&g) == Some(Origin::Derived) && doomed.insert(g) {
                    order.push(g);
                }
            }
        }

        // Remove the region and every support that touches it as a premise.
        for f in &order {
            for id in self.provenance.used_by(f) {
                self.provenance.remove(id);
            }
        }
        for f in &order {
            self.store.erase(f);
            self.provenance.drop_premise_entry(f);
        }

        // Facts with a support that lies entirely outside the region come
        // straight back; delta rounds from them restore the rest.
        let restored: Vec<Triple> = order
            .iter()
            .copied()
            .filter(|f| self.provenance.has_support(f))
            .collect();
        for f in &restored {
            self.store.insert(*f, Origin::Derived);
        }
        if !restored.is_empty() {
            reasoner::run_rounds(
                &mut self.store,
                &self.program,
                &mut self.provenance,
                &self.config,
                Some(restored),
            )?;
        }
        self.provenance.compact();

        let (rederived, removed): (BTreeSet<Triple>, BTreeSet<Triple>) =
            doomed.into_iter().partition(|f| self.store.contains(f));
        Ok(DeltaReport {
            added: Vec::new(),
            removed: removed.into_iter().collect(),
            rederived: rederived.into_iter().collect(),
            elapsed: started.elapsed(),
        })
    }

    /// Checks the store indexes and the provenance index against each other.
    pub fn audit(&self) -> Result<(), String> {
        self.store.audit()?;
        self.provenance.audit(&self.store)
    }
}
