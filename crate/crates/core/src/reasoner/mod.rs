//! Fixpoint computation over a [`TripleStore`].
//!
//! [`materialize`] runs semi-naive rounds: the first round evaluates every
//! rule over the whole store, later rounds only join against the facts that
//! are new since the previous round. Every rule instantiation found is
//! recorded as a [`Support`](crate::incremental::Support), including instantiations whose conclusion was
//! already present. [`naive_fixpoint`] is the reference implementation the
//! tests compare against.

mod join;
mod naive;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rustc_hash::FxHashSet;
use thiserror::Error;

pub use naive::naive_fixpoint;

pub(crate) use join::DeltaSet;
use join::Derivations;

use crate::incremental::ProvenanceIndex;
use crate::model::{ClassExpression, InferenceProgram};
use crate::store::{Origin, Pattern, TermId, Triple, TripleStore};

pub const DEFAULT_ITERATION_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReasonerConfig {
    pub iteration_cap: usize,
}

impl Default for ReasonerConfig {
    fn default() -> Self {
        Self {
            iteration_cap: DEFAULT_ITERATION_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("iteration cap of {cap} rounds exceeded before reaching a fixpoint")]
    IterationCap { cap: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MaterializationStats {
    /// Rounds run, including the final one that found nothing new.
    pub iterations: usize,
    /// Triples newly derived by this run.
    pub added: usize,
    /// Triples flagged derived in the store after the run.
    pub derived_count: usize,
    /// New supports recorded per rule (for the naive oracle: new facts).
    pub rule_fire_counts: BTreeMap<String, usize>,
    pub elapsed: Duration,
}

/// Runs the program to its least fixpoint over the facts in `store`,
/// recording supports in `provenance`.
pub fn materialize(
    store: &mut TripleStore,
    program: &InferenceProgram,
    provenance: &mut ProvenanceIndex,
    config: &ReasonerConfig,
) -> Result<MaterializationStats, ReasonerError> {
    let started = Instant::now();
    let rounds = run_rounds(store, program, provenance, config, None)?;
    Ok(rounds.into_stats(program, store, started))
}

pub(crate) struct Rounds {
    pub iterations: usize,
    pub added: Vec<Triple>,
    pub fire_counts: Vec<usize>,
}

impl Rounds {
    pub fn into_stats(
        self,
        program: &InferenceProgram,
        store: &TripleStore,
        started: Instant,
    ) -> MaterializationStats {
        let rule_fire_counts = self
            .fire_counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, &n)| (program.rule(i).name.clone(), n))
            .collect();
        MaterializationStats {
            iterations: self.iterations,
            added: self.added.len(),
            derived_count: store.derived_count(),
            rule_fire_counts,
            elapsed: started.elapsed(),
        }
    }
}

/// Semi-naive loop. `seed == None` starts with a full evaluation round;
/// otherwise the first round joins against `seed` only.
pub(crate) fn run_rounds(
    store: &mut TripleStore,
    program: &InferenceProgram,
    provenance: &mut ProvenanceIndex,
    config: &ReasonerConfig,
    seed: Option<Vec<Triple>>,
) -> Result<Rounds, ReasonerError> {
    let mut delta = seed.map(DeltaSet::new);
    let mut out = Rounds {
        iterations: 0,
        added: Vec::new(),
        fire_counts: vec![0; program.len()],
    };
    let mut found = Derivations::default();
    loop {
        out.iterations += 1;
        if out.iterations > config.iteration_cap {
            return Err(ReasonerError::IterationCap {
                cap: config.iteration_cap,
            });
        }
        found.clear();
        join::evaluate(store, program, delta.as_ref(), &mut found);

        let mut fresh = Vec::new();
        let mut pending = FxHashSet::default();
        for (rule, fact, premises) in found.iter() {
            if !store.contains(&fact) && pending.insert(fact) {
                fresh.push(fact);
            }
            if provenance.add_instance(fact, rule, premises) {
                out.fire_counts[rule] += 1;
            }
        }
        if fresh.is_empty() {
            break;
        }
        for t in &fresh {
            store.insert(*t, Origin::Derived);
        }
        out.added.extend_from_slice(&fresh);
        delta = Some(DeltaSet::new(fresh));
    }
    Ok(out)
}

/// Evaluates a class expression directly against the store, without
/// deriving anything.
pub fn check_instance(store: &TripleStore, individual: TermId, expr: &ClassExpression) -> bool {
    let ty = store.vocabulary().rdf_type;
    match expr {
        ClassExpression::Named(c) => store.contains(&Triple::new(individual, ty, *c)),
        ClassExpression::Intersection(parts) => {
            parts.iter().all(|p| check_instance(store, individual, p))
        }
        ClassExpression::SomeValuesFrom { property, filler } => store
            .matching(Pattern::new(Some(individual), Some(*property), None))
            .filter(|t| !store.dictionary().is_literal(t.o))
            .any(|t| check_instance(store, t.o, filler)),
    }
}
