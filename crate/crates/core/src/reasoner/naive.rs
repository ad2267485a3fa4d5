//! Naive fixpoint: every rule against the whole fact set, every round, until
//! nothing changes. Kept deliberately separate from the semi-naive join so
//! it can serve as a reference oracle.

use std::collections::BTreeMap;
use std::time::Instant;

use rustc_hash::{FxHashMap, FxHashSet};

use super::{MaterializationStats, ReasonerConfig, ReasonerError};
use crate::model::{InferenceProgram, Slot};
use crate::store::{Origin, TermId, Triple, TripleStore};

pub fn naive_fixpoint(
    store: &mut TripleStore,
    program: &InferenceProgram,
    config: &ReasonerConfig,
) -> Result<MaterializationStats, ReasonerError> {
    let started = Instant::now();
    let mut facts: FxHashSet<Triple> = store.iter().collect();
    let mut fire_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut iterations = 0;
    let mut added = 0;

    loop {
        iterations += 1;
        if iterations > config.iteration_cap {
            return Err(ReasonerError::IterationCap {
                cap: config.iteration_cap,
            });
        }
        let mut by_pred: FxHashMap<TermId, Vec<Triple>> = FxHashMap::default();
        for t in &facts {
            if !store.dictionary().is_literal(t.o) {
                by_pred.entry(t.p).or_default().push(*t);
            }
        }
        let mut fresh: Vec<(usize, Triple)> = Vec::new();
        let mut seen: FxHashSet<Triple> = FxHashSet::default();
        for (idx, rule) in program.rules().iter().enumerate() {
            let mut heads = Vec::new();
            let mut env: FxHashMap<usize, TermId> = FxHashMap::default();
            solve(&rule.body, &by_pred, &mut env, &mut |env| {
                let val = |s: Slot| match s {
                    Slot::Const(c) => c,
                    Slot::Var(v) => env[&v],
                };
                heads.push(Triple::new(val(rule.head.s), val(rule.head.p), val(rule.head.o)));
            });
            for h in heads {
                if !facts.contains(&h) && seen.insert(h) {
                    fresh.push((idx, h));
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for (idx, h) in fresh {
            facts.insert(h);
            store.insert(h, Origin::Derived);
            *fire_counts
                .entry(program.rule(idx).name.clone())
                .or_default() += 1;
            added += 1;
        }
    }

    Ok(MaterializationStats {
        iterations,
        added,
        derived_count: store.derived_count(),
        rule_fire_counts: fire_counts,
        elapsed: started.elapsed(),
    })
}

fn solve(
    body: &[crate::model::AtomPattern],
    by_pred: &FxHashMap<TermId, Vec<Triple>>,
    env: &mut FxHashMap<usize, TermId>,
    emit: &mut dyn FnMut(&FxHashMap<usize, TermId>),
) {
    let Some((atom, rest)) = body.split_first() else {
        emit(env);
        return;
    };
    let empty = Vec::new();
    let candidates: Box<dyn Iterator<Item = &Triple>> = match atom.p {
        Slot::Const(p) => Box::new(by_pred.get(&p).unwrap_or(&empty).iter()),
        Slot::Var(_) => Box::new(by_pred.values().flatten()),
    };
    for t in candidates {
        let mut bound_here = Vec::new();
        let mut ok = true;
        for (slot, value) in [(atom.s, t.s), (atom.p, t.p), (atom.o, t.o)] {
            match slot {
                Slot::Const(c) => {
                    if c != value {
                        ok = false;
                    }
                }
                Slot::Var(v) => match env.get(&v) {
                    Some(&b) => {
                        if b != value {
                            ok = false;
                        }
                    }
                    None => {
                        env.insert(v, value);
                        bound_here.push(v);
                    }
                },
            }
            if !ok {
                break;
            }
        }
        if ok {
            solve(rest, by_pred, env, emit);
        }
        for v in bound_here {
            env.remove(&v);
        }
    }
}
