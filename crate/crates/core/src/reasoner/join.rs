//! Rule-body evaluation against the store, optionally restricting one body
//! atom to a delta set.

use rustc_hash::FxHashMap;

use crate::model::{AtomPattern, CompiledRule, InferenceProgram, Slot};
use crate::store::{Pattern, TermId, Triple, TripleStore};

/// Rule instantiations found during a round, with their premises packed
/// into one buffer.
#[derive(Debug, Default)]
pub(crate) struct Derivations {
    items: Vec<(usize, Triple, usize)>,
    premises: Vec<Triple>,
}

impl Derivations {
    pub fn clear(&mut self) {
        self.items.clear();
        self.premises.clear();
    }

    fn push(&mut self, rule: usize, fact: Triple, premises: &[Triple]) {
        self.items.push((rule, fact, self.premises.len()));
        self.premises.extend_from_slice(premises);
    }

    /// `(rule, fact, premises)` in discovery order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Triple, &[Triple])> + '_ {
        self.items.iter().enumerate().map(|(i, &(rule, fact, start))| {
            let end = self.items.get(i + 1).map_or(self.premises.len(), |next| next.2);
            (rule, fact, &self.premises[start..end])
        })
    }
}

/// Facts new in the previous round, grouped by predicate.
#[derive(Debug, Default)]
pub(crate) struct DeltaSet {
    all: Vec<Triple>,
    by_pred: FxHashMap<TermId, Vec<Triple>>,
}

impl DeltaSet {
    pub fn new(mut facts: Vec<Triple>) -> Self {
        facts.sort_unstable();
        facts.dedup();
        let mut by_pred: FxHashMap<TermId, Vec<Triple>> = FxHashMap::default();
        for t in &facts {
            by_pred.entry(t.p).or_default().push(*t);
        }
        Self {
            all: facts,
            by_pred,
        }
    }

    fn candidates(&self, p: Option<TermId>) -> &[Triple] {
        match p {
            Some(p) => self.by_pred.get(&p).map_or(&[], Vec::as_slice),
            None => &self.all,
        }
    }
}

/// Evaluates every rule of `program`.
///
/// With `delta == None` each rule is evaluated once over the full store and
/// ground rules fire. With a delta, each non-empty rule body is evaluated
/// once per position `k`, with atom `k` ranging over the delta and every
/// other atom over the full store.
pub(crate) fn evaluate(
    store: &TripleStore,
    program: &InferenceProgram,
    delta: Option<&DeltaSet>,
    out: &mut Derivations,
) {
    for (idx, rule) in program.rules().iter().enumerate() {
        match delta {
            None => {
                let plan = plan(rule, None);
                Join::new(store, rule, idx, None).run(&plan, out);
            }
            Some(delta) => {
                for k in 0..rule.body.len() {
                    let plan = plan(rule, Some(k));
                    Join::new(store, rule, idx, Some(delta)).run(&plan, out);
                }
            }
        }
    }
}

/// Greedy join order: the delta atom first (if any), then repeatedly the
/// atom with the most bound positions, ties broken by body position.
fn plan(rule: &CompiledRule, delta_pos: Option<usize>) -> Vec<usize> {
    let n = rule.body.len();
    let mut bound = vec![false; rule.vars.len()];
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut take = |i: usize, bound: &mut Vec<bool>, used: &mut Vec<bool>| {
        used[i] = true;
        order.push(i);
        for slot in rule.body[i].slots() {
            if let Slot::Var(v) = slot {
                bound[v] = true;
            }
        }
    };
    if let Some(k) = delta_pos {
        take(k, &mut bound, &mut used);
    }
    while used.iter().any(|u| !u) {
        let score = |a: &AtomPattern| {
            a.slots()
                .iter()
                .filter(|s| match s {
                    Slot::Const(_) => true,
                    Slot::Var(v) => bound[*v],
                })
                .count()
        };
        let next = (0..n)
            .filter(|&i| !used[i])
            .max_by_key(|&i| (score(&rule.body[i]), std::cmp::Reverse(i)))
            .expect("some atom unused");
        take(next, &mut bound, &mut used);
    }
    order
}

struct Join<'a> {
    store: &'a TripleStore,
    rule: &'a CompiledRule,
    rule_idx: usize,
    delta: Option<&'a DeltaSet>,
    binding: Vec<Option<TermId>>,
    premises: Vec<Triple>,
}

impl<'a> Join<'a> {
    fn new(
        store: &'a TripleStore,
        rule: &'a CompiledRule,
        rule_idx: usize,
        delta: Option<&'a DeltaSet>,
    ) -> Self {
        let placeholder = Triple::new(TermId::MIN, TermId::MIN, TermId::MIN);
        Self {
            store,
            rule,
            rule_idx,
            delta,
            binding: vec![None; rule.vars.len()],
            premises: vec![placeholder; rule.body.len()],
        }
    }

    fn run(mut self, plan: &[usize], out: &mut Derivations) {
        self.step(plan, 0, out);
    }

    fn resolve(&self, slot: Slot) -> Option<TermId> {
        match slot {
            Slot::Const(c) => Some(c),
            Slot::Var(v) => self.binding[v],
        }
    }

    fn step(&mut self, plan: &[usize], depth: usize, out: &mut Derivations) {
        if depth == plan.len() {
            let head = self.rule.head;
            let fact = Triple::new(
                self.resolve(head.s).expect("range-restricted"),
                self.resolve(head.p).expect("range-restricted"),
                self.resolve(head.o).expect("range-restricted"),
            );
            out.push(self.rule_idx, fact, &self.premises);
            return;
        }
        let atom_idx = plan[depth];
        let atom = self.rule.body[atom_idx];
        let pat = Pattern::new(self.resolve(atom.s), self.resolve(atom.p), self.resolve(atom.o));
        let store = self.store;
        if depth == 0 {
            if let Some(delta) = self.delta {
                for t in delta.candidates(pat.p) {
                    if pat.matches(t) {
                        self.try_triple(plan, depth, atom_idx, atom, *t, out);
                    }
                }
                return;
            }
        }
        for t in store.matching(pat) {
            self.try_triple(plan, depth, atom_idx, atom, t, out);
        }
    }

    fn try_triple(
        &mut self,
        plan: &[usize],
        depth: usize,
        atom_idx: usize,
        atom: AtomPattern,
        t: Triple,
        out: &mut Derivations,
    ) {
        // Literals never participate in inference.
        if self.store.dictionary().is_literal(t.o) {
            return;
        }
        let mut newly = [usize::MAX; 3];
        let mut ok = true;
        for (i, (slot, value)) in atom.slots().into_iter().zip([t.s, t.p, t.o]).enumerate() {
            match slot {
                Slot::Const(c) => ok &= c == value,
                Slot::Var(v) => match self.binding[v] {
                    Some(b) => ok &= b == value,
                    None => {
                        self.binding[v] = Some(value);
                        newly[i] = v;
                    }
                },
            }
            if !ok {
                break;
            }
        }
        if ok {
            self.premises[atom_idx] = t;
            self.step(plan, depth + 1, out);
        }
        for v in newly {
            if v != usize::MAX {
                self.binding[v] = None;
            }
        }
    }
}
