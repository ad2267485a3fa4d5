//! Lowering of axioms and user rules into range-restricted triple-pattern
//! rules.
//!
//! Rule schemata, by name prefix:
//!
//! | name  | schema |
//! |-------|--------|
//! | `R1`  | `type(x,C) ∧ subClassOf(C,D) → type(x,D)` |
//! | `R2`  | `subClassOf(C,D) ∧ subClassOf(D,E) → subClassOf(C,E)` |
//! | `R3`  | `p(x,y) ∧ p(y,z) → p(x,z)` per transitive `p` |
//! | `R4`  | `p(x,y) → q(y,x)` and back, per inverse pair |
//! | `R5`  | `sub(x,y) → sup(x,y)` |
//! | `R6`  | `p1(x0,x1) ∧ … ∧ pn(xn-1,xn) → q(x0,xn)` |
//! | `R7`  | recognition of a defined class from its conjuncts |
//! | `R8`  | `type(x,C) → type(x,D)` per named conjunct `D` of `C`'s definition |
//! | `R10` | ground `subClassOf` links (asserted subclass axioms and equivalences) |
//!
//! User rules keep their own names.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use super::{validate, Atom, Axiom, ClassExpression, HornRule, ModelDiagnostic};
use crate::store::{Dictionary, TermId, Triple, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("{} validation error(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<ModelDiagnostic>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Var(usize),
    Const(TermId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AtomPattern {
    pub s: Slot,
    pub p: Slot,
    pub o: Slot,
}

impl AtomPattern {
    pub fn slots(&self) -> [Slot; 3] {
        [self.s, self.p, self.o]
    }

    fn vars(&self) -> impl Iterator<Item = usize> {
        self.slots().into_iter().filter_map(|s| match s {
            Slot::Var(v) => Some(v),
            Slot::Const(_) => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    TypePropagation,
    SubClassTransitivity,
    Transitive,
    Inverse,
    SubProperty,
    Chain,
    Recognition,
    Decomposition,
    User,
    SubClassLink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleOrigin {
    Builtin,
    Axiom(usize),
    UserRule(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledRule {
    pub name: String,
    pub kind: RuleKind,
    pub origin: RuleOrigin,
    /// Variable names, indexed by `Slot::Var`.
    pub vars: Vec<String>,
    pub body: Vec<AtomPattern>,
    pub head: AtomPattern,
}

impl CompiledRule {
    pub fn is_range_restricted(&self) -> bool {
        let mut bound = vec![false; self.vars.len()];
        for v in self.body.iter().flat_map(AtomPattern::vars) {
            bound[v] = true;
        }
        self.head.vars().all(|v| bound[v])
    }

    /// Matches `premises` against the body in order and returns the
    /// instantiated head, or `None` if they do not fit.
    pub fn instantiate(&self, premises: &[Triple]) -> Option<Triple> {
        if premises.len() != self.body.len() {
            return None;
        }
        let mut binding = vec![None; self.vars.len()];
        for (atom, t) in self.body.iter().zip(premises) {
            for (slot, value) in atom.slots().into_iter().zip([t.s, t.p, t.o]) {
                match slot {
                    Slot::Const(c) if c != value => return None,
                    Slot::Const(_) => {}
                    Slot::Var(v) => match binding[v] {
                        Some(b) if b != value => return None,
                        Some(_) => {}
                        None => binding[v] = Some(value),
                    },
                }
            }
        }
        let get = |slot: Slot| match slot {
            Slot::Const(c) => Some(c),
            Slot::Var(v) => binding[v],
        };
        Some(Triple::new(
            get(self.head.s)?,
            get(self.head.p)?,
            get(self.head.o)?,
        ))
    }

    pub fn display<'a>(&'a self, dict: &'a Dictionary) -> impl fmt::Display + 'a {
        RuleDisplay { rule: self, dict }
    }
}

struct RuleDisplay<'a> {
    rule: &'a CompiledRule,
    dict: &'a Dictionary,
}

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slot = |s: Slot| match s {
            Slot::Var(v) => format!("?{}", self.rule.vars[v]),
            Slot::Const(c) => self.dict.resolve(c).to_string(),
        };
        let atom = |a: &AtomPattern| format!("{}({}, {})", slot(a.p), slot(a.s), slot(a.o));
        write!(f, "{}: ", self.rule.name)?;
        let body: Vec<String> = self.rule.body.iter().map(atom).collect();
        write!(f, "{} -> {}", body.join(", "), atom(&self.rule.head))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InferenceProgram {
    rules: Vec<CompiledRule>,
}

impl InferenceProgram {
    pub fn rules(&self) -> &[CompiledRule] {
        &self.rules
    }

    pub fn rule(&self, index: usize) -> &CompiledRule {
        &self.rules[index]
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.name == name)
    }
}

struct RuleBuilder {
    vars: Vec<String>,
    by_name: HashMap<String, usize>,
    body: Vec<AtomPattern>,
}

impl RuleBuilder {
    fn new() -> Self {
        Self {
            vars: Vec::new(),
            by_name: HashMap::new(),
            body: Vec::new(),
        }
    }

    fn var(&mut self, name: &str) -> Slot {
        let next = self.vars.len();
        let idx = *self.by_name.entry(name.to_string()).or_insert_with(|| {
            self.vars.push(name.to_string());
            next
        });
        Slot::Var(idx)
    }

    fn triple(&mut self, s: Slot, p: TermId, o: Slot) -> &mut Self {
        self.body.push(AtomPattern {
            s,
            p: Slot::Const(p),
            o,
        });
        self
    }

    fn head(
        self,
        name: String,
        kind: RuleKind,
        origin: RuleOrigin,
        head: AtomPattern,
    ) -> CompiledRule {
        CompiledRule {
            name,
            kind,
            origin,
            vars: self.vars,
            body: self.body,
            head,
        }
    }
}

fn atom(s: Slot, p: TermId, o: Slot) -> AtomPattern {
    AtomPattern {
        s,
        p: Slot::Const(p),
        o,
    }
}

/// Validates the inputs and lowers them into an [`InferenceProgram`]. Rule
/// order is deterministic: the two built-in TBox rules, then each axiom's
/// rules in input order, then user rules.
pub fn compile(
    axioms: &[Axiom],
    user_rules: &[HornRule],
    vocab: Vocabulary,
    dict: &Dictionary,
) -> Result<InferenceProgram, CompileError> {
    let diagnostics = validate(axioms, user_rules);
    if !diagnostics.is_empty() {
        return Err(CompileError::Invalid(diagnostics));
    }
    let n = |id: &TermId| dict.resolve(*id).to_string();
    let ty = vocab.rdf_type;
    let sco = vocab.sub_class_of;
    let mut rules = Vec::new();

    // R1
    let mut b = RuleBuilder::new();
    let (x, c, d) = (b.var("x"), b.var("C"), b.var("D"));
    b.triple(x, ty, c).triple(c, sco, d);
    rules.push(b.head(
        "R1 type-propagation".into(),
        RuleKind::TypePropagation,
        RuleOrigin::Builtin,
        atom(x, ty, d),
    ));
    // R2
    let mut b = RuleBuilder::new();
    let (c, d, e) = (b.var("C"), b.var("D"), b.var("E"));
    b.triple(c, sco, d).triple(d, sco, e);
    rules.push(b.head(
        "R2 subclass-transitivity".into(),
        RuleKind::SubClassTransitivity,
        RuleOrigin::Builtin,
        atom(c, sco, e),
    ));

    for (i, axiom) in axioms.iter().enumerate() {
        let origin = RuleOrigin::Axiom(i);
        match axiom {
            Axiom::SubClassOf { sub, sup } => {
                rules.push(subclass_link(*sub, *sup, sco, origin, &n));
            }
            Axiom::TransitiveProperty(p) => {
                let mut b = RuleBuilder::new();
                let (x, y, z) = (b.var("x"), b.var("y"), b.var("z"));
                b.triple(x, *p, y).triple(y, *p, z);
                rules.push(b.head(
                    format!("R3 transitive {}", n(p)),
                    RuleKind::Transitive,
                    origin,
                    atom(x, *p, z),
                ));
            }
            Axiom::InverseProperties(p, q) => {
                let pairs: &[(TermId, TermId)] = if p == q {
                    &[(*p, *q)]
                } else {
                    &[(*p, *q), (*q, *p)]
                };
                for &(from, to) in pairs {
                    let mut b = RuleBuilder::new();
                    let (x, y) = (b.var("x"), b.var("y"));
                    b.triple(x, from, y);
                    rules.push(b.head(
                        format!("R4 inverse {} -> {}", n(&from), n(&to)),
                        RuleKind::Inverse,
                        origin,
                        atom(y, to, x),
                    ));
                }
            }
            Axiom::SubPropertyOf { sub, sup } => {
                let mut b = RuleBuilder::new();
                let (x, y) = (b.var("x"), b.var("y"));
                b.triple(x, *sub, y);
                rules.push(b.head(
                    format!("R5 subproperty {} -> {}", n(sub), n(sup)),
                    RuleKind::SubProperty,
                    origin,
                    atom(x, *sup, y),
                ));
            }
            Axiom::PropertyChain { chain, implies } => {
                let mut b = RuleBuilder::new();
                let nodes: Vec<Slot> = (0..=chain.len()).map(|k| b.var(&format!("x{k}"))).collect();
                for (k, p) in chain.iter().enumerate() {
                    b.triple(nodes[k], *p, nodes[k + 1]);
                }
                let links: Vec<String> = chain.iter().map(&n).collect();
                rules.push(b.head(
                    format!("R6 chain {} -> {}", links.join(" o "), n(implies)),
                    RuleKind::Chain,
                    origin,
                    atom(nodes[0], *implies, nodes[chain.len()]),
                ));
            }
            Axiom::EquivalentTo { class, expr } => {
                let class = *class.as_named().expect("validated: named left side");
                let expr = expr.normalized();
                let conjuncts = expr.conjuncts();

                // R7
                let mut b = RuleBuilder::new();
                let x = b.var("x");
                let mut fresh = 0;
                for conj in &conjuncts {
                    match conj {
                        ClassExpression::Named(dcl) => {
                            b.triple(x, ty, Slot::Const(*dcl));
                        }
                        ClassExpression::SomeValuesFrom { property, filler } => {
                            fresh += 1;
                            let y = b.var(&format!("y{fresh}"));
                            let filler = *filler.as_named().expect("validated: named filler");
                            b.triple(x, *property, y).triple(y, ty, Slot::Const(filler));
                        }
                        ClassExpression::Intersection(_) => unreachable!("normalized"),
                    }
                }
                rules.push(b.head(
                    format!("R7 recognize {}", n(&class)),
                    RuleKind::Recognition,
                    origin,
                    atom(x, ty, Slot::Const(class)),
                ));

                match &expr {
                    ClassExpression::Intersection(_) => {
                        for named in conjuncts.iter().filter_map(ClassExpression::as_named) {
                            // R8
                            let mut b = RuleBuilder::new();
                            let x = b.var("x");
                            b.triple(x, ty, Slot::Const(class));
                            rules.push(b.head(
                                format!("R8 decompose {} -> {}", n(&class), n(named)),
                                RuleKind::Decomposition,
                                origin,
                                atom(x, ty, Slot::Const(*named)),
                            ));
                            rules.push(subclass_link(class, *named, sco, origin, &n));
                        }
                    }
                    ClassExpression::Named(other) => {
                        rules.push(subclass_link(class, *other, sco, origin, &n));
                        rules.push(subclass_link(*other, class, sco, origin, &n));
                    }
                    ClassExpression::SomeValuesFrom { .. } => {}
                }
            }
        }
    }

    for (i, rule) in user_rules.iter().enumerate() {
        let mut b = RuleBuilder::new();
        let lower = |b: &mut RuleBuilder, a: &Atom| match a {
            Atom::Class { class, var } => atom(b.var(&var.0), ty, Slot::Const(*class)),
            Atom::Property {
                property,
                subject,
                object,
            } => {
                let s = b.var(&subject.0);
                atom(s, *property, b.var(&object.0))
            }
        };
        for a in &rule.body {
            let pat = lower(&mut b, a);
            b.body.push(pat);
        }
        let head = lower(&mut b, &rule.head);
        rules.push(b.head(
            rule.name.clone(),
            RuleKind::User,
            RuleOrigin::UserRule(i),
            head,
        ));
    }

    dedupe_names(&mut rules);
    debug_assert!(rules.iter().all(CompiledRule::is_range_restricted));
    Ok(InferenceProgram { rules })
}

fn subclass_link(
    sub: TermId,
    sup: TermId,
    sco: TermId,
    origin: RuleOrigin,
    n: &impl Fn(&TermId) -> String,
) -> CompiledRule {
    RuleBuilder::new().head(
        format!("R10 subclass {} -> {}", n(&sub), n(&sup)),
        RuleKind::SubClassLink,
        origin,
        atom(Slot::Const(sub), sco, Slot::Const(sup)),
    )
}

/// Suffixes repeated names with `#2`, `#3`, … so every name is unique.
fn dedupe_names(rules: &mut [CompiledRule]) {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for rule in rules.iter_mut() {
        let count = seen.entry(rule.name.clone()).or_insert(0);
        *count += 1;
        if *count > 1 {
            rule.name = format!("{} #{}", rule.name, count);
        }
    }
}
