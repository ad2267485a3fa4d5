//! Typed axioms, class expressions and Horn rules, plus the compiler that
//! lowers them into the uniform rule form run by the reasoner.
//!
//! The types are generic over the term representation: the parser produces
//! them over lexical [`Term`](crate::store::Term)s and loading a knowledge base maps them onto
//! interned [`TermId`]s.

mod compile;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

pub use compile::{
    compile, AtomPattern, CompileError, CompiledRule, InferenceProgram, RuleKind, RuleOrigin, Slot,
};
pub use validate::{validate, DiagnosticKind, Location, ModelDiagnostic};

use crate::store::TermId;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpression<T = TermId> {
    Named(T),
    Intersection(Vec<ClassExpression<T>>),
    SomeValuesFrom {
        property: T,
        filler: Box<ClassExpression<T>>,
    },
}

impl<T> ClassExpression<T> {
    pub fn some(property: T, filler: T) -> Self {
        ClassExpression::SomeValuesFrom {
            property,
            filler: Box::new(ClassExpression::Named(filler)),
        }
    }

    pub fn as_named(&self) -> Option<&T> {
        match self {
            ClassExpression::Named(c) => Some(c),
            _ => None,
        }
    }

    pub fn try_map<U, E>(
        &self,
        f: &mut impl FnMut(&T) -> Result<U, E>,
    ) -> Result<ClassExpression<U>, E> {
        Ok(match self {
            ClassExpression::Named(c) => ClassExpression::Named(f(c)?),
            ClassExpression::Intersection(parts) => ClassExpression::Intersection(
                parts.iter().map(|p| p.try_map(f)).collect::<Result<_, _>>()?,
            ),
            ClassExpression::SomeValuesFrom { property, filler } => {
                ClassExpression::SomeValuesFrom {
                    property: f(property)?,
                    filler: Box::new(filler.try_map(f)?),
                }
            }
        })
    }

    /// Depth of directly nested intersections (0 for a non-intersection).
    pub(crate) fn intersection_depth(&self) -> usize {
        match self {
            ClassExpression::Intersection(parts) => {
                1 + parts.iter().map(Self::intersection_depth).max().unwrap_or(0)
            }
            _ => 0,
        }
    }
}

impl<T: Clone> ClassExpression<T> {
    /// Flattens nested intersections and unwraps single-conjunct ones.
    pub fn normalized(&self) -> Self {
        match self {
            ClassExpression::Intersection(parts) => {
                let mut flat = Vec::with_capacity(parts.len());
                for part in parts {
                    match part.normalized() {
                        ClassExpression::Intersection(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    ClassExpression::Intersection(flat)
                }
            }
            other => other.clone(),
        }
    }

    /// Top-level conjuncts of the normalized expression.
    pub fn conjuncts(&self) -> Vec<ClassExpression<T>> {
        match self.normalized() {
            ClassExpression::Intersection(parts) => parts,
            other => vec![other],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom<T = TermId> {
    SubClassOf { sub: T, sup: T },
    /// `class` is expected to be named; validation reports anything else.
    EquivalentTo {
        class: ClassExpression<T>,
        expr: ClassExpression<T>,
    },
    TransitiveProperty(T),
    InverseProperties(T, T),
    SubPropertyOf { sub: T, sup: T },
    PropertyChain { chain: Vec<T>, implies: T },
}

impl<T> Axiom<T> {
    pub fn try_map<U, E>(&self, mut f: impl FnMut(&T) -> Result<U, E>) -> Result<Axiom<U>, E> {
        Ok(match self {
            Axiom::SubClassOf { sub, sup } => Axiom::SubClassOf {
                sub: f(sub)?,
                sup: f(sup)?,
            },
            Axiom::EquivalentTo { class, expr } => Axiom::EquivalentTo {
                class: class.try_map(&mut f)?,
                expr: expr.try_map(&mut f)?,
            },
            Axiom::TransitiveProperty(p) => Axiom::TransitiveProperty(f(p)?),
            Axiom::InverseProperties(p, q) => Axiom::InverseProperties(f(p)?, f(q)?),
            Axiom::SubPropertyOf { sub, sup } => Axiom::SubPropertyOf {
                sub: f(sub)?,
                sup: f(sup)?,
            },
            Axiom::PropertyChain { chain, implies } => Axiom::PropertyChain {
                chain: chain.iter().map(&mut f).collect::<Result<_, _>>()?,
                implies: f(implies)?,
            },
        })
    }
}

/// Rule variable, written `?name` in rule files.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom<T = TermId> {
    Class {
        class: T,
        var: Var,
    },
    Property {
        property: T,
        subject: Var,
        object: Var,
    },
}

impl<T> Atom<T> {
    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        let (a, b) = match self {
            Atom::Class { var, .. } => (var, None),
            Atom::Property {
                subject, object, ..
            } => (subject, Some(object)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn try_map<U, E>(&self, f: &mut impl FnMut(&T) -> Result<U, E>) -> Result<Atom<U>, E> {
        Ok(match self {
            Atom::Class { class, var } => Atom::Class {
                class: f(class)?,
                var: var.clone(),
            },
            Atom::Property {
                property,
                subject,
                object,
            } => Atom::Property {
                property: f(property)?,
                subject: subject.clone(),
                object: object.clone(),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HornRule<T = TermId> {
    pub name: String,
    pub body: Vec<Atom<T>>,
    pub head: Atom<T>,
}

impl<T> HornRule<T> {
    /// Head variables that never occur in the body.
    pub fn unbound_head_vars(&self) -> Vec<&Var> {
        let body: BTreeSet<&Var> = self.body.iter().flat_map(Atom::vars).collect();
        let mut out: Vec<&Var> = self.head.vars().filter(|v| !body.contains(v)).collect();
        out.dedup();
        out
    }

    pub fn try_map<U, E>(&self, mut f: impl FnMut(&T) -> Result<U, E>) -> Result<HornRule<U>, E> {
        Ok(HornRule {
            name: self.name.clone(),
            body: self
                .body
                .iter()
                .map(|a| a.try_map(&mut f))
                .collect::<Result<_, _>>()?,
            head: self.head.try_map(&mut f)?,
        })
    }
}

impl<T: fmt::Display> fmt::Display for ClassExpression<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpression::Named(c) => write!(f, "{c}"),
            ClassExpression::Intersection(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" and ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            ClassExpression::SomeValuesFrom { property, filler } => {
                write!(f, "({property} some {filler})")
            }
        }
    }
}

impl<T: fmt::Display> fmt::Display for Atom<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Class { class, var } => write!(f, "{class}({var})"),
            Atom::Property {
                property,
                subject,
                object,
            } => write!(f, "{property}({subject}, {object})"),
        }
    }
}
