//! Recognition of OWL/RDFS schema triples as [`Axiom`]s.

use std::collections::{HashMap, HashSet};

use super::{Diagnostic, SourceSpan, TermTriple};
use crate::model::{Axiom, ClassExpression};
use crate::store::Term;
use crate::vocab::*;

pub(crate) struct Recognized {
    pub axioms: Vec<Axiom<Term>>,
    pub axiom_spans: Vec<SourceSpan>,
    pub facts: Vec<TermTriple>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Splits `triples` into axioms and leftover facts. Diagnostics carry a
/// default span; the Turtle reader attaches real positions.
pub fn recognize_axioms(triples: &[TermTriple]) -> (Vec<Axiom<Term>>, Vec<TermTriple>, Vec<Diagnostic>) {
    let spans = vec![SourceSpan::new(1, 1, 1); triples.len()];
    let r = recognize(triples, &spans);
    (r.axioms, r.facts, r.diagnostics)
}

/// Declarations that carry no semantics here and are kept silently.
const DECLARATIONS: &[&str] = &[
    OWL_CLASS,
    OWL_OBJECT_PROPERTY,
    OWL_NAMED_INDIVIDUAL,
    OWL_RESTRICTION,
    RDFS_CLASS,
    "http://www.w3.org/2002/07/owl#Ontology",
    "http://www.w3.org/2002/07/owl#Thing",
];

enum Issue {
    /// Not understood; the triples stay as facts.
    Unsupported(String),
    /// Recognizably an axiom, but malformed.
    Broken(String),
}

fn named(t: &Term) -> Option<&str> {
    t.as_iri().filter(|i| !is_skolem(i))
}

fn is_skolem_term(t: &Term) -> bool {
    t.as_iri().is_some_and(is_skolem)
}

fn in_schema_namespace(iri: &str) -> bool {
    iri.starts_with(OWL_NS) || iri.starts_with(RDFS_NS)
}

struct Graph<'a> {
    triples: &'a [TermTriple],
    by_subject: HashMap<&'a Term, Vec<usize>>,
}

impl<'a> Graph<'a> {
    fn new(triples: &'a [TermTriple]) -> Self {
        let mut by_subject: HashMap<&Term, Vec<usize>> = HashMap::new();
        for (i, t) in triples.iter().enumerate() {
            by_subject.entry(&t.s).or_default().push(i);
        }
        Self {
            triples,
            by_subject,
        }
    }

    fn objects(&self, s: &Term, p: &str) -> Vec<(usize, &'a Term)> {
        self.by_subject
            .get(s)
            .into_iter()
            .flatten()
            .filter(|&&i| self.triples[i].p.as_iri() == Some(p))
            .map(|&i| (i, &self.triples[i].o))
            .collect()
    }

    fn type_triple(&self, s: &Term, class: &str) -> Option<usize> {
        self.objects(s, RDF_TYPE)
            .into_iter()
            .find(|(_, o)| o.as_iri() == Some(class))
            .map(|(i, _)| i)
    }

    /// Items of the collection starting at `head`, recording the cell
    /// triples in `used`.
    fn list(&self, head: &'a Term, used: &mut Vec<usize>) -> Result<Vec<&'a Term>, String> {
        let mut items = Vec::new();
        let mut seen = HashSet::new();
        let mut cell = head;
        while cell.as_iri() != Some(RDF_NIL) {
            if !is_skolem_term(cell) || !seen.insert(cell) {
                return Err(format!("malformed collection at {cell}"));
            }
            let first = self.objects(cell, RDF_FIRST);
            let rest = self.objects(cell, RDF_REST);
            if first.len() != 1 || rest.len() != 1 {
                return Err(format!("malformed collection at {cell}"));
            }
            used.push(first[0].0);
            used.push(rest[0].0);
            items.push(first[0].1);
            cell = rest[0].1;
        }
        Ok(items)
    }

    fn class_expr(
        &self,
        t: &'a Term,
        used: &mut Vec<usize>,
        depth: usize,
    ) -> Result<ClassExpression<Term>, Issue> {
        if let Some(_iri) = named(t) {
            return Ok(ClassExpression::Named(t.clone()));
        }
        if !is_skolem_term(t) {
            return Err(Issue::Unsupported(format!("{t} cannot denote a class")));
        }
        if depth > 32 {
            return Err(Issue::Broken("class expression nests too deeply".into()));
        }
        if let Some(i) = self.type_triple(t, OWL_CLASS) {
            used.push(i);
        }
        let inter = self.objects(t, OWL_INTERSECTION_OF);
        if let [(i, head)] = inter.as_slice() {
            used.push(*i);
            let members = self.list(head, used).map_err(Issue::Broken)?;
            let parts = members
                .into_iter()
                .map(|m| self.class_expr(m, used, depth + 1))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(ClassExpression::Intersection(parts));
        }
        let restriction = self.type_triple(t, OWL_RESTRICTION);
        let on = self.objects(t, OWL_ON_PROPERTY);
        if restriction.is_some() || !on.is_empty() {
            used.extend(restriction);
            let [(on_i, property)] = on.as_slice() else {
                return Err(Issue::Broken(if on.is_empty() {
                    "restriction without owl:onProperty".into()
                } else {
                    "restriction with several owl:onProperty values".into()
                }));
            };
            if named(property).is_none() {
                return Err(Issue::Broken(format!("restriction on non-named property {property}")));
            }
            let svf = self.objects(t, OWL_SOME_VALUES_FROM);
            let [(svf_i, filler)] = svf.as_slice() else {
                return Err(Issue::Unsupported(
                    "only owl:someValuesFrom restrictions are supported".into(),
                ));
            };
            used.push(*on_i);
            used.push(*svf_i);
            let filler = self.class_expr(filler, used, depth + 1)?;
            return Ok(ClassExpression::SomeValuesFrom {
                property: (*property).clone(),
                filler: Box::new(filler),
            });
        }
        Err(Issue::Unsupported(format!("unrecognized class expression {t}")))
    }
}

pub(crate) fn recognize(triples: &[TermTriple], spans: &[SourceSpan]) -> Recognized {
    let g = Graph::new(triples);
    let mut consumed = vec![false; triples.len()];
    let mut out = Recognized {
        axioms: Vec::new(),
        axiom_spans: Vec::new(),
        facts: Vec::new(),
        diagnostics: Vec::new(),
    };
    let mut found: Vec<(usize, Axiom<Term>)> = Vec::new();

    // Structured axioms first, so the triples they consume are not reported
    // as stray vocabulary later.
    for (i, t) in triples.iter().enumerate() {
        let span = spans[i];
        match t.p.as_iri() {
            Some(OWL_EQUIVALENT_CLASS) => {
                let mut used = vec![i];
                let lhs = g.class_expr(&t.s, &mut used, 0);
                let rhs = g.class_expr(&t.o, &mut used, 0);
                match (lhs, rhs) {
                    (Ok(class), Ok(expr)) => {
                        for u in used {
                            consumed[u] = true;
                        }
                        found.push((i, Axiom::EquivalentTo { class, expr }));
                    }
                    (Err(Issue::Broken(m)), _) | (_, Err(Issue::Broken(m))) => {
                        out.diagnostics.push(Diagnostic::error(m, span));
                    }
                    (Err(Issue::Unsupported(m)), _) | (_, Err(Issue::Unsupported(m))) => {
                        out.diagnostics.push(Diagnostic::warning(
                            format!("owl:equivalentClass not recognized ({m}); kept as a fact"),
                            span,
                        ));
                    }
                }
            }
            Some(OWL_PROPERTY_CHAIN_AXIOM) => {
                let mut used = vec![i];
                let chain = g.list(&t.o, &mut used).and_then(|items| {
                    items
                        .into_iter()
                        .map(|p| {
                            named(p)
                                .map(|_| p.clone())
                                .ok_or_else(|| format!("chain member {p} is not a named property"))
                        })
                        .collect::<Result<Vec<_>, _>>()
                });
                match (chain, named(&t.s)) {
                    (Ok(chain), Some(_)) => {
                        for u in used {
                            consumed[u] = true;
                        }
                        found.push((
                            i,
                            Axiom::PropertyChain {
                                chain,
                                implies: t.s.clone(),
                            },
                        ));
                    }
                    (Err(m), _) => out
                        .diagnostics
                        .push(Diagnostic::error(format!("malformed property chain: {m}"), span)),
                    (_, None) => out.diagnostics.push(Diagnostic::error(
                        "property chain must be attached to a named property",
                        span,
                    )),
                }
            }
            _ => {}
        }
    }

    for (i, t) in triples.iter().enumerate() {
        if consumed[i] {
            continue;
        }
        let span = spans[i];
        let Some(p) = t.p.as_iri() else { continue };
        let pair = || Some((named(&t.s)?.to_string(), named(&t.o)?.to_string()));
        let axiom = match p {
            RDFS_SUB_CLASS_OF | RDFS_SUB_PROPERTY_OF | OWL_INVERSE_OF => match pair() {
                Some(_) => Some(match p {
                    RDFS_SUB_CLASS_OF => Axiom::SubClassOf {
                        sub: t.s.clone(),
                        sup: t.o.clone(),
                    },
                    RDFS_SUB_PROPERTY_OF => Axiom::SubPropertyOf {
                        sub: t.s.clone(),
                        sup: t.o.clone(),
                    },
                    _ => Axiom::InverseProperties(t.s.clone(), t.o.clone()),
                }),
                None => {
                    out.diagnostics.push(Diagnostic::warning(
                        format!("<{p}> between non-named terms is not supported; kept as a fact"),
                        span,
                    ));
                    None
                }
            },
            RDF_TYPE if t.o.as_iri() == Some(OWL_TRANSITIVE_PROPERTY) => {
                if named(&t.s).is_some() {
                    Some(Axiom::TransitiveProperty(t.s.clone()))
                } else {
                    out.diagnostics.push(Diagnostic::warning(
                        "owl:TransitiveProperty on a non-named term; kept as a fact",
                        span,
                    ));
                    None
                }
            }
            RDF_TYPE => {
                if let Some(o) = t.o.as_iri() {
                    if in_schema_namespace(o) && !DECLARATIONS.contains(&o) {
                        out.diagnostics.push(Diagnostic::warning(
                            format!("unsupported vocabulary <{o}>; kept as a fact"),
                            span,
                        ));
                    }
                }
                None
            }
            RDFS_LABEL | RDFS_COMMENT => None,
            p if in_schema_namespace(p) => {
                out.diagnostics.push(Diagnostic::warning(
                    format!("unsupported vocabulary <{p}>; kept as a fact"),
                    span,
                ));
                None
            }
            _ => None,
        };
        if let Some(a) = axiom {
            consumed[i] = true;
            found.push((i, a));
        }
    }

    found.sort_by_key(|(i, _)| *i);
    for (i, a) in found {
        if !out.axioms.contains(&a) {
            out.axioms.push(a);
            out.axiom_spans.push(spans[i]);
        }
    }
    out.facts = triples
        .iter()
        .zip(&consumed)
        .filter(|(_, &c)| !c)
        .map(|(t, _)| t.clone())
        .collect();
    out
}
