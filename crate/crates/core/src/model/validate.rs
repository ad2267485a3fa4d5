use std::fmt;

use super::{Axiom, ClassExpression, HornRule};

/// Which input item a diagnostic refers to (index into the slice passed to
/// [`validate`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Location {
    Axiom(usize),
    Rule(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    NestedIntersection,
    ComplexFiller,
    ComplexLeftSide,
    EmptyIntersection,
    ShortChain,
    SelfRecursiveChain,
    UnsafeRule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDiagnostic {
    pub location: Location,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for ModelDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Reports every construct outside the supported fragment. An empty result
/// means the inputs compile.
pub fn validate<T: PartialEq + fmt::Display>(
    axioms: &[Axiom<T>],
    rules: &[HornRule<T>],
) -> Vec<ModelDiagnostic> {
    let mut out = Vec::new();
    for (i, axiom) in axioms.iter().enumerate() {
        let loc = Location::Axiom(i);
        let mut push = |kind, message: String| {
            out.push(ModelDiagnostic {
                location: loc,
                kind,
                message,
            })
        };
        match axiom {
            Axiom::EquivalentTo { class, expr } => {
                if class.as_named().is_none() {
                    push(
                        DiagnosticKind::ComplexLeftSide,
                        format!("equivalence with complex left side unsupported: {class}"),
                    );
                }
                check_expression(expr, &mut push);
            }
            Axiom::PropertyChain { chain, implies } => {
                if chain.len() < 2 {
                    push(
                        DiagnosticKind::ShortChain,
                        format!(
                            "property chain for {implies} needs at least 2 properties, got {}",
                            chain.len()
                        ),
                    );
                }
                if chain.contains(implies) {
                    push(
                        DiagnosticKind::SelfRecursiveChain,
                        format!("property chain mentions its own implied property {implies}"),
                    );
                }
            }
            Axiom::SubClassOf { .. }
            | Axiom::TransitiveProperty(_)
            | Axiom::InverseProperties(..)
            | Axiom::SubPropertyOf { .. } => {}
        }
    }
    for (i, rule) in rules.iter().enumerate() {
        for var in rule.unbound_head_vars() {
            out.push(ModelDiagnostic {
                location: Location::Rule(i),
                kind: DiagnosticKind::UnsafeRule,
                message: format!(
                    "unsafe rule \"{}\": head variable {var} does not occur in the body",
                    rule.name
                ),
            });
        }
    }
    out
}

fn check_expression<T: fmt::Display>(
    expr: &ClassExpression<T>,
    push: &mut impl FnMut(DiagnosticKind, String),
) {
    if expr.intersection_depth() > 2 {
        push(
            DiagnosticKind::NestedIntersection,
            format!("intersection nested more than one level deep: {expr}"),
        );
    }
    walk(expr, push);

    fn walk<T: fmt::Display>(
        expr: &ClassExpression<T>,
        push: &mut impl FnMut(DiagnosticKind, String),
    ) {
        match expr {
            ClassExpression::Named(_) => {}
            ClassExpression::Intersection(parts) => {
                if parts.is_empty() {
                    push(
                        DiagnosticKind::EmptyIntersection,
                        "empty intersection".to_string(),
                    );
                }
                for p in parts {
                    walk(p, push);
                }
            }
            ClassExpression::SomeValuesFrom { filler, .. } => {
                if filler.as_named().is_none() {
                    push(
                        DiagnosticKind::ComplexFiller,
                        format!("complex filler unsupported: {expr}"),
                    );
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Atom, Var};

    type Ce = ClassExpression<&'static str>;

    fn kinds(d: &[ModelDiagnostic]) -> Vec<DiagnosticKind> {
        d.iter().map(|d| d.kind).collect()
    }

    #[test]
    fn complex_filler_is_one_diagnostic() {
        let filler: Ce = ClassExpression::Intersection(vec![
            ClassExpression::Named("A"),
            ClassExpression::Named("B"),
        ]);
        let axiom = Axiom::EquivalentTo {
            class: ClassExpression::Named("C"),
            expr: ClassExpression::SomeValuesFrom {
                property: "r",
                filler: Box::new(filler),
            },
        };
        let d = validate(&[axiom], &[]);
        assert_eq!(kinds(&d), vec![DiagnosticKind::ComplexFiller]);
        assert!(d[0].message.contains("complex filler unsupported"));
        assert_eq!(d[0].location, Location::Axiom(0));
    }

    #[test]
    fn unsafe_rule_is_one_diagnostic() {
        let rule = HornRule {
            name: "bad".into(),
            body: vec![Atom::Class {
                class: "A",
                var: Var::new("x"),
            }],
            head: Atom::Property {
                property: "p",
                subject: Var::new("x"),
                object: Var::new("q"),
            },
        };
        let d = validate::<&str>(&[], &[rule]);
        assert_eq!(kinds(&d), vec![DiagnosticKind::UnsafeRule]);
        assert!(d[0].message.contains("unsafe rule"));
        assert!(d[0].message.contains("?q"));
    }

    #[test]
    fn structural_violations() {
        let deep: Ce = ClassExpression::Intersection(vec![
            ClassExpression::Named("A"),
            ClassExpression::Intersection(vec![
                ClassExpression::Named("B"),
                ClassExpression::Intersection(vec![
                    ClassExpression::Named("C"),
                    ClassExpression::Named("D"),
                ]),
            ]),
        ]);
        let axioms = vec![
            Axiom::EquivalentTo {
                class: ClassExpression::Named("X"),
                expr: deep,
            },
            Axiom::EquivalentTo {
                class: ClassExpression::some("r", "A"),
                expr: ClassExpression::Named("Y"),
            },
            Axiom::PropertyChain {
                chain: vec!["p", "q"],
                implies: "q",
            },
            Axiom::PropertyChain {
                chain: vec!["p"],
                implies: "q",
            },
            Axiom::EquivalentTo {
                class: ClassExpression::Named("Z"),
                expr: ClassExpression::Intersection(vec![]),
            },
        ];
        let d = validate::<&str>(&axioms, &[]);
        assert_eq!(
            kinds(&d),
            vec![
                DiagnosticKind::NestedIntersection,
                DiagnosticKind::ComplexLeftSide,
                DiagnosticKind::SelfRecursiveChain,
                DiagnosticKind::ShortChain,
                DiagnosticKind::EmptyIntersection,
            ]
        );
    }

    #[test]
    fn one_level_of_nesting_is_accepted() {
        let nested: Ce = ClassExpression::Intersection(vec![
            ClassExpression::Named("A"),
            ClassExpression::Intersection(vec![
                ClassExpression::Named("B"),
                ClassExpression::some("r", "C"),
            ]),
        ]);
        let axiom = Axiom::EquivalentTo {
            class: ClassExpression::Named("X"),
            expr: nested,
        };
        assert!(validate::<&str>(&[axiom], &[]).is_empty());
    }
}
