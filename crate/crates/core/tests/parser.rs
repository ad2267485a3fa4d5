use std::collections::{BTreeMap, BTreeSet};

use capakb::fixtures::{build_pepper, ex_prefixes, generate_random, RandomKbSpec};
use capakb::incremental::KnowledgeBase;
use capakb::model::{Atom, Axiom, ClassExpression};
use capakb::parser::{
    parse_rules, parse_turtle, parse_turtle_with, serialize_turtle, OntologyDocument, SerializeOptions,
    TermTriple, TurtleOptions,
};
use capakb::reasoner::ReasonerConfig;
use capakb::store::{LiteralKind, Origin, Term, TripleStore};
use capakb::vocab;
use proptest::prelude::*;

fn triple_set(doc: &OntologyDocument) -> BTreeSet<TermTriple> {
    doc.triples.iter().cloned().collect()
}

fn iri_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        "[A-Za-z_][A-Za-z0-9_-]{0,6}".prop_map(|l| Term::iri(format!("http://ex.org/{l}"))),
        "[a-z0-9./#~-]{0,8}".prop_map(|l| Term::iri(format!("http://other.example/{l}"))),
        "[0-9]{1,3}".prop_map(|n| Term::iri(format!("urn:capakb:bnode:{n}"))),
    ]
}

fn object_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => iri_term(),
        1 => any::<String>().prop_map(Term::string),
        1 => any::<i32>().prop_map(|n| Term::Literal { lexical: n.to_string(), kind: LiteralKind::Integer }),
        1 => (any::<i16>(), 0..1000u32).prop_map(|(a, b)| Term::Literal {
            lexical: format!("{a}.{b}"),
            kind: LiteralKind::Decimal,
        }),
    ]
}

fn text_for(triples: &[(Term, Term, Term)], derived_mask: &[bool]) -> (TripleStore, String) {
    let mut store = TripleStore::new();
    for (i, (s, p, o)) in triples.iter().enumerate() {
        let t = capakb::store::Triple::new(
            store.intern(s).unwrap(),
            store.intern(p).unwrap(),
            store.intern(o).unwrap(),
        );
        let origin = if derived_mask.get(i).copied().unwrap_or(false) { Origin::Derived } else { Origin::Asserted };
        store.insert(t, origin);
    }
    let text = serialize_turtle(&store, &ex_prefixes(), &SerializeOptions { include_derived: true });
    (store, text)
}

proptest! {
    #[test]
    fn serialized_stores_parse_back_to_the_same_triples(
        triples in prop::collection::vec((iri_term(), iri_term(), object_term()), 0..30),
        derived in prop::collection::vec(any::<bool>(), 0..30),
    ) {
        let (store, text) = text_for(&triples, &derived);
        let doc = parse_turtle(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        let expected: BTreeSet<TermTriple> = store
            .iter()
            .map(|t| TermTriple::new(store.resolve(t.s).clone(), store.resolve(t.p).clone(), store.resolve(t.o).clone()))
            .collect();
        prop_assert_eq!(triple_set(&doc), expected);
    }

    #[test]
    fn serialization_ignores_insertion_order(
        mut triples in prop::collection::vec((iri_term(), iri_term(), object_term()), 0..20),
    ) {
        let (_, forward) = text_for(&triples, &[]);
        triples.reverse();
        let (_, backward) = text_for(&triples, &[]);
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn random_documents_round_trip(seed in 0u64..10_000) {
        let random = generate_random(&RandomKbSpec::sample(seed)).unwrap();
        let (kb, _) = KnowledgeBase::from_documents(
            std::slice::from_ref(&random.document),
            &[],
            ReasonerConfig::default(),
        ).unwrap();
        let text = serialize_turtle(kb.store(), &random.document.prefixes, &SerializeOptions::default());
        let again = parse_turtle(&text).unwrap();
        prop_assert_eq!(triple_set(&random.document), triple_set(&again));
    }
}

#[test]
fn derived_triples_are_marked_and_optional() {
    let pepper = build_pepper();
    let (kb, _) = pepper.knowledge_base(ReasonerConfig::default()).unwrap();
    let plain = serialize_turtle(kb.store(), &ex_prefixes(), &SerializeOptions::default());
    let full = serialize_turtle(kb.store(), &ex_prefixes(), &SerializeOptions { include_derived: true });
    assert!(!plain.contains("# derived"));
    let marked = full.lines().filter(|l| l.ends_with("# derived")).count();
    assert_eq!(marked, kb.store().derived_count());
    assert!(full.contains("ex:ScrewingCapability"));
    // Derived lines are still valid Turtle.
    assert_eq!(parse_turtle(&full).unwrap().triples.len(), kb.store().len());
}

#[test]
fn skolem_offset_keeps_documents_disjoint() {
    let text = "@prefix ex: <http://ex.org/> .\n_:a ex:p [ ex:q ex:r ] .";
    let first = parse_turtle(text).unwrap();
    assert_eq!(first.next_skolem, 2);
    let options = TurtleOptions {
        skolem_offset: first.next_skolem,
        ..TurtleOptions::default()
    };
    let second = parse_turtle_with(text, &options).unwrap();
    let subjects = |d: &OntologyDocument| -> BTreeSet<String> {
        d.triples.iter().filter_map(|t| t.s.as_iri().map(str::to_string)).collect()
    };
    assert!(subjects(&first).is_disjoint(&subjects(&second)));
    assert!(subjects(&second).iter().all(|s| vocab::skolem_number(s).unwrap() >= 2));
    // The same label in one document is the same node.
    let doc = parse_turtle("@prefix ex: <http://ex.org/> .\n_:x ex:p _:x .").unwrap();
    assert_eq!(doc.triples[0].s, doc.triples[0].o);
}

#[test]
fn inherited_prefixes_resolve() {
    let options = TurtleOptions {
        prefixes: ex_prefixes(),
        ..TurtleOptions::default()
    };
    let doc = parse_turtle_with("ex:a ex:p ex:b .", &options).unwrap();
    assert_eq!(doc.triples[0].s, Term::iri("http://ex.org/a"));
    assert!(parse_turtle("ex:a ex:p ex:b .").is_err());
}

#[test]
fn diagnostics_point_at_the_offending_token() {
    let text = "@prefix ex: <http://ex.org/> .\nex:a ex:p \"x\"@en .\n  nope:b ex:p ex:c .\n<rel> ex:p ex:c .";
    let err = parse_turtle(text).unwrap_err();
    let errors: Vec<_> = err.errors().collect();
    assert_eq!(errors.len(), 3, "{errors:?}");
    assert!(errors[0].message.contains("language-tagged"));
    assert_eq!(errors[0].span.line, 2);
    assert!(errors[1].message.contains("unknown prefix 'nope:'"));
    assert_eq!((errors[1].span.line, errors[1].span.column), (3, 3));
    assert!(errors[2].message.contains("relative IRI"));
    assert_eq!(errors[2].span.line, 4);
    assert!(err.to_string().starts_with("3 error(s)"));
}

#[test]
fn collections_become_rdf_lists() {
    let doc = parse_turtle("@prefix ex: <http://ex.org/> .\nex:s ex:p ( ex:a ex:b ) .").unwrap();
    let preds: Vec<&str> = doc.triples.iter().filter_map(|t| t.p.as_iri()).collect();
    assert_eq!(preds.iter().filter(|p| **p == vocab::RDF_FIRST).count(), 2);
    assert_eq!(preds.iter().filter(|p| **p == vocab::RDF_REST).count(), 2);
    assert!(doc.triples.iter().any(|t| t.o == Term::iri(vocab::RDF_NIL)));
}

#[test]
fn axiom_vocabulary_is_recognized() {
    let doc = parse_turtle(&build_pepper().turtle).unwrap();
    assert!(doc.warnings.is_empty(), "{:?}", doc.warnings);
    let has = |pred: &dyn Fn(&Axiom<Term>) -> bool| doc.axioms.iter().any(pred);
    let ex = |l: &str| Term::iri(format!("http://ex.org/{l}"));
    assert!(has(&|a| *a == Axiom::TransitiveProperty(ex("hasComponent"))));
    assert!(has(&|a| *a == Axiom::SubPropertyOf { sub: ex("isHolding"), sup: ex("hasComponent") }));
    assert!(has(&|a| *a == Axiom::InverseProperties(ex("hasCapability"), ex("isCapabilityOf"))));
    assert!(has(&|a| *a == Axiom::PropertyChain {
        chain: vec![ex("isCapabilityOf"), ex("hasComponent")],
        implies: ex("hasAvailableComponent"),
    }));
    assert!(has(&|a| *a == Axiom::EquivalentTo {
        class: ClassExpression::Named(ex("ScrewingCapability")),
        expr: ClassExpression::some(ex("hasAvailableComponent"), ex("Screwdriver")),
    }));
    assert_eq!(doc.axioms.len(), doc.axiom_spans.len());
}

#[test]
fn unknown_schema_vocabulary_warns_but_keeps_the_triple() {
    let text = "@prefix ex: <http://ex.org/> .\n@prefix owl: <http://www.w3.org/2002/07/owl#> .\nex:p owl:propertyDisjointWith ex:q .";
    let doc = parse_turtle(text).unwrap();
    assert_eq!(doc.warnings.len(), 1);
    assert!(!doc.warnings[0].is_error());
    assert_eq!(doc.facts.len(), 1);
}

#[test]
fn broken_restriction_is_an_error() {
    let text = "@prefix ex: <http://ex.org/> .\n@prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
                ex:C owl:equivalentClass [ a owl:Restriction ; owl:someValuesFrom ex:D ] .";
    assert!(parse_turtle(text).is_err());
}

#[test]
fn rule_files_parse_and_report_errors() {
    let doc = parse_rules(&build_pepper().rules_text).unwrap();
    assert_eq!(doc.rules.len(), 1);
    let rule = &doc.rules[0];
    assert!(matches!(&rule.head, Atom::Property { property, .. } if *property == Term::iri("http://ex.org/hasGraspingAffordance")));

    let bad = "@prefix ex: <http://ex.org/> .\nrule \"a\": ex:p(?x, ?y) -> ex:q(?x, ?y) .\nrule \"a\": ex:p(?x, ?y) -> ex:q(?y, ?x) .\n";
    let err = parse_rules(bad).unwrap_err();
    let first = err.errors().next().unwrap();
    assert!(first.message.contains("duplicate rule name"), "{first}");
    assert_eq!(first.span.line, 3);

    let unsafe_rule = "@prefix ex: <http://ex.org/> .\nrule \"u\": ex:C(?x) -> ex:p(?x, ?z) .\n";
    assert!(parse_rules(unsafe_rule).is_err());
    assert!(parse_rules("rule \"z\": zz:C(?x) -> zz:D(?x) .").is_err());
}

#[test]
fn prefix_map_is_kept_in_order() {
    let doc = parse_turtle("@prefix b: <http://b/> .\n@prefix a: <http://a/> .").unwrap();
    let expected: BTreeMap<String, String> =
        [("a", "http://a/"), ("b", "http://b/")].map(|(k, v)| (k.to_string(), v.to_string())).into();
    assert_eq!(doc.prefixes, expected);
}
