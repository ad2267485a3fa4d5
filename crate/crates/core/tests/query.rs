mod common;

use std::collections::BTreeSet;

use capakb::fixtures::{build_pepper, ex_prefixes, generate_random, RandomKbSpec};
use capakb::incremental::KnowledgeBase;
use capakb::query::{
    affordances_of, capabilities_of, explain, export_dot, instances_of, CapabilityVocabulary, DerivationNode,
    DotOptions, QueryError,
};
use capakb::reasoner::ReasonerConfig;
use capakb::store::{Origin, Triple};
use proptest::prelude::*;

use common::{ex, ex_triple};

fn pepper() -> KnowledgeBase {
    build_pepper().knowledge_base(ReasonerConfig::default()).unwrap().0
}

fn names(kb: &KnowledgeBase, ids: &BTreeSet<capakb::store::TermId>) -> BTreeSet<String> {
    ids.iter()
        .map(|id| kb.store().resolve(*id).lexical().trim_start_matches("http://ex.org/").to_string())
        .collect()
}

/// Every node's children are exactly the premises of a recorded support
/// for its fact under the named rule.
fn check_tree(kb: &KnowledgeBase, node: &DerivationNode) {
    assert!(kb.store().contains(&node.fact));
    match (&node.rule, node.kind) {
        (None, Origin::Asserted) => assert!(node.children.is_empty()),
        (Some(rule), Origin::Derived) if !node.truncated => {
            let premises: Vec<Triple> = node.children.iter().map(|c| c.fact).collect();
            assert!(kb
                .provenance()
                .supports_of(&node.fact)
                .any(|s| kb.program().rule(s.rule).name == *rule && *s.premises == premises));
            node.children.iter().for_each(|c| check_tree(kb, c));
        }
        (_, Origin::Derived) => assert!(node.truncated && node.children.is_empty()),
        other => panic!("inconsistent node {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn explanations_are_backed_by_supports(seed in 0u64..100_000, depth in 0..6usize) {
        let random = generate_random(&RandomKbSpec::sample(seed)).unwrap();
        let (kb, _) = random.knowledge_base(ReasonerConfig::default()).unwrap();
        for (t, _) in kb.store().iter_with_origin().filter(|(_, o)| *o == Origin::Derived).take(50) {
            let tree = explain(&kb, t, depth).unwrap();
            prop_assert!(tree.height() <= depth + 1);
            check_tree(&kb, &tree);
        }
    }
}

#[test]
fn pepper_capabilities() {
    let kb = pepper();
    let report = capabilities_of(&kb, ex(&kb, "pepper"), &CapabilityVocabulary::default()).unwrap();
    assert_eq!(report.capability_individual, Some(ex(&kb, "pepper_capa")));
    let defined: BTreeSet<String> =
        ["ObjectLocalisationCapa", "HandPointingCapa", "ScrewingCapability"].map(String::from).into();
    assert_eq!(names(&kb, &report.defined), defined);
    let caps = names(&kb, &report.capabilities);
    assert!(caps.is_superset(&defined));
    assert!(caps.contains("Capability") && caps.contains("Perception"));
    assert!(!caps.contains("Camera"));
    let components = names(&kb, &report.components);
    for c in ["pepper_head", "realsense", "artrack", "pepper_hand", "screwdriver"] {
        assert!(components.contains(c), "{c}");
    }
}

#[test]
fn agents_without_capability_edges_report_nothing() {
    let kb = pepper();
    let report = capabilities_of(&kb, ex(&kb, "cube"), &CapabilityVocabulary::default()).unwrap();
    assert_eq!(report.capability_individual, None);
    assert!(report.capabilities.is_empty());
}

#[test]
fn two_capability_individuals_are_an_error() {
    let mut kb = pepper();
    let extra = kb.intern(&capakb::store::Term::iri("http://ex.org/spare_capa")).unwrap();
    let t = Triple::new(ex(&kb, "pepper"), ex(&kb, "hasCapability"), extra);
    kb.assert_fact(t).unwrap();
    let err = capabilities_of(&kb, ex(&kb, "pepper"), &CapabilityVocabulary::default()).unwrap_err();
    assert!(matches!(err, QueryError::MultipleCapabilityIndividuals { found, .. } if found.len() == 2));
}

#[test]
fn instances_and_affordances() {
    let kb = pepper();
    let screwing = instances_of(&kb, ex(&kb, "ScrewingCapability"));
    assert_eq!(names(&kb, &screwing), BTreeSet::from(["pepper_capa".to_string()]));
    let grasp = ex(&kb, "hasGraspingAffordance");
    let affordances = affordances_of(&kb, ex(&kb, "pepper"), &[grasp]);
    assert_eq!(affordances, BTreeSet::from([(grasp, ex(&kb, "cube"))]));
    assert!(affordances_of(&kb, ex(&kb, "cube"), &[grasp]).is_empty());
}

#[test]
fn losing_the_screwdriver_shows_up_in_queries() {
    let mut kb = pepper();
    kb.retract_fact(ex_triple(&kb, "pepper_hand", "isHolding", "screwdriver")).unwrap();
    let report = capabilities_of(&kb, ex(&kb, "pepper"), &CapabilityVocabulary::default()).unwrap();
    let defined = names(&kb, &report.defined);
    assert!(!defined.contains("ScrewingCapability"));
    assert!(defined.contains("HandPointingCapa"));
    assert!(instances_of(&kb, ex(&kb, "ScrewingCapability")).is_empty());
}

#[test]
fn explain_renders_rules_and_truncates() {
    let kb = pepper();
    let fact = ex_triple(&kb, "pepper_capa", "a", "HandPointingCapa");
    let tree = explain(&kb, fact, 20).unwrap();
    check_tree(&kb, &tree);
    assert!(tree.height() > 2);
    let text = tree.render(kb.store(), &ex_prefixes());
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("ex:pepper_capa rdf:type ex:HandPointingCapa  ["), "{first}");
    assert!(text.contains("(asserted)"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("  ")));

    let shallow = explain(&kb, fact, 0).unwrap();
    assert!(shallow.truncated && shallow.children.is_empty());
    assert!(shallow.render(kb.store(), &ex_prefixes()).trim_end().ends_with("..."));

    let asserted = ex_triple(&kb, "pepper", "hasComponent", "artrack");
    let leaf = explain(&kb, asserted, 5).unwrap();
    assert_eq!((leaf.height(), leaf.rule.as_deref()), (1, None));

    let missing = ex_triple(&kb, "cube", "hasComponent", "pepper");
    assert_eq!(explain(&kb, missing, 5).unwrap_err(), QueryError::FactNotInStore(missing));
}

#[test]
fn transitive_edges_explain_through_asserted_premises() {
    let kb = pepper();
    let fact = ex_triple(&kb, "pepper", "hasComponent", "realsense");
    let tree = explain(&kb, fact, 5).unwrap();
    assert!(tree.rule.as_deref().unwrap().starts_with("R3 "));
    let premises: Vec<Triple> = tree.children.iter().map(|c| c.fact).collect();
    assert_eq!(
        premises,
        vec![
            ex_triple(&kb, "pepper", "hasComponent", "pepper_head"),
            ex_triple(&kb, "pepper_head", "hasComponent", "realsense"),
        ]
    );
}

#[test]
fn dot_export_structure() {
    let kb = pepper();
    let dot = export_dot(&kb, &DotOptions::default(), &ex_prefixes());
    assert!(dot.starts_with("// capakb knowledge graph\ndigraph capakb {\n"));
    assert!(dot.ends_with("}\n"));
    assert!(dot.contains("\"http://ex.org/Camera\" [label=\"ex:Camera\", shape=box];"));
    assert!(dot.contains("\"http://ex.org/pepper\" [label=\"ex:pepper\", shape=ellipse];"));
    assert!(dot.contains(
        "\"http://ex.org/pepper\" -> \"http://ex.org/artrack\" [label=\"hasComponent\", style=solid];"
    ));
    assert!(dot.contains(
        "\"http://ex.org/pepper_capa\" -> \"http://ex.org/ScrewingCapability\" [label=\"isA\", style=dashed];"
    ));
    assert!(!dot.contains("owl#"));
    assert!(!dot.contains("urn:capakb:bnode"));
    assert_eq!(dot, export_dot(&kb, &DotOptions::default(), &ex_prefixes()));

    let asserted_only = DotOptions {
        show_derived: false,
        ..DotOptions::default()
    };
    assert!(!export_dot(&kb, &asserted_only, &ex_prefixes()).contains("dashed"));
}

#[test]
fn dot_focus_limits_the_neighbourhood() {
    let kb = pepper();
    let focus = DotOptions {
        show_derived: false,
        focus: Some(ex(&kb, "pepper_head")),
        depth: 1,
    };
    let dot = export_dot(&kb, &focus, &ex_prefixes());
    assert!(dot.contains("\"http://ex.org/realsense\""));
    assert!(dot.contains("\"http://ex.org/pepper\""));
    assert!(!dot.contains("\"http://ex.org/pepper_hand\""));

    let deeper = DotOptions { depth: 2, ..focus };
    assert!(export_dot(&kb, &deeper, &ex_prefixes()).contains("\"http://ex.org/artrack\""));

    let (empty, _) = KnowledgeBase::from_documents(&[], &[], ReasonerConfig::default()).unwrap();
    assert_eq!(
        export_dot(&empty, &DotOptions::default(), &ex_prefixes()),
        "// capakb knowledge graph\ndigraph capakb {}\n"
    );
}
