//! The Pepper robot ontology and its grasping-affordance rule, kept as data
//! and rendered to the committed `fixtures/pepper.ttl` and
//! `fixtures/pepper.rules`.

use std::fmt::Write;

use super::EX;
use crate::incremental::{KbError, KnowledgeBase};
use crate::model::HornRule;
use crate::parser::{parse_rules, parse_turtle, serialize_turtle, OntologyDocument, SerializeOptions};
use crate::reasoner::{naive_fixpoint, MaterializationStats, ReasonerConfig};
use crate::store::Term;

enum Conjunct {
    Class(&'static str),
    Some(&'static str, &'static str),
}

use Conjunct::{Class, Some as Has};

/// `(class, superclass)` for the capability hierarchy.
const HIERARCHY: &[(&str, &str)] = &[
    ("Communication", "Capability"),
    ("Perception", "Capability"),
    ("Navigation", "Capability"),
    ("ObjectManipulation", "Capability"),
    ("MotionCommunicationCapability", "Communication"),
    ("VerbalCommunicationCapability", "Communication"),
    ("HumanDetection", "Perception"),
    ("HumanFaceDetection", "HumanDetection"),
    ("HumanLocalisation", "HumanDetection"),
    ("BodyJointsDetection", "HumanDetection"),
];

/// `(class, superclass, definition)` for capabilities enabled by components.
const DEFINED: &[(&str, &str, &[Conjunct])] = &[
    (
        "ObjectLocalisationCapa",
        "Perception",
        &[Has("hasAvailableComponent", "Camera"), Has("hasAvailableComponent", "ObjectTracker")],
    ),
    (
        "HandPointingCapa",
        "MotionCommunicationCapability",
        &[Class("ObjectLocalisationCapa"), Has("hasAvailableComponent", "Hand")],
    ),
    ("ScrewingCapability", "ObjectManipulation", &[Has("hasAvailableComponent", "Screwdriver")]),
];

/// Capabilities present in the hierarchy but asserted rather than defined.
const UNDEFINED: &[(&str, &str)] = &[("MoveObjectViaGrasping", "ObjectManipulation")];

const ENTITY_CLASSES: &[&str] = &["Agent", "Camera", "ObjectTracker", "Hand", "Screwdriver", "Pickable"];

const FACTS: &[(&str, &str, &str)] = &[
    ("pepper", "a", "Agent"),
    ("pepper", "hasCapability", "pepper_capa"),
    ("pepper", "hasComponent", "pepper_head"),
    ("pepper", "hasComponent", "artrack"),
    ("pepper", "hasComponent", "pepper_rightarm"),
    ("pepper_capa", "a", "MoveObjectViaGrasping"),
    ("pepper_head", "hasComponent", "realsense"),
    ("pepper_rightarm", "hasComponent", "pepper_hand"),
    ("pepper_hand", "a", "Hand"),
    ("pepper_hand", "isHolding", "screwdriver"),
    ("realsense", "a", "Camera"),
    ("artrack", "a", "ObjectTracker"),
    ("screwdriver", "a", "Screwdriver"),
    ("cube", "a", "Pickable"),
];

const GRASPING_RULE: &str = "rule \"grasping\": ex:Agent(?a), ex:MoveObjectViaGrasping(?m), \
ex:hasCapability(?a, ?m), ex:Pickable(?p) -> ex:hasGraspingAffordance(?a, ?p) .";

fn conjunct(c: &Conjunct, indent: &str) -> String {
    match c {
        Class(name) => format!("ex:{name}"),
        Has(p, f) => format!(
            "[ a owl:Restriction ;\n{indent}  owl:onProperty ex:{p} ;\n{indent}  owl:someValuesFrom ex:{f} ]"
        ),
    }
}

fn render_ontology() -> String {
    let mut out = String::new();
    out.push_str(
        "# Pepper: capabilities inferred from the components the robot owns\n\
         # and the objects it holds.\n\
         @prefix ex: <http://ex.org/> .\n\
         @prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
         @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\n\
         # Properties\n\
         ex:hasComponent a owl:ObjectProperty , owl:TransitiveProperty .\n\
         ex:isHolding a owl:ObjectProperty ;\n    rdfs:subPropertyOf ex:hasComponent .\n\
         ex:hasCapability a owl:ObjectProperty ;\n    owl:inverseOf ex:isCapabilityOf .\n\
         ex:isCapabilityOf a owl:ObjectProperty .\n\
         ex:hasAvailableComponent a owl:ObjectProperty ;\n    \
         owl:propertyChainAxiom ( ex:isCapabilityOf ex:hasComponent ) .\n\
         ex:hasGraspingAffordance a owl:ObjectProperty .\n\n\
         # Capability hierarchy\n\
         ex:Capability a owl:Class .\n",
    );
    for (c, sup) in HIERARCHY {
        let _ = writeln!(out, "ex:{c} a owl:Class ; rdfs:subClassOf ex:{sup} .");
    }
    out.push_str("\n# Capabilities enabled by components\n");
    for (c, sup, parts) in DEFINED {
        let _ = write!(out, "ex:{c} a owl:Class ;\n    rdfs:subClassOf ex:{sup} ;\n    owl:equivalentClass ");
        if let [single] = parts {
            out.push_str(&conjunct(single, "    "));
        } else {
            out.push_str("[ a owl:Class ;\n      owl:intersectionOf (");
            for p in *parts {
                let _ = write!(out, "\n        {}", conjunct(p, "        "));
            }
            out.push_str("\n      ) ]");
        }
        out.push_str(" .\n");
    }
    for (c, sup) in UNDEFINED {
        let _ = writeln!(out, "ex:{c} a owl:Class ; rdfs:subClassOf ex:{sup} .");
    }
    out.push_str(
        "# Grasping is asserted on the capability individual below; a component-based\n\
         # definition would look like this:\n\
         # ex:MoveObjectViaGrasping owl:equivalentClass [ a owl:Restriction ;\n\
         #     owl:onProperty ex:hasAvailableComponent ; owl:someValuesFrom ex:Gripper ] .\n",
    );
    out.push_str("\n# Components, agents and objects\n");
    for c in ENTITY_CLASSES {
        let _ = writeln!(out, "ex:{c} a owl:Class .");
    }
    out.push_str("\n# Individuals\n");
    for (s, p, o) in FACTS {
        let p = if *p == "a" { "a".to_string() } else { format!("ex:{p}") };
        let _ = writeln!(out, "ex:{s} {p} ex:{o} .");
    }
    out
}

fn render_rules() -> String {
    format!("@prefix ex: <{EX}> .\n\n{GRASPING_RULE}\n")
}

/// The fixture as text and as parsed values.
#[derive(Debug, Clone)]
pub struct PepperFixture {
    pub turtle: String,
    pub rules_text: String,
    pub document: OntologyDocument,
    pub rules: Vec<HornRule<Term>>,
}

impl PepperFixture {
    pub fn knowledge_base(
        &self,
        config: ReasonerConfig,
    ) -> Result<(KnowledgeBase, MaterializationStats), KbError> {
        KnowledgeBase::from_documents(std::slice::from_ref(&self.document), &self.rules, config)
    }

    /// The fully materialized graph, computed by the naive reference
    /// fixpoint and written with derived triples marked.
    pub fn golden(&self) -> String {
        let (kb, _) = self
            .knowledge_base(ReasonerConfig::default())
            .expect("pepper compiles");
        let mut store = kb.store().clone();
        store.clear_derived();
        naive_fixpoint(&mut store, kb.program(), &ReasonerConfig::default()).expect("pepper terminates");
        serialize_turtle(
            &store,
            &self.document.prefixes,
            &SerializeOptions {
                include_derived: true,
            },
        )
    }
}

pub fn build_pepper() -> PepperFixture {
    let turtle = render_ontology();
    let rules_text = render_rules();
    let document = parse_turtle(&turtle).expect("pepper ontology parses");
    let rules = parse_rules(&rules_text).expect("pepper rules parse").rules;
    PepperFixture {
        turtle,
        rules_text,
        document,
        rules,
    }
}
