//! Large synthetic component forests for timing runs, built straight into a
//! store rather than through text.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::incremental::{KbError, KnowledgeBase};
use crate::model::{Axiom, ClassExpression};
use crate::reasoner::{MaterializationStats, ReasonerConfig};
use crate::store::{Origin, StoreError, TermId, Triple, TripleStore};

pub const FOREST_NS: &str = "http://forest.example/";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestSpec {
    pub seed: u64,
    /// Total `hasComponent` edges.
    pub edges: usize,
    /// Edges per agent tree.
    pub tree_size: usize,
    /// Longest root-to-leaf path, in edges.
    pub max_depth: usize,
    pub component_classes: usize,
    /// Capability classes, each defined as having two component kinds.
    pub equivalences: usize,
}

impl Default for ForestSpec {
    fn default() -> Self {
        Self {
            seed: 7,
            edges: 50_000,
            tree_size: 100,
            max_depth: 6,
            component_classes: 10,
            equivalences: 20,
        }
    }
}

pub struct Forest {
    pub store: TripleStore,
    pub axioms: Vec<Axiom>,
    /// Every asserted `hasComponent` edge, in creation order.
    pub edges: Vec<Triple>,
    /// Depth of each edge's child below its agent.
    pub depths: Vec<usize>,
}

impl Forest {
    pub fn knowledge_base(
        self,
        config: ReasonerConfig,
    ) -> Result<(KnowledgeBase, MaterializationStats), KbError> {
        KnowledgeBase::new(self.store, self.axioms, Vec::new(), config)
    }
}

pub fn generate_forest(spec: &ForestSpec) -> Result<Forest, StoreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut store = TripleStore::new();
    let iri = |s: &mut TripleStore, local: &str| s.intern_iri(&format!("{FOREST_NS}{local}"));
    let ty = store.vocabulary().rdf_type;
    let has_component = iri(&mut store, "hasComponent")?;
    let has_capability = iri(&mut store, "hasCapability")?;
    let is_capability_of = iri(&mut store, "isCapabilityOf")?;
    let available = iri(&mut store, "hasAvailableComponent")?;
    let agent_class = iri(&mut store, "Agent")?;
    let root = iri(&mut store, "Capability")?;
    let kinds: Vec<TermId> = (0..spec.component_classes.max(1))
        .map(|k| iri(&mut store, &format!("Kind{k}")))
        .collect::<Result<_, _>>()?;

    let mut axioms = vec![
        Axiom::TransitiveProperty(has_component),
        Axiom::InverseProperties(has_capability, is_capability_of),
        Axiom::PropertyChain {
            chain: vec![is_capability_of, has_component],
            implies: available,
        },
    ];
    for j in 0..spec.equivalences {
        let class = iri(&mut store, &format!("Cap{j}"))?;
        let a = kinds[rng.gen_range(0..kinds.len())];
        let b = kinds[rng.gen_range(0..kinds.len())];
        axioms.push(Axiom::SubClassOf { sub: class, sup: root });
        axioms.push(Axiom::EquivalentTo {
            class: ClassExpression::Named(class),
            expr: ClassExpression::Intersection(vec![
                ClassExpression::some(available, a),
                ClassExpression::some(available, b),
            ]),
        });
    }

    let mut edges = Vec::with_capacity(spec.edges);
    let mut depths = Vec::with_capacity(spec.edges);
    let mut tree = 0;
    let mut next_node = 0usize;
    while edges.len() < spec.edges {
        let agent = iri(&mut store, &format!("agent{tree}"))?;
        let capa = iri(&mut store, &format!("capa{tree}"))?;
        store.insert(Triple::new(agent, ty, agent_class), Origin::Asserted);
        store.insert(Triple::new(agent, has_capability, capa), Origin::Asserted);
        // (node, depth) of every node that can still take a child.
        let mut open = vec![(agent, 0usize)];
        let size = spec.tree_size.max(1).min(spec.edges - edges.len());
        for _ in 0..size {
            let (parent, d) = open[rng.gen_range(0..open.len())];
            let child = iri(&mut store, &format!("c{next_node}"))?;
            next_node += 1;
            let kind = kinds[rng.gen_range(0..kinds.len())];
            store.insert(Triple::new(child, ty, kind), Origin::Asserted);
            let e = Triple::new(parent, has_component, child);
            store.insert(e, Origin::Asserted);
            edges.push(e);
            depths.push(d + 1);
            if d + 1 < spec.max_depth {
                open.push((child, d + 1));
            }
        }
        tree += 1;
    }
    Ok(Forest {
        store,
        axioms,
        edges,
        depths,
    })
}
