//! Seeded random knowledge bases and graphs for property tests.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write;
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::incremental::{KbError, KnowledgeBase};
use crate::model::HornRule;
use crate::parser::{parse_rules, parse_turtle, OntologyDocument};
use crate::reasoner::{MaterializationStats, ReasonerConfig};
use crate::store::Term;

pub const RANDOM_NS: &str = "http://random.example/";

pub const MAX_INDIVIDUALS: usize = 30;
pub const MAX_CLASSES: usize = 10;
pub const MAX_AXIOMS: usize = 8;
pub const MAX_RULES: usize = 3;
/// Properties `p0..p3`; four is enough for every axiom shape.
pub const PROPERTIES: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RandomSpecError {
    #[error("{what} = {got} exceeds the cap of {cap}")]
    OverCap {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("at least one class is required")]
    NoClasses,
    #[error("edge density {0} is not in [0, 1]")]
    Density(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomKbSpec {
    pub seed: u64,
    pub individuals: usize,
    pub classes: usize,
    /// Probability of each `p(a, b)` edge, per property and ordered pair.
    pub edge_density: f64,
    pub axioms: usize,
    pub rules: usize,
}

impl RandomKbSpec {
    /// Sizes drawn from `seed` within the caps.
    pub fn sample(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
        Self {
            seed,
            individuals: rng.gen_range(0..=MAX_INDIVIDUALS),
            classes: rng.gen_range(1..=MAX_CLASSES),
            edge_density: rng.gen_range(0.0..0.12),
            axioms: rng.gen_range(0..=MAX_AXIOMS),
            rules: rng.gen_range(0..=MAX_RULES),
        }
    }

    pub fn check(&self) -> Result<(), RandomSpecError> {
        for (what, got, cap) in [
            ("individuals", self.individuals, MAX_INDIVIDUALS),
            ("classes", self.classes, MAX_CLASSES),
            ("axioms", self.axioms, MAX_AXIOMS),
            ("rules", self.rules, MAX_RULES),
        ] {
            if got > cap {
                return Err(RandomSpecError::OverCap { what, got, cap });
            }
        }
        if self.classes == 0 {
            return Err(RandomSpecError::NoClasses);
        }
        if !(0.0..=1.0).contains(&self.edge_density) {
            return Err(RandomSpecError::Density(self.edge_density));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RandomKb {
    pub turtle: String,
    pub rules_text: String,
    pub document: OntologyDocument,
    pub rules: Vec<HornRule<Term>>,
}

impl RandomKb {
    pub fn knowledge_base(
        &self,
        config: ReasonerConfig,
    ) -> Result<(KnowledgeBase, MaterializationStats), KbError> {
        KnowledgeBase::from_documents(std::slice::from_ref(&self.document), &self.rules, config)
    }
}

struct Gen {
    rng: ChaCha8Rng,
    spec: RandomKbSpec,
}

impl Gen {
    fn class(&mut self) -> String {
        format!("r:C{}", self.rng.gen_range(0..self.spec.classes))
    }

    fn prop(&mut self) -> usize {
        self.rng.gen_range(0..PROPERTIES)
    }

    fn individual(&mut self) -> String {
        format!("r:i{}", self.rng.gen_range(0..self.spec.individuals))
    }

    fn conjunct(&mut self) -> String {
        if self.rng.gen_bool(0.3) {
            self.class()
        } else {
            let p = self.prop();
            let c = self.class();
            format!("[ a owl:Restriction ; owl:onProperty r:p{p} ; owl:someValuesFrom {c} ]")
        }
    }

    fn axiom(&mut self, out: &mut String) {
        match self.rng.gen_range(0..6) {
            0 => {
                let (a, b) = (self.class(), self.class());
                let _ = writeln!(out, "{a} rdfs:subClassOf {b} .");
            }
            1 => {
                let c = self.class();
                let n = self.rng.gen_range(1..=3);
                let parts: Vec<String> = (0..n).map(|_| self.conjunct()).collect();
                if n == 1 {
                    let _ = writeln!(out, "{c} owl:equivalentClass {} .", parts[0]);
                } else {
                    let _ = writeln!(
                        out,
                        "{c} owl:equivalentClass [ owl:intersectionOf ( {} ) ] .",
                        parts.join(" ")
                    );
                }
            }
            2 => {
                let p = self.prop();
                let _ = writeln!(out, "r:p{p} a owl:TransitiveProperty .");
            }
            3 => {
                let (p, q) = (self.prop(), self.prop());
                let _ = writeln!(out, "r:p{p} owl:inverseOf r:p{q} .");
            }
            4 => {
                let p = self.prop();
                let q = (p + self.rng.gen_range(1..PROPERTIES)) % PROPERTIES;
                let _ = writeln!(out, "r:p{p} rdfs:subPropertyOf r:p{q} .");
            }
            _ => {
                let len = self.rng.gen_range(2..=3);
                let chain: Vec<usize> = (0..len).map(|_| self.prop()).collect();
                let free: Vec<usize> = (0..PROPERTIES).filter(|p| !chain.contains(p)).collect();
                let implied = *free.choose(&mut self.rng).expect("a property outside the chain");
                let members: Vec<String> = chain.iter().map(|p| format!("r:p{p}")).collect();
                let _ = writeln!(
                    out,
                    "r:p{implied} owl:propertyChainAxiom ( {} ) .",
                    members.join(" ")
                );
            }
        }
    }

    fn rule(&mut self, index: usize, out: &mut String) {
        let mut vars = vec!["x".to_string()];
        let mut body = Vec::new();
        for _ in 0..self.rng.gen_range(1..=3) {
            let a = vars.choose(&mut self.rng).expect("non-empty").clone();
            if self.rng.gen_bool(0.4) {
                let c = self.class();
                body.push(format!("{c}(?{a})"));
            } else {
                let b = if self.rng.gen_bool(0.5) {
                    let v = format!("v{}", vars.len());
                    vars.push(v.clone());
                    v
                } else {
                    vars.choose(&mut self.rng).expect("non-empty").clone()
                };
                let p = self.prop();
                if self.rng.gen_bool(0.5) {
                    body.push(format!("r:p{p}(?{a}, ?{b})"));
                } else {
                    body.push(format!("r:p{p}(?{b}, ?{a})"));
                }
            }
        }
        // Every variable in `vars` occurs in the body, so any is safe in the head.
        let bound = vars;
        let a = bound.choose(&mut self.rng).expect("body binds a variable").clone();
        let head = if self.rng.gen_bool(0.5) {
            format!("{}(?{a})", self.class())
        } else {
            let b = bound.choose(&mut self.rng).expect("non-empty").clone();
            format!("r:p{}(?{a}, ?{b})", self.prop())
        };
        let _ = writeln!(out, "rule \"r{index}\": {} -> {head} .", body.join(", "));
    }
}

const HEADER: &str = "@prefix r: <http://random.example/> .\n";

/// Renders and parses a random knowledge base. The same `RandomKbSpec` always yields
/// byte-identical text.
pub fn generate_random(spec: &RandomKbSpec) -> Result<RandomKb, RandomSpecError> {
    spec.check()?;
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        spec: spec.clone(),
    };
    let mut ttl = String::from(HEADER);
    ttl.push_str(
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
         @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\n",
    );
    for _ in 0..spec.axioms {
        g.axiom(&mut ttl);
    }
    let n = spec.individuals;
    for a in 0..n {
        for _ in 0..g.rng.gen_range(0..=2) {
            let c = g.class();
            let _ = writeln!(ttl, "r:i{a} a {c} .");
        }
    }
    for p in 0..PROPERTIES {
        for a in 0..n {
            for b in 0..n {
                if a != b && g.rng.gen_bool(spec.edge_density) {
                    let _ = writeln!(ttl, "r:i{a} r:p{p} r:i{b} .");
                }
            }
        }
    }
    if n > 0 {
        // Literals, blank nodes and a collection, so that serialization and
        // the reasoner see every kind of term.
        let (a, b) = (g.individual(), g.individual());
        let p = g.prop();
        let _ = writeln!(ttl, "{a} rdfs:label \"node \\\"{a}\\\"\" .");
        let _ = writeln!(ttl, "{b} r:p{p} {} .", g.rng.gen_range(0..100));
        if g.rng.gen_bool(0.5) {
            let (c, d) = (g.individual(), g.individual());
            let (p, q) = (g.prop(), g.prop());
            let _ = writeln!(ttl, "{c} r:p{p} [ r:p{q} {d} ] .");
        }
        if g.rng.gen_bool(0.3) {
            let (c, d, e) = (g.individual(), g.individual(), g.individual());
            let _ = writeln!(ttl, "_:b0 r:p{} {c} .", g.prop());
            let _ = writeln!(ttl, "{d} r:list ( {c} {e} ) .");
        }
    }

    let mut rules_text = String::from(HEADER);
    for i in 0..spec.rules {
        g.rule(i, &mut rules_text);
    }

    let document = parse_turtle(&ttl).unwrap_or_else(|e| panic!("generated turtle parses: {e}\n{ttl}"));
    let rules = parse_rules(&rules_text)
        .unwrap_or_else(|e| panic!("generated rules parse: {e}\n{rules_text}"))
        .rules;
    Ok(RandomKb {
        turtle: ttl,
        rules_text,
        document,
        rules,
    })
}

/// Random simple digraph on `nodes` vertices (no self loops).
pub fn random_digraph(nodes: usize, density: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..nodes {
        for b in 0..nodes {
            if a != b && rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Transitive closure by breadth-first search from every node: `(a, b)` is
/// in the result iff a non-empty path leads from `a` to `b`.
pub fn bfs_closure_oracle<N: Copy + Ord + Hash>(edges: &[(N, N)]) -> BTreeSet<(N, N)> {
    let mut adj: HashMap<N, Vec<N>> = HashMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
    }
    let mut out = BTreeSet::new();
    for &start in adj.keys() {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<N> = adj[&start].iter().copied().collect();
        while let Some(n) = queue.pop_front() {
            if seen.insert(n) {
                queue.extend(adj.get(&n).into_iter().flatten().copied());
            }
        }
        out.extend(seen.into_iter().map(|n| (start, n)));
    }
    out
}
