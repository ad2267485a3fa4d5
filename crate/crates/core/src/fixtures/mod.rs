//! Test and benchmark fixtures: the Pepper robot, seeded random knowledge
//! bases, large component forests, and an independent closure oracle.
//!
//! The committed files under `fixtures/` at the repository root are
//! renderings of [`build_pepper`]; set `CAPAKB_BLESS=1` when running the
//! fixture tests to rewrite them.

mod forest;
mod pepper;
mod random;

use std::path::PathBuf;

pub use forest::{generate_forest, Forest, ForestSpec, FOREST_NS};
pub use pepper::{build_pepper, PepperFixture};
pub use random::{
    bfs_closure_oracle, generate_random, random_digraph, RandomKb, RandomKbSpec, RandomSpecError,
    MAX_AXIOMS, MAX_CLASSES, MAX_INDIVIDUALS, MAX_RULES, PROPERTIES, RANDOM_NS,
};

pub const EX: &str = "http://ex.org/";

/// Environment variable that makes fixture tests rewrite committed files.
pub const BLESS_VAR: &str = "CAPAKB_BLESS";

/// `ex:` plus the standard RDF/RDFS/OWL prefixes.
pub fn ex_prefixes() -> std::collections::BTreeMap<String, String> {
    [
        ("ex", EX),
        ("owl", crate::vocab::OWL_NS),
        ("rdf", crate::vocab::RDF_NS),
        ("rdfs", crate::vocab::RDFS_NS),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// The repository's `fixtures/` directory.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn bless_requested() -> bool {
    std::env::var_os(BLESS_VAR).is_some_and(|v| v != "0")
}
