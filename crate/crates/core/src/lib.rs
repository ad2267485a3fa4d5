//! Capability inference over a small description-logic fragment.
//!
//! An agent's components (and the objects it carries) are stored as triples;
//! schema axioms are compiled into Horn rules and materialized by a
//! semi-naive fixpoint. Provenance is kept for every derived triple so that
//! retraction can be maintained incrementally (delete and rederive) and any
//! derived triple can be explained.

pub mod fixtures;
pub mod incremental;
pub mod model;
pub mod parser;
pub mod query;
pub mod reasoner;
pub mod store;
pub mod vocab;
