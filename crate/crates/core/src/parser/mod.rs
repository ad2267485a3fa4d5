//! Turtle-subset ontologies, rule files, and a deterministic Turtle writer.
//!
//! The Turtle reader understands `@prefix`/`@base` (and the SPARQL-style
//! `PREFIX`/`BASE`), `<IRI>`s, prefixed names, `a`, `;`/`,` lists, blank
//! node property lists, collections, string/integer/decimal literals and
//! `#` comments. Blank nodes are skolemized into `urn:capakb:bnode:<n>`
//! IRIs. Errors carry a [`SourceSpan`]; parsing resynchronizes at the next
//! `.` so one bad statement does not hide the others.

mod lexer;
mod recognize;
mod rules;
mod serialize;
mod turtle;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use recognize::recognize_axioms;
pub use rules::{parse_rules, parse_rules_with, RuleDocument};
pub use serialize::{render_term, serialize_turtle, SerializeOptions};
pub use turtle::{parse_term, parse_term_triple, parse_turtle, parse_turtle_with, TurtleOptions};

use crate::model::Axiom;
use crate::store::Term;

/// Position of a diagnostic: 1-based line and column, length in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        Self {
            line,
            column,
            length,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            severity: Severity::Error,
            message: message.into(),
            span,
        }
    }

    pub fn warning(message: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            severity: Severity::Warning,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.span, self.severity, self.message)
    }
}

/// Parsing failed; `diagnostics` holds every error and warning found.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} error(s); first: {}", self.error_count(), self.first_error())]
pub struct ParseFailure {
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseFailure {
    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    fn error_count(&self) -> usize {
        self.errors().count()
    }

    fn first_error(&self) -> String {
        self.errors().next().map(ToString::to_string).unwrap_or_default()
    }
}

/// A triple of lexical terms, before interning.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermTriple {
    pub s: Term,
    pub p: Term,
    pub o: Term,
}

impl TermTriple {
    pub fn new(s: Term, p: Term, o: Term) -> Self {
        Self { s, p, o }
    }
}

impl fmt::Display for TermTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.s, self.p, self.o)
    }
}

/// A parsed ontology.
///
/// `triples` is the full graph in source order (what a store built from the
/// document holds); `axioms` and `facts` partition it into recognized schema
/// and everything else.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OntologyDocument {
    pub prefixes: BTreeMap<String, String>,
    pub base: Option<String>,
    pub triples: Vec<TermTriple>,
    pub triple_spans: Vec<SourceSpan>,
    pub axioms: Vec<Axiom<Term>>,
    pub axiom_spans: Vec<SourceSpan>,
    pub facts: Vec<TermTriple>,
    pub warnings: Vec<Diagnostic>,
    /// First skolem counter value not used by this document.
    pub next_skolem: u64,
}
