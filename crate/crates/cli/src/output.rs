//! Text and JSON-lines rendering.
//!
//! Every reported item is one line in either format. JSON objects carry a
//! `kind` field; terms are written in absolute Turtle syntax (`<iri>`,
//! `"literal"`, `42`) so that they are unambiguous without prefixes.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use capakb::parser::{render_term, Diagnostic};
use capakb::store::{Origin, Term, Triple, TripleStore};
use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    #[value(name = "json-lines")]
    JsonLines,
}

#[derive(Debug, Clone)]
pub struct Printer {
    pub format: Format,
    pub prefixes: BTreeMap<String, String>,
}

impl Printer {
    pub fn new(format: Format, prefixes: BTreeMap<String, String>) -> Self {
        Self { format, prefixes }
    }

    /// Writes `text` or `json`, whichever the format asks for.
    pub fn emit(&self, w: &mut dyn Write, text: &str, json: Value) -> io::Result<()> {
        match self.format {
            Format::Text => writeln!(w, "{text}"),
            Format::JsonLines => writeln!(w, "{json}"),
        }
    }

    /// Prefixed form for people.
    pub fn text_term(&self, term: &Term) -> String {
        render_term(term, &self.prefixes)
    }

    /// Absolute form for machines.
    pub fn json_term(&self, term: &Term) -> String {
        render_term(term, &BTreeMap::new())
    }

    pub fn text_triple(&self, store: &TripleStore, t: Triple) -> String {
        let r = |id| self.text_term(store.resolve(id));
        format!("{} {} {}", r(t.s), r(t.p), r(t.o))
    }

    /// `s`, `p`, `o` (and `origin`, when the fact is stored) as JSON fields
    /// merged into `base`.
    pub fn json_triple(&self, store: &TripleStore, t: Triple, mut base: Value) -> Value {
        let r = |id| self.json_term(store.resolve(id));
        let obj = base.as_object_mut().expect("json object");
        obj.insert("s".into(), r(t.s).into());
        obj.insert("p".into(), r(t.p).into());
        obj.insert("o".into(), r(t.o).into());
        if let Some(origin) = store.origin(&t) {
            obj.insert("origin".into(), origin_name(origin).into());
        }
        base
    }

    pub fn diagnostic(&self, w: &mut dyn Write, path: Option<&Path>, d: &Diagnostic) -> io::Result<()> {
        let file = path.map(|p| p.display().to_string());
        let text = match &file {
            Some(f) => format!("{f}:{d}"),
            None => d.to_string(),
        };
        let json = json!({
            "kind": "diagnostic",
            "file": file,
            "severity": d.severity.to_string(),
            "line": d.span.line,
            "column": d.span.column,
            "message": d.message,
        });
        self.emit(w, &text, json)
    }

    pub fn error(&self, w: &mut dyn Write, message: &str) -> io::Result<()> {
        self.emit(w, &format!("error: {message}"), json!({"kind": "error", "message": message}))
    }
}

pub fn origin_name(origin: Origin) -> &'static str {
    match origin {
        Origin::Asserted => "asserted",
        Origin::Derived => "derived",
    }
}
