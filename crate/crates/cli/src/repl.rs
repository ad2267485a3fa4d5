//! Line-oriented session over one knowledge base.
//!
//! Commands: `assert <s p o>`, `retract <s p o>`, `query <…>`,
//! `explain <s p o>`, `dot <path>`, `save <path> [--with-derived]`, `help`,
//! `quit`. Errors are reported and the session continues.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use capakb::incremental::{DeltaReport, KbError};
use capakb::parser::{serialize_turtle, SerializeOptions};
use capakb::query::{explain, export_dot, DotOptions};
use capakb::store::{TermId, Triple};
use clap::Parser;
use serde_json::json;

use crate::commands::{answer, write_file};
use crate::error::CliError;
use crate::session::Session;
use crate::Query;

/// Levels of rule application shown by `explain`.
pub const EXPLAIN_DEPTH: usize = 16;

const HELP: &str = "\
assert <s> <p> <o>          add a fact and report what changed
retract <s> <p> <o>         remove an asserted fact and report what changed
query capabilities <agent> [--all]
query instances <class>
query affordances <agent> [--property <p>]...
query ask <s> <p> <o>
explain <s> <p> <o>         derivation tree of a stored fact
dot <path>                  write the graph as Graphviz DOT
save <path> [--with-derived]  write the facts as Turtle
quit";

#[derive(Debug, Parser)]
#[command(no_binary_name = true, name = "query", disable_help_flag = true)]
struct QueryLine {
    #[command(subcommand)]
    query: Query,
}

pub struct Repl {
    session: Session,
    with_derived: bool,
}

impl Repl {
    pub fn new(session: Session, with_derived: bool) -> Self {
        Self { session, with_derived }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn run(&mut self, input: &mut dyn BufRead, out: &mut dyn Write, prompt: bool) -> Result<(), CliError> {
        let mut line = String::new();
        loop {
            if prompt {
                write!(out, "capakb> ")?;
                out.flush()?;
            }
            line.clear();
            if input.read_line(&mut line)? == 0 {
                return Ok(());
            }
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (cmd, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            if matches!(cmd, "quit" | "exit") {
                return Ok(());
            }
            match self.execute(cmd, rest.trim(), out) {
                Ok(()) => {}
                Err(CliError::Output(e)) => return Err(CliError::Output(e)),
                Err(e) => self.session.printer.error(out, &e.to_string())?,
            }
        }
    }

    fn execute(&mut self, cmd: &str, rest: &str, out: &mut dyn Write) -> Result<(), CliError> {
        match cmd {
            "help" => writeln!(out, "{HELP}")?,
            "assert" => {
                let t = self.session.intern_triple(rest)?;
                let before = self.capability_facts();
                let report = self.session.kb.assert_fact(t).map_err(|e| self.kb_error(e))?;
                self.report(&report, &before, out)?;
            }
            "retract" => {
                let t = self.session.lookup_triple(rest)?;
                let before = self.capability_facts();
                let report = self.session.kb.retract_fact(t).map_err(|e| self.kb_error(e))?;
                self.report(&report, &before, out)?;
            }
            "query" => {
                let parsed = QueryLine::try_parse_from(rest.split_whitespace())
                    .map_err(|e| CliError::Invalid(first_line(&e.render().to_string())))?;
                answer(&self.session, &parsed.query, out)?;
            }
            "explain" => {
                let t = self.session.lookup_triple(rest)?;
                let tree = explain(&self.session.kb, t, EXPLAIN_DEPTH).map_err(|e| CliError::Invalid(e.to_string()))?;
                let text = tree.render(self.session.kb.store(), self.session.prefixes());
                let p = &self.session.printer;
                match p.format {
                    crate::Format::Text => out.write_all(text.as_bytes())?,
                    crate::Format::JsonLines => {
                        p.emit(out, "", json!({"kind": "explanation", "text": text, "height": tree.height()}))?
                    }
                }
            }
            "dot" => {
                let path = single_path(rest)?;
                write_file(path.as_ref(), &export_dot(&self.session.kb, &DotOptions::default(), self.session.prefixes()))?;
            }
            "save" => {
                let mut words: Vec<&str> = rest.split_whitespace().collect();
                let with_derived = self.with_derived || words.contains(&"--with-derived");
                words.retain(|w| *w != "--with-derived");
                let path = single_path(&words.join(" "))?;
                let options = SerializeOptions {
                    include_derived: with_derived,
                };
                write_file(path.as_ref(), &serialize_turtle(self.session.kb.store(), self.session.prefixes(), &options))?;
            }
            other => return Err(CliError::Invalid(format!("unknown command '{other}' (try 'help')"))),
        }
        Ok(())
    }

    fn kb_error(&self, e: KbError) -> CliError {
        match e {
            KbError::RetractDerived(t) => CliError::Invalid(format!(
                "cannot retract derived fact {}; retract its asserted supports",
                self.session.printer.text_triple(self.session.kb.store(), t)
            )),
            KbError::Reasoner(e) => CliError::IterationCap(e),
            other => CliError::Invalid(other.to_string()),
        }
    }

    /// `type(x, C)` facts with `C` at or below the capability root.
    fn capability_facts(&self) -> BTreeSet<Triple> {
        let store = self.session.kb.store();
        let ty = store.vocabulary().rdf_type;
        self.session
            .capability_classes()
            .into_iter()
            .flat_map(|c| store.matching(capakb::store::Pattern::new(None, Some(ty), Some(c))))
            .collect()
    }

    /// Counts, then the capability facts that appeared or disappeared.
    fn report(&self, report: &DeltaReport, before: &BTreeSet<Triple>, out: &mut dyn Write) -> Result<(), CliError> {
        let p = &self.session.printer;
        let store = self.session.kb.store();
        p.emit(
            out,
            &format!(
                "added {}, removed {}, rederived {}",
                report.added.len(),
                report.removed.len(),
                report.rederived.len()
            ),
            json!({
                "kind": "delta",
                "added": report.added.len(),
                "removed": report.removed.len(),
                "rederived": report.rederived.len(),
            }),
        )?;
        let after = self.capability_facts();
        let resolve = |id: TermId| p.text_term(store.resolve(id));
        for (change, facts) in [("removed", before.difference(&after)), ("added", after.difference(before))] {
            for t in facts {
                let text = format!("{change}: {} a {}", resolve(t.s), resolve(t.o));
                let record = json!({
                    "kind": "capability_change",
                    "change": change,
                    "s": p.json_term(store.resolve(t.s)),
                    "p": p.json_term(store.resolve(t.p)),
                    "o": p.json_term(store.resolve(t.o)),
                });
                p.emit(out, &text, record)?;
            }
        }
        Ok(())
    }
}

fn single_path(rest: &str) -> Result<String, CliError> {
    if rest.is_empty() {
        return Err(CliError::Invalid("expected a file path".into()));
    }
    Ok(rest.to_string())
}

fn first_line(s: &str) -> String {
    s.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string()
}
