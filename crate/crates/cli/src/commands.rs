use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use capakb::model::Atom;
use capakb::parser::{serialize_turtle, SerializeOptions};
use capakb::query::{affordances_of, capabilities_of, export_dot, instances_of, DotOptions};
use capakb::store::{TermId, Triple};
use serde_json::json;

use crate::error::{exit, CliError};
use crate::output::{origin_name, Printer};
use crate::repl::Repl;
use crate::session::{load_sources, Session};
use crate::{Cli, Command, Query};

pub(crate) fn dispatch(
    cli: &Cli,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
    interactive: bool,
) -> Result<u8, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Check { paths } => check(&g.session_config(paths), out),
        Command::Materialize { paths, emit } => {
            let session = Session::open(&g.session_config(paths), err)?;
            materialize(&session, emit.as_deref(), out)
        }
        Command::Query { paths, query } => {
            let session = Session::open(&g.session_config(paths), err)?;
            answer(&session, query, out)
        }
        Command::Repl { paths, with_derived } => {
            let session = Session::open(&g.session_config(paths), err)?;
            Repl::new(session, *with_derived).run(input, out, interactive)?;
            Ok(exit::OK)
        }
        Command::Dot {
            paths,
            out: path,
            focus,
            depth,
            asserted_only,
        } => {
            let session = Session::open(&g.session_config(paths), err)?;
            let focus = focus.as_deref().map(|f| session.lookup(f)).transpose()?;
            let options = DotOptions {
                show_derived: !asserted_only,
                focus,
                depth: *depth,
            };
            let dot = export_dot(&session.kb, &options, session.prefixes());
            match path {
                Some(p) => write_file(p, &dot)?,
                None => out.write_all(dot.as_bytes())?,
            }
            Ok(exit::OK)
        }
    }
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn check(config: &crate::SessionConfig, out: &mut dyn Write) -> Result<u8, CliError> {
    let sources = load_sources(config)?;
    let printer = Printer::new(config.output_format, sources.prefixes.clone());
    sources.print_diagnostics(&printer, out)?;
    Ok(if sources.error_count() > 0 { exit::ERROR } else { exit::OK })
}

fn materialize(session: &Session, emit: Option<&Path>, out: &mut dyn Write) -> Result<u8, CliError> {
    let s = &session.stats;
    let p = &session.printer;
    let elapsed_ms = s.elapsed.as_secs_f64() * 1e3;
    p.emit(
        out,
        &format!(
            "iterations: {}\nderived: {}\nasserted: {}\nelapsed: {elapsed_ms:.3} ms",
            s.iterations,
            s.derived_count,
            session.kb.store().asserted_count()
        ),
        json!({
            "kind": "stats",
            "iterations": s.iterations,
            "derived": s.derived_count,
            "asserted": session.kb.store().asserted_count(),
            "elapsed_ms": elapsed_ms,
        }),
    )?;
    for (rule, fires) in &s.rule_fire_counts {
        p.emit(out, &format!("fired {fires:>6}  {rule}"), json!({"kind": "rule", "name": rule, "fires": fires}))?;
    }
    if let Some(path) = emit {
        let text = serialize_turtle(session.kb.store(), session.prefixes(), &SerializeOptions { include_derived: true });
        write_file(path, &text)?;
    }
    Ok(exit::OK)
}

/// Answers one query; shared with the REPL, where the exit code is ignored.
pub(crate) fn answer(session: &Session, query: &Query, out: &mut dyn Write) -> Result<u8, CliError> {
    let kb = &session.kb;
    let store = kb.store();
    let p = &session.printer;
    let text = |id: TermId| p.text_term(store.resolve(id));
    let json = |id: TermId| p.json_term(store.resolve(id));
    match query {
        Query::Capabilities { agent, all } => {
            let agent = session.lookup(agent)?;
            let report =
                capabilities_of(kb, agent, &session.vocabulary).map_err(|e| CliError::Invalid(e.to_string()))?;
            let shown = if *all { &report.capabilities } else { &report.defined };
            let mut lines: Vec<(String, TermId)> = shown.iter().map(|c| (text(*c), *c)).collect();
            lines.sort();
            for (name, class) in lines {
                let record = json!({
                    "kind": "capability",
                    "agent": json(agent),
                    "class": json(class),
                    "defined": report.defined.contains(&class),
                });
                p.emit(out, &name, record)?;
            }
        }
        Query::Instances { class } => {
            let class = session.lookup(class)?;
            let mut lines: Vec<(String, TermId)> = instances_of(kb, class).into_iter().map(|i| (text(i), i)).collect();
            lines.sort();
            for (name, i) in lines {
                p.emit(out, &name, json!({"kind": "instance", "class": json(class), "term": json(i)}))?;
            }
        }
        Query::Affordances { agent, properties } => {
            let agent = session.lookup(agent)?;
            let properties: Vec<TermId> = if properties.is_empty() {
                default_affordance_properties(session)
            } else {
                properties.iter().map(|t| session.lookup(t)).collect::<Result<_, _>>()?
            };
            let mut lines: Vec<(String, Triple)> = affordances_of(kb, agent, &properties)
                .into_iter()
                .map(|(prop, o)| (format!("{} {}", text(prop), text(o)), Triple::new(agent, prop, o)))
                .collect();
            lines.sort();
            for (line, t) in lines {
                p.emit(out, &line, p.json_triple(store, t, json!({"kind": "affordance"})))?;
            }
        }
        Query::Ask { s, p: pred, o } => {
            let t = Triple::new(session.lookup(s)?, session.lookup(pred)?, session.lookup(o)?);
            let origin = store.origin(&t);
            let text = match origin {
                Some(o) => format!("yes ({})", origin_name(o)),
                None => "no".to_string(),
            };
            p.emit(out, &text, p.json_triple(store, t, json!({"kind": "ask", "present": origin.is_some()})))?;
            if origin.is_none() {
                return Ok(exit::ABSENT);
            }
        }
    }
    Ok(exit::OK)
}

/// Properties concluded by user rules: those are the affordances the rule
/// files define.
fn default_affordance_properties(session: &Session) -> Vec<TermId> {
    let mut out: Vec<TermId> = session
        .kb
        .rules()
        .iter()
        .filter_map(|r| match &r.head {
            Atom::Property { property, .. } => Some(*property),
            Atom::Class { .. } => None,
        })
        .collect();
    out.sort();
    out.dedup();
    out
}
