//! Deterministic Turtle output.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::store::{LiteralKind, Origin, Term, TermId, TripleStore};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SerializeOptions {
    /// Also write derived triples, each marked with a `# derived` comment.
    pub include_derived: bool,
}

fn valid_local(local: &str) -> bool {
    let ok = |c: char| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.';
    match (local.chars().next(), local.chars().last()) {
        (None, _) => true,
        (Some(first), Some(last)) => {
            (first.is_ascii_alphanumeric() || first == '_')
                && last != '.'
                && local.chars().all(ok)
        }
        _ => false,
    }
}

fn valid_prefix(prefix: &str) -> bool {
    prefix.is_empty()
        || (prefix.starts_with(|c: char| c.is_ascii_alphabetic())
            && !prefix.ends_with('.')
            && prefix
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.'))
}

/// Renders one term, abbreviating IRIs with the longest matching prefix.
pub fn render_term(term: &Term, prefixes: &BTreeMap<String, String>) -> String {
    match term {
        Term::Iri(iri) => {
            let best = prefixes
                .iter()
                .filter(|(p, ns)| valid_prefix(p) && !ns.is_empty() && iri.starts_with(ns.as_str()))
                .filter(|(_, ns)| valid_local(&iri[ns.len()..]))
                .max_by_key(|(p, ns)| (ns.len(), std::cmp::Reverse(p.as_str())));
            match best {
                Some((p, ns)) => format!("{p}:{}", &iri[ns.len()..]),
                None => format!("<{iri}>"),
            }
        }
        Term::BlankNode(label) => format!("_:{label}"),
        Term::Literal { lexical, kind } => match kind {
            LiteralKind::String => quote(lexical),
            LiteralKind::Integer | LiteralKind::Decimal => lexical.clone(),
        },
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Per subject: `(not rdf:type, predicate lexical) -> (object text, object, derived)`.
type Predicates = BTreeMap<(bool, String), Vec<(String, TermId, bool)>>;

/// Writes the store as Turtle: prefixes sorted by name, subjects sorted by
/// lexical form, `rdf:type` first (as `a`), then predicates and objects in
/// lexical order, one object per line.
pub fn serialize_turtle(
    store: &TripleStore,
    prefixes: &BTreeMap<String, String>,
    options: &SerializeOptions,
) -> String {
    let mut out = String::new();
    for (p, ns) in prefixes {
        if valid_prefix(p) {
            let _ = writeln!(out, "@prefix {p}: <{ns}> .");
        }
    }

    let lex = |id: TermId| store.resolve(id).lexical().to_string();
    let ty = store.vocabulary().rdf_type;
    let mut groups: BTreeMap<String, (TermId, Predicates)> = BTreeMap::new();
    for (t, origin) in store.iter_with_origin() {
        let derived = origin == Origin::Derived;
        if derived && !options.include_derived {
            continue;
        }
        let entry = groups.entry(lex(t.s)).or_insert_with(|| (t.s, BTreeMap::new()));
        entry
            .1
            .entry((t.p != ty, lex(t.p)))
            .or_default()
            .push((lex(t.o), t.o, derived));
    }

    for (_, (subject, preds)) in groups {
        out.push('\n');
        let subject = render_term(store.resolve(subject), prefixes);
        let npreds = preds.len();
        for (pi, ((not_type, p_iri), mut objects)) in preds.into_iter().enumerate() {
            objects.sort();
            let pred = if not_type {
                render_term(&Term::iri(p_iri), prefixes)
            } else {
                "a".to_string()
            };
            let nobj = objects.len();
            for (oi, (_, o, derived)) in objects.into_iter().enumerate() {
                let lead = match (pi, oi) {
                    (0, 0) => format!("{subject} {pred} "),
                    (_, 0) => format!("    {pred} "),
                    _ => "        ".to_string(),
                };
                let punct = if oi + 1 < nobj {
                    ','
                } else if pi + 1 < npreds {
                    ';'
                } else {
                    '.'
                };
                let _ = write!(out, "{lead}{} {punct}", render_term(store.resolve(o), prefixes));
                if derived {
                    out.push_str(" # derived");
                }
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_turtle;
    use super::*;
    use crate::store::Triple;

    fn prefixes() -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("ex".to_string(), "http://ex.org/".to_string());
        m
    }

    #[test]
    fn empty_store_is_prefix_block_only() {
        let store = TripleStore::new();
        assert_eq!(
            serialize_turtle(&store, &prefixes(), &SerializeOptions::default()),
            "@prefix ex: <http://ex.org/> .\n"
        );
    }

    #[test]
    fn layout_groups_predicates_and_objects() {
        let mut store = TripleStore::new();
        let id = |s: &mut TripleStore, l: &str| s.intern_iri(&format!("http://ex.org/{l}")).unwrap();
        let (a, p, b, c, k) = (
            id(&mut store, "a"),
            id(&mut store, "p"),
            id(&mut store, "b"),
            id(&mut store, "c"),
            id(&mut store, "K"),
        );
        let ty = store.vocabulary().rdf_type;
        store.insert(Triple::new(a, p, c), Origin::Derived);
        store.insert(Triple::new(a, p, b), Origin::Asserted);
        store.insert(Triple::new(a, ty, k), Origin::Asserted);
        let opts = SerializeOptions {
            include_derived: true,
        };
        assert_eq!(
            serialize_turtle(&store, &prefixes(), &opts),
            "@prefix ex: <http://ex.org/> .\n\nex:a a ex:K ;\n    ex:p ex:b ,\n        ex:c . # derived\n"
        );
        let asserted_only = serialize_turtle(&store, &prefixes(), &SerializeOptions::default());
        assert!(!asserted_only.contains("ex:c"));
    }

    #[test]
    fn terms_fall_back_to_full_iris_and_quote_strings() {
        let p = prefixes();
        assert_eq!(render_term(&Term::iri("http://ex.org/a/b"), &p), "<http://ex.org/a/b>");
        assert_eq!(render_term(&Term::iri("http://ex.org/x."), &p), "<http://ex.org/x.>");
        assert_eq!(render_term(&Term::string("a\"b\n"), &p), "\"a\\\"b\\n\"");
    }

    #[test]
    fn output_reparses_to_the_same_triples() {
        let text = "@prefix ex: <http://ex.org/> .\n\
            ex:a ex:p ex:b , \"lit \\\\ x\" ; ex:q [ ex:r 1.5 ] ; ex:s ( ex:c -2 ) .";
        let doc = parse_turtle(text).unwrap();
        let mut store = TripleStore::new();
        for t in &doc.triples {
            let s = store.intern(&t.s).unwrap();
            let p = store.intern(&t.p).unwrap();
            let o = store.intern(&t.o).unwrap();
            store.insert(Triple::new(s, p, o), Origin::Asserted);
        }
        let out = serialize_turtle(&store, &doc.prefixes, &SerializeOptions::default());
        let again = parse_turtle(&out).unwrap();
        let mut x = doc.triples.clone();
        let mut y = again.triples.clone();
        x.sort();
        y.sort();
        assert_eq!(x, y);
    }
}
