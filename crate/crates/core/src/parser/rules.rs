//! Rule files: an optional prefix block followed by statements of the form
//!
//! ```text
//! rule "grasping": ex:Agent(?a), ex:hasCapability(?a, ?m) -> ex:canAct(?a, ?m) .
//! ```

use std::collections::BTreeMap;

use super::lexer::{tokenize, Tok, Token};
use super::{Diagnostic, ParseFailure, SourceSpan};
use crate::model::{Atom, HornRule, Var};
use crate::store::{is_absolute_iri, Term};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RuleDocument {
    pub prefixes: BTreeMap<String, String>,
    pub rules: Vec<HornRule<Term>>,
    pub rule_spans: Vec<SourceSpan>,
}

pub fn parse_rules(text: &str) -> Result<RuleDocument, ParseFailure> {
    parse_rules_with(text, &BTreeMap::new())
}

/// Parses a rule file; `prefixes` are visible in addition to any declared
/// at the top of the file.
pub fn parse_rules_with(
    text: &str,
    prefixes: &BTreeMap<String, String>,
) -> Result<RuleDocument, ParseFailure> {
    let (tokens, mut diagnostics) = tokenize(text);
    let mut p = RuleParser {
        tokens,
        pos: 0,
        prefixes: prefixes.clone(),
        diags: Vec::new(),
        rules: Vec::new(),
        spans: Vec::new(),
        seen_rule: false,
    };
    while p.pos < p.tokens.len() {
        if p.statement().is_err() {
            p.resync();
        }
    }
    diagnostics.append(&mut p.diags);
    if diagnostics.iter().any(Diagnostic::is_error) {
        diagnostics.sort_by_key(|d| d.span);
        return Err(ParseFailure { diagnostics });
    }
    Ok(RuleDocument {
        prefixes: p.prefixes,
        rules: p.rules,
        rule_spans: p.spans,
    })
}

type PResult<T> = Result<T, ()>;

struct RuleParser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: BTreeMap<String, String>,
    diags: Vec<Diagnostic>,
    rules: Vec<HornRule<Term>>,
    spans: Vec<SourceSpan>,
    seen_rule: bool,
}

impl RuleParser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn span(&self) -> SourceSpan {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => self.tokens.last().map_or(SourceSpan::new(1, 1, 1), |t| {
                SourceSpan::new(t.span.line, t.span.column + t.span.length, 1)
            }),
        }
    }

    fn fail<T>(&mut self, message: impl Into<String>, span: SourceSpan) -> PResult<T> {
        self.diags.push(Diagnostic::error(message, span));
        Err(())
    }

    fn unexpected<T>(&mut self, expected: &str) -> PResult<T> {
        let span = self.span();
        let found = self.peek().map_or("end of input".to_string(), Tok::describe);
        self.fail(format!("expected {expected}, found {found}"), span)
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn resync(&mut self) {
        while let Some(t) = self.peek() {
            let dot = *t == Tok::Dot;
            self.pos += 1;
            if dot {
                break;
            }
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let span = self.span();
        match self.peek() {
            Some(Tok::At(d)) if d == "prefix" => {
                self.pos += 1;
                self.prefix_decl(span)?;
                self.expect(Tok::Dot)
            }
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("prefix") => {
                self.pos += 1;
                self.prefix_decl(span)
            }
            Some(Tok::Word(w)) if w == "rule" => {
                self.pos += 1;
                self.seen_rule = true;
                self.rule(span)
            }
            _ => self.unexpected("'rule' or a prefix declaration"),
        }
    }

    fn prefix_decl(&mut self, span: SourceSpan) -> PResult<()> {
        if self.seen_rule {
            return self.fail("prefix declarations must precede the first rule", span);
        }
        let name = match self.peek() {
            Some(Tok::PName(p, l)) if l.is_empty() => p.clone(),
            _ => return self.unexpected("a prefix name such as 'ex:'"),
        };
        self.pos += 1;
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Iri(ns)) if is_absolute_iri(&ns) => {
                self.pos += 1;
                self.prefixes.insert(name, ns);
                Ok(())
            }
            Some(Tok::Iri(ns)) => self.fail(format!("prefix IRI <{ns}> must be absolute"), span),
            _ => self.unexpected("an IRI reference"),
        }
    }

    fn rule(&mut self, start: SourceSpan) -> PResult<()> {
        let name = match self.peek().cloned() {
            Some(Tok::Str(s)) if !s.is_empty() => s,
            _ => return self.unexpected("a quoted rule name"),
        };
        self.pos += 1;
        self.expect(Tok::Colon)?;
        let mut body = vec![self.atom()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            body.push(self.atom()?);
        }
        self.expect(Tok::Arrow)?;
        let head_span = self.span();
        if !matches!(self.peek(), Some(Tok::PName(..) | Tok::Iri(_))) {
            return self.unexpected("a head atom");
        }
        let head = self.atom()?;
        if self.peek() == Some(&Tok::Comma) {
            let span = self.span();
            return self.fail(
                format!("rule \"{name}\": the head must be a single atom"),
                span,
            );
        }
        self.expect(Tok::Dot)?;

        let rule = HornRule { name, body, head };
        let unbound = rule.unbound_head_vars();
        if let Some(v) = unbound.first() {
            let msg = format!(
                "unsafe rule \"{}\": head variable {v} does not occur in the body",
                rule.name
            );
            return self.fail(msg, head_span);
        }
        if self.rules.iter().any(|r| r.name == rule.name) {
            return self.fail(format!("duplicate rule name \"{}\"", rule.name), start);
        }
        self.rules.push(rule);
        self.spans.push(start);
        Ok(())
    }

    fn name(&mut self) -> PResult<Term> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::PName(prefix, local)) => {
                self.pos += 1;
                match self.prefixes.get(&prefix) {
                    Some(ns) => Ok(Term::iri(format!("{ns}{local}"))),
                    None => self.fail(format!("unknown prefix '{prefix}:'"), span),
                }
            }
            Some(Tok::Iri(iri)) if is_absolute_iri(&iri) => {
                self.pos += 1;
                Ok(Term::iri(iri))
            }
            Some(Tok::Iri(iri)) => self.fail(format!("relative IRI <{iri}> in a rule"), span),
            _ => self.unexpected("a class or property name"),
        }
    }

    fn var(&mut self) -> PResult<Var> {
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Var(v))
            }
            _ => self.unexpected("a variable such as ?x"),
        }
    }

    fn atom(&mut self) -> PResult<Atom<Term>> {
        let term = self.name()?;
        self.expect(Tok::LParen)?;
        let first = self.var()?;
        let atom = if self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            let second = self.var()?;
            Atom::Property {
                property: term,
                subject: first,
                object: second,
            }
        } else {
            Atom::Class {
                class: term,
                var: first,
            }
        };
        self.expect(Tok::RParen)?;
        Ok(atom)
    }
}
