//! Recursive-descent reader for the Turtle subset.

use std::collections::{BTreeMap, HashMap};

use super::lexer::{tokenize, Tok, Token};
use super::recognize::recognize;
use super::{Diagnostic, OntologyDocument, ParseFailure, SourceSpan, TermTriple};
use crate::store::{is_absolute_iri, LiteralKind, Term};
use crate::vocab;

/// Context a document is parsed in.
#[derive(Debug, Clone, Default)]
pub struct TurtleOptions {
    /// Prefixes visible before the first `@prefix` line.
    pub prefixes: BTreeMap<String, String>,
    pub base: Option<String>,
    /// Lowest skolem counter to hand out, so several documents loaded into
    /// one store get disjoint blank nodes.
    pub skolem_offset: u64,
}

pub fn parse_turtle(text: &str) -> Result<OntologyDocument, ParseFailure> {
    parse_turtle_with(text, &TurtleOptions::default())
}

pub fn parse_turtle_with(
    text: &str,
    options: &TurtleOptions,
) -> Result<OntologyDocument, ParseFailure> {
    let (tokens, mut diagnostics) = tokenize(text);
    let next_skolem = options.skolem_offset.max(max_skolem_in(text).map_or(0, |n| n + 1));
    let mut p = Parser {
        tokens,
        pos: 0,
        prefixes: options.prefixes.clone(),
        base: options.base.clone(),
        diags: Vec::new(),
        triples: Vec::new(),
        spans: Vec::new(),
        labels: HashMap::new(),
        next_skolem,
    };
    while p.pos < p.tokens.len() {
        let mark = p.triples.len();
        if p.statement().is_err() {
            p.triples.truncate(mark);
            p.spans.truncate(mark);
            p.resync();
        }
    }
    diagnostics.append(&mut p.diags);

    let recognized = recognize(&p.triples, &p.spans);
    diagnostics.extend(recognized.diagnostics);
    if diagnostics.iter().any(Diagnostic::is_error) {
        diagnostics.sort_by_key(|d| d.span);
        return Err(ParseFailure { diagnostics });
    }
    Ok(OntologyDocument {
        prefixes: p.prefixes,
        base: p.base,
        triples: p.triples,
        triple_spans: p.spans,
        axioms: recognized.axioms,
        axiom_spans: recognized.axiom_spans,
        facts: recognized.facts,
        warnings: diagnostics,
        next_skolem: p.next_skolem,
    })
}

/// Parses a single term (`ex:x`, `<iri>`, a literal, or `a`).
pub fn parse_term(text: &str, prefixes: &BTreeMap<String, String>) -> Result<Term, Vec<Diagnostic>> {
    let mut p = Parser::for_terms(text, prefixes)?;
    let t = p.term_in_command(true);
    p.finish(t)
}

/// Parses `s p o` with an optional trailing `.`.
pub fn parse_term_triple(
    text: &str,
    prefixes: &BTreeMap<String, String>,
) -> Result<TermTriple, Vec<Diagnostic>> {
    let mut p = Parser::for_terms(text, prefixes)?;
    let t = (|| {
        let s = p.term_in_command(false)?;
        let pr = p.term_in_command(false)?;
        let o = p.term_in_command(true)?;
        if p.peek() == Some(&Tok::Dot) {
            p.pos += 1;
        }
        Ok(TermTriple::new(s, pr, o))
    })();
    p.finish(t)
}

fn max_skolem_in(text: &str) -> Option<u64> {
    text.match_indices(vocab::SKOLEM_PREFIX)
        .filter_map(|(i, m)| {
            let digits: String = text[i + m.len()..]
                .chars()
                .take_while(char::is_ascii_digit)
                .collect();
            digits.parse().ok()
        })
        .max()
}

type PResult<T> = Result<T, ()>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: BTreeMap<String, String>,
    base: Option<String>,
    diags: Vec<Diagnostic>,
    triples: Vec<TermTriple>,
    spans: Vec<SourceSpan>,
    labels: HashMap<String, Term>,
    next_skolem: u64,
}

impl Parser {
    fn for_terms(text: &str, prefixes: &BTreeMap<String, String>) -> Result<Self, Vec<Diagnostic>> {
        let (tokens, diags) = tokenize(text);
        if !diags.is_empty() {
            return Err(diags);
        }
        Ok(Self {
            tokens,
            pos: 0,
            prefixes: prefixes.clone(),
            base: None,
            diags: Vec::new(),
            triples: Vec::new(),
            spans: Vec::new(),
            labels: HashMap::new(),
            next_skolem: 0,
        })
    }

    fn finish<T>(mut self, value: PResult<T>) -> Result<T, Vec<Diagnostic>> {
        if value.is_ok() && self.pos < self.tokens.len() {
            let t = &self.tokens[self.pos];
            let msg = format!("unexpected {} after the end of the input", t.tok.describe());
            self.diags.push(Diagnostic::error(msg, t.span));
        }
        match value {
            Ok(v) if self.diags.is_empty() => Ok(v),
            _ => Err(self.diags),
        }
    }

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

    /// Skips past the next `.` (or to the end).
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
        match self.peek() {
            Some(Tok::At(d)) if d == "prefix" => {
                self.pos += 1;
                self.prefix_decl()?;
                self.expect(Tok::Dot)
            }
            Some(Tok::At(d)) if d == "base" => {
                self.pos += 1;
                self.base_decl()?;
                self.expect(Tok::Dot)
            }
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("prefix") => {
                self.pos += 1;
                self.prefix_decl()
            }
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("base") => {
                self.pos += 1;
                self.base_decl()
            }
            _ => {
                self.triples_block()?;
                self.expect(Tok::Dot)
            }
        }
    }

    fn prefix_decl(&mut self) -> PResult<()> {
        let name = match self.peek() {
            Some(Tok::PName(p, l)) if l.is_empty() => p.clone(),
            _ => return self.unexpected("a prefix name such as 'ex:'"),
        };
        self.pos += 1;
        let ns = self.iri_ref()?;
        self.prefixes.insert(name, ns);
        Ok(())
    }

    fn base_decl(&mut self) -> PResult<()> {
        let base = self.iri_ref()?;
        self.base = Some(base);
        Ok(())
    }

    /// `<...>` resolved against the base.
    fn iri_ref(&mut self) -> PResult<String> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Iri(raw)) => {
                let raw = raw.clone();
                self.pos += 1;
                self.resolve(&raw, span)
            }
            _ => self.unexpected("an IRI reference"),
        }
    }

    fn resolve(&mut self, raw: &str, span: SourceSpan) -> PResult<String> {
        if is_absolute_iri(raw) {
            return Ok(raw.to_string());
        }
        match &self.base {
            Some(base) => Ok(join_base(base, raw)),
            None => self.fail(format!("relative IRI <{raw}> without @base"), span),
        }
    }

    fn fresh(&mut self) -> Term {
        let t = Term::iri(vocab::skolem_iri(self.next_skolem));
        self.next_skolem += 1;
        t
    }

    fn emit(&mut self, s: Term, p: Term, o: Term, span: SourceSpan) {
        self.triples.push(TermTriple::new(s, p, o));
        self.spans.push(span);
    }

    fn triples_block(&mut self) -> PResult<()> {
        if self.peek() == Some(&Tok::LBracket) {
            let subject = self.blank_property_list()?;
            if self.peek() == Some(&Tok::Dot) {
                return Ok(());
            }
            return self.predicate_object_list(&subject);
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> PResult<Term> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Iri(_) | Tok::PName(..)) => self.iri(),
            Some(Tok::Blank(label)) => {
                self.pos += 1;
                Ok(self.labelled(&label))
            }
            Some(Tok::LParen) => self.collection(),
            Some(Tok::Str(_) | Tok::Integer(_) | Tok::Decimal(_)) => {
                self.fail("a literal cannot be a subject", span)
            }
            _ => self.unexpected("a subject"),
        }
    }

    fn labelled(&mut self, label: &str) -> Term {
        if let Some(t) = self.labels.get(label) {
            return t.clone();
        }
        let t = self.fresh();
        self.labels.insert(label.to_string(), t.clone());
        t
    }

    fn iri(&mut self) -> PResult<Term> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Iri(raw)) => {
                self.pos += 1;
                Ok(Term::iri(self.resolve(&raw, span)?))
            }
            Some(Tok::PName(prefix, local)) => {
                self.pos += 1;
                match self.prefixes.get(&prefix) {
                    Some(ns) => Ok(Term::iri(format!("{ns}{local}"))),
                    None => self.fail(format!("unknown prefix '{prefix}:'"), span),
                }
            }
            _ => self.unexpected("an IRI"),
        }
    }

    fn predicate(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(Tok::Word(w)) if w == "a" => {
                self.pos += 1;
                Ok(Term::iri(vocab::RDF_TYPE))
            }
            Some(Tok::Iri(_) | Tok::PName(..)) => self.iri(),
            _ => self.unexpected("a predicate"),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> PResult<()> {
        loop {
            let span = self.span();
            let predicate = self.predicate()?;
            loop {
                let object_span = self.span();
                let object = self.object()?;
                let span = SourceSpan::new(
                    span.line,
                    span.column,
                    if object_span.line == span.line {
                        object_span.column + object_span.length - span.column
                    } else {
                        span.length
                    },
                );
                self.emit(subject.clone(), predicate.clone(), object, span);
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if self.peek() != Some(&Tok::Semi) {
                return Ok(());
            }
            while self.peek() == Some(&Tok::Semi) {
                self.pos += 1;
            }
            // A trailing `;` before the terminator is allowed.
            if matches!(self.peek(), Some(Tok::Dot | Tok::RBracket) | None) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> PResult<Term> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Iri(_) | Tok::PName(..)) => self.iri(),
            Some(Tok::Blank(label)) => {
                self.pos += 1;
                Ok(self.labelled(&label))
            }
            Some(Tok::LBracket) => self.blank_property_list(),
            Some(Tok::LParen) => self.collection(),
            Some(Tok::Str(s)) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::At(_)) => {
                        let span = self.span();
                        self.fail("language-tagged literals are not supported", span)
                    }
                    Some(Tok::Carets) => {
                        let span = self.span();
                        self.fail("datatyped literals are not supported", span)
                    }
                    _ => Ok(Term::Literal {
                        lexical: s,
                        kind: LiteralKind::String,
                    }),
                }
            }
            Some(Tok::Integer(n)) => {
                self.pos += 1;
                Ok(Term::Literal {
                    lexical: n,
                    kind: LiteralKind::Integer,
                })
            }
            Some(Tok::Decimal(n)) => {
                self.pos += 1;
                Ok(Term::Literal {
                    lexical: n,
                    kind: LiteralKind::Decimal,
                })
            }
            Some(Tok::Word(w)) if w == "true" || w == "false" => {
                self.fail("boolean literals are not supported", span)
            }
            _ => self.unexpected("an object"),
        }
    }

    fn blank_property_list(&mut self) -> PResult<Term> {
        self.expect(Tok::LBracket)?;
        let node = self.fresh();
        if self.peek() != Some(&Tok::RBracket) {
            self.predicate_object_list(&node)?;
        }
        self.expect(Tok::RBracket)?;
        Ok(node)
    }

    fn collection(&mut self) -> PResult<Term> {
        let span = self.span();
        self.expect(Tok::LParen)?;
        let mut items = Vec::new();
        while self.peek() != Some(&Tok::RParen) {
            if self.peek().is_none() {
                return self.unexpected("')'");
            }
            items.push(self.object()?);
        }
        self.pos += 1;
        let nil = Term::iri(vocab::RDF_NIL);
        if items.is_empty() {
            return Ok(nil);
        }
        let cells: Vec<Term> = items.iter().map(|_| self.fresh()).collect();
        for (i, item) in items.into_iter().enumerate() {
            self.emit(cells[i].clone(), Term::iri(vocab::RDF_FIRST), item, span);
            let rest = cells.get(i + 1).cloned().unwrap_or_else(|| nil.clone());
            self.emit(cells[i].clone(), Term::iri(vocab::RDF_REST), rest, span);
        }
        Ok(cells[0].clone())
    }

    /// A term on a command line: IRIs, prefixed names, literals, and `a` in
    /// predicate position.
    fn term_in_command(&mut self, allow_literal: bool) -> PResult<Term> {
        match self.peek().cloned() {
            Some(Tok::Word(w)) if w == "a" => {
                self.pos += 1;
                Ok(Term::iri(vocab::RDF_TYPE))
            }
            Some(Tok::Str(_) | Tok::Integer(_) | Tok::Decimal(_)) if allow_literal => self.object(),
            Some(Tok::Iri(_) | Tok::PName(..)) => self.iri(),
            _ => self.unexpected("an IRI or prefixed name"),
        }
    }
}

fn join_base(base: &str, relative: &str) -> String {
    if relative.is_empty() {
        return base.to_string();
    }
    if relative.starts_with('#') || base.ends_with('/') || base.ends_with('#') {
        return format!("{base}{relative}");
    }
    match base.rfind('/') {
        Some(i) if i > base.find("//").map_or(0, |j| j + 1) => {
            format!("{}{relative}", &base[..=i])
        }
        _ => format!("{base}/{relative}"),
    }
}
