//! Term dictionary: interns lexical terms into dense integer handles.

use std::collections::HashMap;
use std::fmt;

use super::StoreError;

/// Dense handle for an interned term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermId(u32);

impl TermId {
    pub(crate) const MIN: TermId = TermId(0);
    pub(crate) const MAX: TermId = TermId(u32::MAX);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Rebuilds a handle from a raw index. Only meaningful for indices
    /// previously handed out by the same dictionary.
    pub fn from_index(index: usize) -> Self {
        TermId(u32::try_from(index).expect("term index exceeds u32"))
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Iri,
    BlankNode,
    Literal,
}

/// Syntactic flavour of a literal. Kept only so literals round-trip through
/// serialization unchanged; no rule ever looks at it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiteralKind {
    String,
    Integer,
    Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// Absolute IRI, fully expanded.
    Iri(String),
    /// Blank node label. The parser skolemizes these away, so they only
    /// show up when callers build terms by hand.
    BlankNode(String),
    Literal { lexical: String, kind: LiteralKind },
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Self {
        Term::Iri(iri.into())
    }

    pub fn string(lexical: impl Into<String>) -> Self {
        Term::Literal {
            lexical: lexical.into(),
            kind: LiteralKind::String,
        }
    }

    pub fn kind(&self) -> TermKind {
        match self {
            Term::Iri(_) => TermKind::Iri,
            Term::BlankNode(_) => TermKind::BlankNode,
            Term::Literal { .. } => TermKind::Literal,
        }
    }

    pub fn lexical(&self) -> &str {
        match self {
            Term::Iri(s) | Term::BlankNode(s) => s,
            Term::Literal { lexical, .. } => lexical,
        }
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::BlankNode(label) => write!(f, "_:{label}"),
            Term::Literal {
                lexical,
                kind: LiteralKind::String,
            } => write!(f, "{lexical:?}"),
            Term::Literal { lexical, .. } => f.write_str(lexical),
        }
    }
}

/// Returns true if `iri` starts with a URI scheme (`scheme:`) and contains
/// no characters that are illegal inside `<...>`.
pub fn is_absolute_iri(iri: &str) -> bool {
    let Some(colon) = iri.find(':') else {
        return false;
    };
    let scheme = &iri[..colon];
    let mut chars = scheme.chars();
    let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    scheme_ok
        && !iri
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

/// Bidirectional map between terms and their ids.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, term: &Term) -> Result<TermId, StoreError> {
        if let Some(&id) = self.ids.get(term) {
            return Ok(id);
        }
        match term {
            Term::Iri(iri) if !is_absolute_iri(iri) => {
                return Err(StoreError::MalformedIri(iri.clone()))
            }
            Term::BlankNode(label) if label.is_empty() => return Err(StoreError::EmptyLexical),
            _ => {}
        }
        let id = TermId::from_index(self.terms.len());
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        Ok(id)
    }

    pub fn intern_iri(&mut self, iri: &str) -> Result<TermId, StoreError> {
        self.intern(&Term::iri(iri))
    }

    pub fn get(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub fn get_iri(&self, iri: &str) -> Option<TermId> {
        self.get(&Term::iri(iri))
    }

    /// Panics on an id this dictionary never issued.
    pub fn resolve(&self, id: TermId) -> &Term {
        &self.terms[id.index()]
    }

    pub fn try_resolve(&self, id: TermId) -> Option<&Term> {
        self.terms.get(id.index())
    }

    pub fn is_literal(&self, id: TermId) -> bool {
        self.terms.get(id.index()).is_some_and(Term::is_literal)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermId, &Term)> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| (TermId::from_index(i), t))
    }
}
