//! Loading ontology and rule files into a materialized knowledge base.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use capakb::incremental::{KbError, KnowledgeBase};
use capakb::model::{validate, Location};
use capakb::parser::{
    parse_rules_with, parse_term, parse_term_triple, parse_turtle, parse_turtle_with, Diagnostic,
    OntologyDocument, RuleDocument, TurtleOptions,
};
use capakb::query::CapabilityVocabulary;
use capakb::reasoner::{MaterializationStats, ReasonerConfig};
use capakb::store::{is_absolute_iri, Term, TermId, Triple};
use capakb::vocab;

use crate::error::CliError;
use crate::output::{Format, Printer};

#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub ontology_paths: Vec<PathBuf>,
    pub rules_paths: Vec<PathBuf>,
    /// As typed: a prefixed name, `<iri>` or bare absolute IRI.
    pub capability_root: String,
    pub iteration_cap: usize,
    pub output_format: Format,
    /// File of `@prefix` declarations visible to every input and command.
    pub prefix_map: Option<PathBuf>,
}

impl SessionConfig {
    /// Splits positional `paths` into ontologies and rule files by extension.
    pub fn with_paths(mut self, paths: &[PathBuf]) -> Self {
        for p in paths {
            if p.extension().is_some_and(|e| e == "rules") {
                self.rules_paths.push(p.clone());
            } else {
                self.ontology_paths.push(p.clone());
            }
        }
        self
    }
}

/// A diagnostic and the file it came from.
#[derive(Debug, Clone)]
pub struct FileDiagnostic {
    pub path: PathBuf,
    pub diagnostic: Diagnostic,
}

/// Parsed inputs, before interning.
#[derive(Debug, Default)]
pub struct Sources {
    pub documents: Vec<OntologyDocument>,
    pub rules: Vec<RuleDocument>,
    pub prefixes: BTreeMap<String, String>,
    pub diagnostics: Vec<FileDiagnostic>,
}

impl Sources {
    pub fn error_count(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.diagnostic.is_error()).count()
    }

    pub fn print_diagnostics(&self, printer: &Printer, w: &mut dyn Write) -> Result<(), CliError> {
        for d in &self.diagnostics {
            printer.diagnostic(w, Some(&d.path), &d.diagnostic)?;
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn base_prefixes() -> BTreeMap<String, String> {
    [("rdf", vocab::RDF_NS), ("rdfs", vocab::RDFS_NS), ("owl", vocab::OWL_NS)]
        .into_iter()
        .map(|(p, ns)| (p.to_string(), ns.to_string()))
        .collect()
}

/// Reads and parses every input. I/O failures abort; parse and validation
/// problems are collected as diagnostics.
pub fn load_sources(config: &SessionConfig) -> Result<Sources, CliError> {
    let mut sources = Sources {
        prefixes: base_prefixes(),
        ..Sources::default()
    };
    if let Some(path) = &config.prefix_map {
        match parse_turtle(&read(path)?) {
            Ok(doc) => sources.prefixes.extend(doc.prefixes),
            Err(e) => sources.diagnostics.extend(e.diagnostics.into_iter().map(|diagnostic| FileDiagnostic {
                path: path.clone(),
                diagnostic,
            })),
        }
    }
    let shared = sources.prefixes.clone();

    let mut axiom_spans = Vec::new();
    let mut next_skolem = 0;
    for path in &config.ontology_paths {
        let options = TurtleOptions {
            prefixes: shared.clone(),
            base: None,
            skolem_offset: next_skolem,
        };
        let diagnostics = match parse_turtle_with(&read(path)?, &options) {
            Ok(mut doc) => {
                next_skolem = doc.next_skolem;
                sources.prefixes.extend(doc.prefixes.clone());
                axiom_spans.extend(doc.axiom_spans.iter().map(|s| (path.clone(), *s)));
                let warnings = std::mem::take(&mut doc.warnings);
                sources.documents.push(doc);
                warnings
            }
            Err(e) => e.diagnostics,
        };
        sources.diagnostics.extend(diagnostics.into_iter().map(|diagnostic| FileDiagnostic {
            path: path.clone(),
            diagnostic,
        }));
    }

    let mut rule_spans = Vec::new();
    for path in &config.rules_paths {
        match parse_rules_with(&read(path)?, &shared) {
            Ok(doc) => {
                sources.prefixes.extend(doc.prefixes.clone());
                rule_spans.extend(doc.rule_spans.iter().map(|s| (path.clone(), *s)));
                sources.rules.push(doc);
            }
            Err(e) => sources.diagnostics.extend(e.diagnostics.into_iter().map(|diagnostic| FileDiagnostic {
                path: path.clone(),
                diagnostic,
            })),
        }
    }

    // Fragment checks over everything that parsed.
    let axioms: Vec<_> = sources.documents.iter().flat_map(|d| d.axioms.iter().cloned()).collect();
    let rules: Vec<_> = sources.rules.iter().flat_map(|d| d.rules.iter().cloned()).collect();
    for d in validate(&axioms, &rules) {
        let (path, span) = match d.location {
            Location::Axiom(i) => axiom_spans[i].clone(),
            Location::Rule(i) => rule_spans[i].clone(),
        };
        sources.diagnostics.push(FileDiagnostic {
            path,
            diagnostic: Diagnostic::error(d.message, span),
        });
    }
    Ok(sources)
}

pub struct Session {
    pub kb: KnowledgeBase,
    pub printer: Printer,
    pub vocabulary: CapabilityVocabulary,
    pub stats: MaterializationStats,
}

impl Session {
    /// Loads and materializes. Warnings go to `diag`; any error-severity
    /// diagnostic aborts.
    pub fn open(config: &SessionConfig, diag: &mut dyn Write) -> Result<Self, CliError> {
        let sources = load_sources(config)?;
        let printer = Printer::new(config.output_format, sources.prefixes.clone());
        sources.print_diagnostics(&printer, diag)?;
        if sources.error_count() > 0 {
            return Err(CliError::Diagnostics(sources.error_count()));
        }
        let root = resolve_text(&config.capability_root, &sources.prefixes)?;
        let Term::Iri(root) = root else {
            return Err(CliError::Invalid(format!(
                "capability root {} is not an IRI",
                config.capability_root
            )));
        };
        let rules: Vec<_> = sources.rules.into_iter().flat_map(|d| d.rules).collect();
        let reasoner = ReasonerConfig {
            iteration_cap: config.iteration_cap,
        };
        let (kb, stats) =
            KnowledgeBase::from_documents(&sources.documents, &rules, reasoner).map_err(|e| match e {
                KbError::Reasoner(e) => CliError::IterationCap(e),
                other => CliError::Invalid(other.to_string()),
            })?;
        Ok(Self {
            kb,
            printer,
            vocabulary: CapabilityVocabulary {
                capability_root: root,
                ..CapabilityVocabulary::default()
            },
            stats,
        })
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.printer.prefixes
    }

    /// Resolves a command-line term to an id already in the store.
    pub fn lookup(&self, text: &str) -> Result<TermId, CliError> {
        let term = resolve_text(text, self.prefixes())?;
        self.kb
            .store()
            .lookup(&term)
            .ok_or_else(|| CliError::UnknownTerm(text.to_string()))
    }

    /// Resolves `s p o` against the store; every term must be known.
    pub fn lookup_triple(&self, text: &str) -> Result<Triple, CliError> {
        let t = parse_term_triple(text, self.prefixes()).map_err(diagnostics_error)?;
        let find = |term: &Term| {
            self.kb
                .store()
                .lookup(term)
                .ok_or_else(|| CliError::UnknownTerm(self.printer.text_term(term)))
        };
        Ok(Triple::new(find(&t.s)?, find(&t.p)?, find(&t.o)?))
    }

    /// Parses `s p o`, interning new terms.
    pub fn intern_triple(&mut self, text: &str) -> Result<Triple, CliError> {
        let t = parse_term_triple(text, self.prefixes()).map_err(diagnostics_error)?;
        if t.s.is_literal() {
            return Err(CliError::Invalid("a literal cannot be a subject".into()));
        }
        if t.p.as_iri().is_none() {
            return Err(CliError::Invalid("the predicate must be an IRI".into()));
        }
        let mut intern = |term: &Term| self.kb.intern(term).map_err(|e| CliError::Invalid(e.to_string()));
        Ok(Triple::new(intern(&t.s)?, intern(&t.p)?, intern(&t.o)?))
    }

    /// Classes at or below the capability root.
    pub fn capability_classes(&self) -> BTreeSet<TermId> {
        let store = self.kb.store();
        let Some(root) = store.lookup_iri(&self.vocabulary.capability_root) else {
            return BTreeSet::new();
        };
        let sco = store.vocabulary().sub_class_of;
        // Subclass transitivity is materialized, so one hop suffices.
        let mut out: BTreeSet<TermId> = store
            .matching(capakb::store::Pattern::new(None, Some(sco), Some(root)))
            .map(|t| t.s)
            .collect();
        out.insert(root);
        out
    }
}

fn diagnostics_error(diags: Vec<Diagnostic>) -> CliError {
    let msgs: Vec<String> = diags
        .iter()
        .filter(|d| d.is_error())
        .map(|d| format!("{}: {}", d.span, d.message))
        .collect();
    CliError::Invalid(msgs.join("; "))
}

/// A prefixed name, `<iri>`, literal, or bare absolute IRI.
pub fn resolve_text(text: &str, prefixes: &BTreeMap<String, String>) -> Result<Term, CliError> {
    match parse_term(text, prefixes) {
        Ok(t) => Ok(t),
        Err(_) if is_absolute_iri(text) && !text.contains(char::is_whitespace) => Ok(Term::iri(text)),
        Err(diags) => Err(diagnostics_error(diags)),
    }
}

