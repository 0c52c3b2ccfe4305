//! RDF terms, triples, an indexed in-memory graph, triple pattern matching
//! and the binding-set algebra query evaluation rests on.

mod parser;

pub use parser::{parse_rdf_document, write_ntriples};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::vocab;

#[derive(Debug, Error, PartialEq)]
pub enum RdfError {
    #[error("literal is not allowed in subject position")]
    LiteralSubject,
    #[error("predicate must be an IRI, got {0}")]
    NonIriPredicate(String),
    #[error("IRI must be non-empty")]
    EmptyIri,
    #[error("language tag requires the rdf:langString datatype")]
    LangTagWithoutLangString,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An RDF term: IRI, blank node or literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    BlankNode(String),
    Literal {
        lexical: String,
        datatype: String,
        language: Option<String>,
    },
}

impl Term {
    pub fn iri(text: impl Into<String>) -> Term {
        Term::Iri(text.into())
    }

    pub fn typed_literal(lexical: impl Into<String>, datatype: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: datatype.into(),
            language: None,
        }
    }

    pub fn string_literal(lexical: impl Into<String>) -> Term {
        Term::typed_literal(lexical, vocab::XSD_STRING)
    }

    pub fn lang_literal(lexical: impl Into<String>, language: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::RDF_LANG_STRING.into(),
            language: Some(language.into()),
        }
    }

    pub fn double_literal(value: f64) -> Term {
        Term::typed_literal(format!("{value}"), vocab::XSD_DOUBLE)
    }

    pub fn boolean_literal(value: bool) -> Term {
        Term::typed_literal(if value { "true" } else { "false" }, vocab::XSD_BOOLEAN)
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    /// Validates term invariants (non-empty IRIs, language tag rules).
    pub fn validate(&self) -> Result<(), RdfError> {
        match self {
            Term::Iri(iri) if iri.is_empty() => Err(RdfError::EmptyIri),
            Term::Literal {
                language: Some(_),
                datatype,
                ..
            } if datatype != vocab::RDF_LANG_STRING => Err(RdfError::LangTagWithoutLangString),
            _ => Ok(()),
        }
    }

    /// N-Triples serialization of the term.
    pub fn to_ntriples(&self) -> String {
        match self {
            Term::Iri(iri) => format!("<{iri}>"),
            Term::BlankNode(label) => format!("_:{label}"),
            Term::Literal {
                lexical,
                datatype,
                language,
            } => {
                let escaped = escape_literal(lexical);
                if let Some(lang) = language {
                    format!("\"{escaped}\"@{lang}")
                } else if datatype == vocab::XSD_STRING {
                    format!("\"{escaped}\"")
                } else {
                    format!("\"{escaped}\"^^<{datatype}>")
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ntriples())
    }
}

pub(crate) fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out
}

/// Shared, cheaply clonable term handle. Bindings and triples of a loaded
/// graph share term allocations.
pub type TermRef = Arc<Term>;

/// An RDF statement. Subject is an IRI or blank node, predicate an IRI.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub subject: TermRef,
    pub predicate: TermRef,
    pub object: TermRef,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple, RdfError> {
        if subject.is_literal() {
            return Err(RdfError::LiteralSubject);
        }
        if !predicate.is_iri() {
            return Err(RdfError::NonIriPredicate(predicate.to_ntriples()));
        }
        subject.validate()?;
        predicate.validate()?;
        object.validate()?;
        Ok(Triple {
            subject: Arc::new(subject),
            predicate: Arc::new(predicate),
            object: Arc::new(object),
        })
    }
}

/// One position of a triple pattern: a concrete term or a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Term(Term),
    Variable(String),
}

impl PatternTerm {
    pub fn var(name: impl Into<String>) -> PatternTerm {
        PatternTerm::Variable(name.into())
    }

    fn as_term(&self) -> Option<&Term> {
        match self {
            PatternTerm::Term(t) => Some(t),
            PatternTerm::Variable(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: PatternTerm, object: PatternTerm) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    /// Variables occurring in the pattern, deduplicated.
    pub fn variables(&self) -> Vec<&str> {
        let mut vars = Vec::new();
        for pt in [&self.subject, &self.predicate, &self.object] {
            if let PatternTerm::Variable(name) = pt {
                if !vars.contains(&name.as_str()) {
                    vars.push(name.as_str());
                }
            }
        }
        vars
    }
}

/// A partial map from variable names to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Binding {
    map: BTreeMap<String, TermRef>,
}

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    pub fn get(&self, var: &str) -> Option<&TermRef> {
        self.map.get(var)
    }

    pub fn bind(&mut self, var: impl Into<String>, term: TermRef) {
        self.map.insert(var.into(), term);
    }

    pub fn contains(&self, var: &str) -> bool {
        self.map.contains_key(var)
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &TermRef)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Binding union; caller is responsible for compatibility.
    pub fn merged(&self, other: &Binding) -> Binding {
        let mut map = self.map.clone();
        for (k, v) in &other.map {
            map.insert(k.clone(), v.clone());
        }
        Binding { map }
    }
}

/// True iff every shared variable maps to the same term in both bindings.
pub fn compatible(a: &Binding, b: &Binding) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .all(|(var, term)| large.get(var).map_or(true, |other| other == term))
}

/// Ordered collection of bindings; order is only used for deterministic output.
pub type BindingSet = Vec<Binding>;

/// Join per the binding-set algebra: unions of all compatible pairs.
/// Uses a hash join over the shared variables, then verifies compatibility.
pub fn join_bindings(left: &BindingSet, right: &BindingSet) -> BindingSet {
    if left.is_empty() || right.is_empty() {
        return Vec::new();
    }
    let shared: Vec<String> = left[0]
        .domain()
        .filter(|v| right[0].contains(v))
        .map(str::to_owned)
        .collect();
    if shared.is_empty() {
        let mut out = Vec::with_capacity(left.len() * right.len());
        for l in left {
            for r in right {
                if compatible(l, r) {
                    out.push(l.merged(r));
                }
            }
        }
        return out;
    }
    let key_of = |b: &Binding| -> Option<Vec<TermRef>> {
        shared.iter().map(|v| b.get(v).cloned()).collect()
    };
    let mut table: HashMap<Vec<TermRef>, Vec<&Binding>> = HashMap::new();
    for r in right {
        if let Some(key) = key_of(r) {
            table.entry(key).or_default().push(r);
        } else {
            // Irregular domain; fall back to the nested loop for this side.
            return nested_loop_join(left, right);
        }
    }
    let mut out = Vec::new();
    for l in left {
        let Some(key) = key_of(l) else {
            return nested_loop_join(left, right);
        };
        if let Some(candidates) = table.get(&key) {
            for r in candidates {
                if compatible(l, r) {
                    out.push(l.merged(r));
                }
            }
        }
    }
    out
}

fn nested_loop_join(left: &BindingSet, right: &BindingSet) -> BindingSet {
    let mut out = Vec::new();
    for l in left {
        for r in right {
            if compatible(l, r) {
                out.push(l.merged(r));
            }
        }
    }
    out
}

/// In-memory RDF graph with set semantics and per-position hash indexes.
/// Read-only during query evaluation; writes happen in single-threaded bulk
/// loads.
#[derive(Debug, Default)]
pub struct Graph {
    triples: Vec<Triple>,
    seen: HashSet<Triple>,
    by_subject: HashMap<TermRef, Vec<usize>>,
    by_predicate: HashMap<TermRef, Vec<usize>>,
    by_object: HashMap<TermRef, Vec<usize>>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.seen.contains(triple)
    }

    /// Inserts a triple; duplicates leave the graph unchanged.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if !self.seen.insert(triple.clone()) {
            return false;
        }
        let idx = self.triples.len();
        self.by_subject
            .entry(triple.subject.clone())
            .or_default()
            .push(idx);
        self.by_predicate
            .entry(triple.predicate.clone())
            .or_default()
            .push(idx);
        self.by_object
            .entry(triple.object.clone())
            .or_default()
            .push(idx);
        self.triples.push(triple);
        true
    }

    pub fn insert_terms(
        &mut self,
        subject: Term,
        predicate: Term,
        object: Term,
    ) -> Result<bool, RdfError> {
        Ok(self.insert(Triple::new(subject, predicate, object)?))
    }

    /// All bindings µ with dom(µ) = var(pattern) and µ(pattern) in the graph.
    /// A fully concrete pattern yields one empty binding when present.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> BindingSet {
        let candidates = self.candidate_indices(pattern);
        let mut out = Vec::new();
        'next: for idx in candidates {
            let triple = &self.triples[idx];
            let mut binding = Binding::new();
            for (pt, term) in [
                (&pattern.subject, &triple.subject),
                (&pattern.predicate, &triple.predicate),
                (&pattern.object, &triple.object),
            ] {
                match pt {
                    PatternTerm::Term(expected) => {
                        if expected != term.as_ref() {
                            continue 'next;
                        }
                    }
                    PatternTerm::Variable(name) => match binding.get(name) {
                        Some(bound) if bound != term => continue 'next,
                        Some(_) => {}
                        None => binding.bind(name.clone(), term.clone()),
                    },
                }
            }
            out.push(binding);
        }
        out
    }

    /// Picks the most selective bound position, falling back to a full scan.
    fn candidate_indices(&self, pattern: &TriplePattern) -> Vec<usize> {
        let lookups: [(&PatternTerm, &HashMap<TermRef, Vec<usize>>); 3] = [
            (&pattern.subject, &self.by_subject),
            (&pattern.predicate, &self.by_predicate),
            (&pattern.object, &self.by_object),
        ];
        let mut best: Option<&Vec<usize>> = None;
        for (pt, index) in lookups {
            if let Some(term) = pt.as_term() {
                match index.get_key_value(&Arc::new(term.clone())) {
                    Some((_, ids)) => {
                        if best.map_or(true, |b| ids.len() < b.len()) {
                            best = Some(ids);
                        }
                    }
                    None => return Vec::new(),
                }
            }
        }
        match best {
            Some(ids) => ids.clone(),
            None => (0..self.triples.len()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Term {
        Term::iri(format!("http://example.org/{s}"))
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(iri(s), iri(p), iri(o)).unwrap()
    }

    #[test]
    fn insert_is_idempotent() {
        let mut g = Graph::new();
        assert!(g.insert(t("a", "p", "b")));
        assert_eq!(g.len(), 1);
        assert!(!g.insert(t("a", "p", "b")));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn literal_subject_rejected() {
        let lit = Term::typed_literal("1", vocab::XSD_INTEGER);
        assert!(Triple::new(iri("a"), iri("p"), lit.clone()).is_ok());
        assert_eq!(
            Triple::new(lit, iri("p"), iri("a")).unwrap_err(),
            RdfError::LiteralSubject
        );
    }

    #[test]
    fn match_single_and_none() {
        let mut g = Graph::new();
        g.insert(
            Triple::new(iri("r1"), Term::iri(vocab::RDF_TYPE), iri("Road")).unwrap(),
        );
        let hits = g.match_pattern(&TriplePattern::new(
            PatternTerm::var("x"),
            PatternTerm::Term(Term::iri(vocab::RDF_TYPE)),
            PatternTerm::Term(iri("Road")),
        ));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].get("x").unwrap().as_ref(), &iri("r1"));

        let misses = g.match_pattern(&TriplePattern::new(
            PatternTerm::var("x"),
            PatternTerm::Term(Term::iri(vocab::RDF_TYPE)),
            PatternTerm::Term(iri("Building")),
        ));
        assert!(misses.is_empty());
    }

    #[test]
    fn match_equals_linear_scan() {
        let mut g = Graph::new();
        for n in 0..3 {
            g.insert(
                Triple::new(
                    iri(&format!("r{n}")),
                    Term::iri(vocab::RDF_TYPE),
                    iri("Road"),
                )
                .unwrap(),
            );
        }
        g.insert(t("r0", "connectsTo", "r1"));
        let pattern = TriplePattern::new(
            PatternTerm::var("x"),
            PatternTerm::Term(Term::iri(vocab::RDF_TYPE)),
            PatternTerm::Term(iri("Road")),
        );
        let indexed = g.match_pattern(&pattern);
        // Brute-force oracle: scan every triple.
        let mut scanned = Vec::new();
        for triple in g.triples() {
            if triple.predicate.as_ref() == &Term::iri(vocab::RDF_TYPE)
                && triple.object.as_ref() == &iri("Road")
            {
                let mut b = Binding::new();
                b.bind("x", triple.subject.clone());
                scanned.push(b);
            }
        }
        assert_eq!(indexed.len(), 3);
        let mut a = indexed.clone();
        let mut b = scanned;
        a.sort_by_key(|m| format!("{:?}", m));
        b.sort_by_key(|m| format!("{:?}", m));
        assert_eq!(a, b);
    }

    #[test]
    fn concrete_pattern_yields_empty_binding() {
        let mut g = Graph::new();
        g.insert(t("a", "p", "b"));
        let hit = g.match_pattern(&TriplePattern::new(
            PatternTerm::Term(iri("a")),
            PatternTerm::Term(iri("p")),
            PatternTerm::Term(iri("b")),
        ));
        assert_eq!(hit.len(), 1);
        assert!(hit[0].is_empty());
    }

    #[test]
    fn repeated_variable_must_agree() {
        let mut g = Graph::new();
        g.insert(t("a", "p", "a"));
        g.insert(t("a", "p", "b"));
        let hits = g.match_pattern(&TriplePattern::new(
            PatternTerm::var("x"),
            PatternTerm::Term(iri("p")),
            PatternTerm::var("x"),
        ));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].get("x").unwrap().as_ref(), &iri("a"));
    }

    #[test]
    fn compatibility_rules() {
        let a1 = Arc::new(iri("a"));
        let b1 = Arc::new(iri("b"));
        let mut m1 = Binding::new();
        m1.bind("x", a1.clone());
        let mut m2 = Binding::new();
        m2.bind("y", b1.clone());
        assert!(compatible(&m1, &m2));

        let mut m3 = Binding::new();
        m3.bind("x", a1.clone());
        m3.bind("y", b1.clone());
        assert!(compatible(&m1, &m3));

        let mut m4 = Binding::new();
        m4.bind("x", b1);
        assert!(!compatible(&m1, &m4));
    }

    #[test]
    fn join_examples() {
        let a = Arc::new(iri("a"));
        let b = Arc::new(iri("b"));
        let mut mx = Binding::new();
        mx.bind("x", a.clone());
        let mut my = Binding::new();
        my.bind("y", b.clone());
        let joined = join_bindings(&vec![mx.clone()], &vec![my]);
        assert_eq!(joined.len(), 1);
        assert_eq!(joined[0].len(), 2);

        let mut conflict = Binding::new();
        conflict.bind("x", b);
        assert!(join_bindings(&vec![mx.clone()], &vec![conflict]).is_empty());

        // Identity element: join with a single empty binding.
        let joined = join_bindings(&vec![mx.clone()], &vec![Binding::new()]);
        assert_eq!(joined, vec![mx]);
    }

    #[test]
    fn join_matches_nested_loop_on_shared_var() {
        let terms: Vec<TermRef> = (0..4).map(|n| Arc::new(iri(&format!("t{n}")))).collect();
        let mut left = Vec::new();
        for t in &terms[..3] {
            let mut b = Binding::new();
            b.bind("x", t.clone());
            b.bind("l", terms[3].clone());
            left.push(b);
        }
        let mut right = Vec::new();
        for t in &terms[1..3] {
            let mut b = Binding::new();
            b.bind("x", t.clone());
            b.bind("r", terms[0].clone());
            right.push(b);
        }
        let joined = join_bindings(&left, &right);
        let oracle = nested_loop_join(&left, &right);
        assert_eq!(joined.len(), 2);
        assert_eq!(joined, oracle);
    }
}
