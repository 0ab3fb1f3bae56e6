use std::cmp::Ordering;
use std::fmt;

use super::RdfError;

/// An absolute IRI. Validation is syntactic only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        if is_valid_iri(&value) {
            Ok(Self(value))
        } else {
            Err(RdfError::InvalidIri(value))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// `scheme://authority/` prefix, when the IRI is hierarchical.
    pub fn authority_prefix(&self) -> Option<&str> {
        let rest_at = self.0.find("://")? + 3;
        let end = self.0[rest_at..]
            .find(['/', '#', '?'])
            .map(|i| rest_at + i)
            .unwrap_or(self.0.len());
        Some(&self.0[..end])
    }

    fn render_chars(&self) -> impl Iterator<Item = char> + '_ {
        std::iter::once('<').chain(self.0.chars()).chain(std::iter::once('>'))
    }
}

fn is_valid_iri(value: &str) -> bool {
    let Some(colon) = value.find(':') else {
        return false;
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
        return false;
    }
    !value.chars().any(|c| c.is_whitespace() || c == '<' || c == '>')
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl Ord for Iri {
    fn cmp(&self, other: &Self) -> Ordering {
        self.render_chars().cmp(other.render_chars())
    }
}

impl PartialOrd for Iri {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A literal value. Datatype and language tag are mutually exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    language: Option<String>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Self {
            lexical: lexical.into(),
            datatype: None,
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Self {
            lexical: lexical.into(),
            datatype: Some(datatype),
            language: None,
        }
    }

    pub fn lang(lexical: impl Into<String>, tag: &str) -> Result<Self, RdfError> {
        let valid = !tag.is_empty()
            && tag
                .split('-')
                .all(|part| !part.is_empty() && part.len() <= 8 && part.chars().all(|c| c.is_ascii_alphanumeric()))
            && tag.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if !valid {
            return Err(RdfError::InvalidLanguageTag(tag.to_string()));
        }
        Ok(Self {
            lexical: lexical.into(),
            datatype: None,
            language: Some(tag.to_ascii_lowercase()),
        })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    fn render_chars(&self) -> impl Iterator<Item = char> + '_ {
        let body = self.lexical.chars().flat_map(escape_char);
        let suffix: Box<dyn Iterator<Item = char> + '_> = match (&self.datatype, &self.language) {
            (Some(dt), _) => Box::new("^^".chars().chain(dt.render_chars())),
            (None, Some(lang)) => Box::new(std::iter::once('@').chain(lang.chars())),
            (None, None) => Box::new(std::iter::empty()),
        };
        std::iter::once('"')
            .chain(body)
            .chain(std::iter::once('"'))
            .chain(suffix)
    }
}

/// N-Triples string escaping for one character.
fn escape_char(c: char) -> EscapeIter {
    let s: String = match c {
        '"' => "\\\"".into(),
        '\\' => "\\\\".into(),
        '\n' => "\\n".into(),
        '\r' => "\\r".into(),
        '\t' => "\\t".into(),
        c if (c as u32) < 0x20 || c as u32 == 0x7f => format!("\\u{:04X}", c as u32),
        c => return EscapeIter::One(Some(c)),
    };
    EscapeIter::Many(s.chars().collect::<Vec<_>>().into_iter())
}

enum EscapeIter {
    One(Option<char>),
    Many(std::vec::IntoIter<char>),
}

impl Iterator for EscapeIter {
    type Item = char;
    fn next(&mut self) -> Option<char> {
        match self {
            EscapeIter::One(c) => c.take(),
            EscapeIter::Many(it) => it.next(),
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    s.chars().flat_map(escape_char).collect()
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.render_chars() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A blank node, labelled `[A-Za-z0-9_]+`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        if !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            Ok(Self(label))
        } else {
            Err(RdfError::InvalidBlankNode(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }

    fn render_chars(&self) -> impl Iterator<Item = char> + '_ {
        "_:".chars().chain(self.0.chars())
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// Any RDF term. Ordering follows the N-Triples rendering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
    BlankNode(BlankNode),
}

impl Term {
    pub fn iri(value: &str) -> Result<Self, RdfError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn literal(lexical: impl Into<String>) -> Self {
        Term::Literal(Literal::plain(lexical))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// IRIs and blank nodes.
    pub fn is_resource(&self) -> bool {
        !self.is_literal()
    }

    fn render_chars(&self) -> Box<dyn Iterator<Item = char> + '_> {
        match self {
            Term::Iri(iri) => Box::new(iri.render_chars()),
            Term::Literal(lit) => Box::new(lit.render_chars()),
            Term::BlankNode(b) => Box::new(b.render_chars()),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::Literal(lit) => lit.fmt(f),
            Term::BlankNode(b) => b.fmt(f),
        }
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.render_chars().cmp(other.render_chars())
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
