//! Readers and writers for RDF dumps.
//!
//! N-Triples output is canonical and byte-stable. Turtle output is grouped
//! by subject and equal to its input up to isomorphism. RDF/XML is read-only.

mod canonical;
mod ntriples;
mod rdfxml;
mod scanner;
mod turtle;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::Graph;

pub use canonical::canonical_relabel;
pub use ntriples::{parse_ntriples, serialize_ntriples};
pub use rdfxml::parse_rdfxml;
pub use turtle::{parse_turtle, serialize_turtle};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnsupportedConstruct(String),
}

/// A positioned parse failure. `line` and `column` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        let message = message.into();
        Self {
            kind: ParseErrorKind::Syntax,
            line: line.max(1),
            column: column.max(1),
            message: if message.is_empty() {
                "syntax error".into()
            } else {
                message
            },
        }
    }

    pub fn unsupported(line: usize, column: usize, name: impl Into<String>, why: &str) -> Self {
        let name = name.into();
        Self {
            message: format!("unsupported construct {name}: {why}"),
            kind: ParseErrorKind::UnsupportedConstruct(name),
            line: line.max(1),
            column: column.max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FormatTag {
    NTriples,
    Turtle,
    RdfXml,
}

impl FormatTag {
    pub fn from_extension(path: &str) -> Option<Self> {
        let ext = Path::new(path).extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "nt" => Some(FormatTag::NTriples),
            "ttl" | "turtle" => Some(FormatTag::Turtle),
            "rdf" | "xml" | "owl" => Some(FormatTag::RdfXml),
            _ => None,
        }
    }
}

impl fmt::Display for FormatTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormatTag::NTriples => "NTRIPLES",
            FormatTag::Turtle => "TURTLE",
            FormatTag::RdfXml => "RDFXML",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown RDF format {0:?}")]
pub struct UnknownFormat(pub String);

impl FromStr for FormatTag {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_', '/'], "").as_str() {
            "nt" | "ntriples" | "ntriple" => Ok(FormatTag::NTriples),
            "ttl" | "turtle" => Ok(FormatTag::Turtle),
            "rdfxml" | "xml" | "rdf" | "owl" => Ok(FormatTag::RdfXml),
            _ => Err(UnknownFormat(s.to_string())),
        }
    }
}

/// Extension wins; otherwise sniff the leading bytes. Empty content with an
/// unknown extension is an error.
pub fn detect_format(filename: &str, sniff: &[u8]) -> Result<FormatTag, UnknownFormat> {
    if let Some(tag) = FormatTag::from_extension(filename) {
        return Ok(tag);
    }
    let head = String::from_utf8_lossy(&sniff[..sniff.len().min(512)]);
    let mut head = head.trim_start_matches('\u{feff}').trim_start();
    while let Some(rest) = head.strip_prefix('#') {
        head = rest.split_once('\n').map_or("", |(_, after)| after).trim_start();
    }
    if head.is_empty() {
        return Err(UnknownFormat(filename.to_string()));
    }
    if head.starts_with("<?xml") || head.starts_with("<rdf:RDF") {
        Ok(FormatTag::RdfXml)
    } else if head.starts_with("@prefix")
        || head.starts_with("@base")
        || head.to_ascii_uppercase().starts_with("PREFIX")
    {
        Ok(FormatTag::Turtle)
    } else {
        Ok(FormatTag::NTriples)
    }
}

pub fn parse(text: &str, format: FormatTag) -> Result<Graph, ParseError> {
    match format {
        FormatTag::NTriples => parse_ntriples(text),
        FormatTag::Turtle => parse_turtle(text),
        FormatTag::RdfXml => parse_rdfxml(text),
    }
}
