//! RDF data model: terms, triples, graphs, prefixes and property paths.

mod graph;
mod iso;
mod path;
mod prefix;
mod term;
pub mod vocab;

use thiserror::Error;

pub use graph::{Graph, Triple};
pub use iso::isomorphic;
pub use path::PropertyPath;
pub use prefix::{is_valid_prefix_label, PrefixMap};
pub(crate) use term::escape_string;
pub use term::{BlankNode, Iri, Literal, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfError {
    #[error("invalid IRI {0:?}")]
    InvalidIri(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankNode(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("literal {0} cannot be a subject")]
    LiteralSubject(String),
    #[error("unbound prefix {0:?}")]
    UnboundPrefix(String),
    #[error("{0:?} is not a prefixed name")]
    NotCompact(String),
    #[error("property path must have at least one step")]
    EmptyPath,
    #[error("malformed property path {0:?}")]
    InvalidPath(String),
}

/// Shorthand for [`PrefixMap::expand`].
pub fn expand(prefixes: &PrefixMap, compact: &str) -> Result<Iri, RdfError> {
    prefixes.expand(compact)
}

/// Shorthand for [`Graph::eval_path`].
pub fn eval_path(graph: &Graph, root: &Term, path: &PropertyPath) -> std::collections::BTreeSet<Term> {
    graph.eval_path(root, path)
}
