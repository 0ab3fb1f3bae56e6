//! Link discovery between RDF dumps: parsing, profiling, linkage rules,
//! blocking, link generation and enrichment.

pub mod dataset;
pub mod enrich;
pub mod fixtures;
pub mod io;
pub mod matcher;
pub mod rdf;
pub mod rule;

pub use dataset::{DataSource, Entity, Registry, SourceId};
pub use enrich::{inject_links, merge_metadata, EnrichmentReport, MergePolicy};
pub use io::{FormatTag, ParseError};
pub use matcher::{generate_links, Link, LinkSet, MatchOptions, Progress, ProgressTracker, Verdict};
pub use rdf::{Graph, Iri, PrefixMap, PropertyPath, Term, Triple};
pub use rule::{LinkageRule, MatchDecision};
