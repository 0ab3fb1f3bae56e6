//! Data sources: registration, entity extraction, path profiling, modeling
//! lint and property-pair suggestions.

mod lint;
mod paths;
mod suggest;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::FormatTag;
use crate::rdf::{vocab, Graph, Iri, Term};

pub use lint::{lint_source, LintCode, LintWarning};
pub use paths::{enumerate_property_paths, path_values, PathProfile, Terminal, MAX_PATH_DEPTH};
pub use suggest::{suggest_property_pairs, SuggestedPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("a source labelled {0:?} is already registered")]
    DuplicateLabel(String),
    #[error("path depth must be between 1 and {MAX_PATH_DEPTH}, got {0}")]
    InvalidDepth(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SourceId(String);

impl SourceId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A parsed dump registered for linking. The graph is shared and never
/// mutated after registration.
#[derive(Debug, Clone)]
pub struct DataSource {
    id: SourceId,
    label: String,
    graph: Arc<Graph>,
    format: FormatTag,
    entity_type: Option<Iri>,
}

impl DataSource {
    pub fn new(
        id: SourceId,
        label: impl Into<String>,
        graph: Graph,
        format: FormatTag,
        entity_type: Option<Iri>,
    ) -> Self {
        Self {
            id,
            label: label.into(),
            graph: Arc::new(graph),
            format,
            entity_type,
        }
    }

    pub fn id(&self) -> &SourceId {
        &self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn format(&self) -> FormatTag {
        self.format
    }

    pub fn entity_type(&self) -> Option<&Iri> {
        self.entity_type.as_ref()
    }

    pub fn entities(&self) -> Vec<Entity> {
        extract_entities(self)
    }
}

/// A record root inside one source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entity {
    pub root: Iri,
    pub source: SourceId,
}

impl Entity {
    pub fn term(&self) -> Term {
        Term::Iri(self.root.clone())
    }
}

/// Typed sources yield every subject of the entity type. Untyped sources
/// yield IRI subjects that never appear as the object of another subject.
/// Sorted by IRI.
pub fn extract_entities(source: &DataSource) -> Vec<Entity> {
    let graph = source.graph();
    let roots: BTreeSet<Iri> = match source.entity_type() {
        Some(class) => {
            let rdf_type = vocab::rdf_type();
            let class = Term::Iri(class.clone());
            graph
                .subjects()
                .filter(|s| graph.objects(s, &rdf_type).any(|o| *o == class))
                .filter_map(|s| s.as_iri().cloned())
                .collect()
        }
        None => {
            let mut referenced: BTreeSet<&Term> = BTreeSet::new();
            for s in graph.subjects() {
                for (_, o) in graph.outgoing(s) {
                    if o != s {
                        referenced.insert(o);
                    }
                }
            }
            graph
                .subjects()
                .filter(|s| !referenced.contains(s))
                .filter_map(|s| s.as_iri().cloned())
                .collect()
        }
    };
    roots
        .into_iter()
        .map(|root| Entity {
            root,
            source: source.id().clone(),
        })
        .collect()
}

/// Sources keyed by id with unique labels.
#[derive(Debug, Default)]
pub struct Registry {
    sources: Vec<Arc<DataSource>>,
    next_id: usize,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(
        &mut self,
        graph: Graph,
        label: &str,
        format: FormatTag,
        entity_type: Option<Iri>,
    ) -> Result<Arc<DataSource>, DatasetError> {
        if self.by_label(label).is_some() {
            return Err(DatasetError::DuplicateLabel(label.to_string()));
        }
        self.next_id += 1;
        let id = SourceId(format!("src-{}", self.next_id));
        let source = Arc::new(DataSource::new(id, label, graph, format, entity_type));
        self.sources.push(Arc::clone(&source));
        Ok(source)
    }

    pub fn get(&self, id: &SourceId) -> Option<Arc<DataSource>> {
        self.sources.iter().find(|s| s.id() == id).cloned()
    }

    pub fn by_label(&self, label: &str) -> Option<Arc<DataSource>> {
        self.sources.iter().find(|s| s.label() == label).cloned()
    }

    pub fn list(&self) -> &[Arc<DataSource>] {
        &self.sources
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    /// Sources, then the entity types found among their entities, then the
    /// property paths of those entities.
    pub fn tree(&self, max_depth: usize) -> Result<Vec<SourceNode>, DatasetError> {
        self.sources.iter().map(|s| source_node(s, max_depth)).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceNode {
    pub id: SourceId,
    pub label: String,
    pub format: FormatTag,
    pub triple_count: usize,
    pub entity_count: usize,
    pub entity_types: Vec<EntityTypeNode>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EntityTypeNode {
    /// Compact or full IRI; `None` groups untyped entities.
    pub entity_type: Option<String>,
    pub entity_count: usize,
    pub paths: Vec<String>,
}

fn source_node(source: &DataSource, max_depth: usize) -> Result<SourceNode, DatasetError> {
    let graph = source.graph();
    let prefixes = graph.prefixes();
    let entities = extract_entities(source);
    let rdf_type = vocab::rdf_type();
    let mut groups: std::collections::BTreeMap<Option<Iri>, Vec<Entity>> = Default::default();
    for e in &entities {
        let types: Vec<Iri> = graph
            .objects(&e.term(), &rdf_type)
            .filter_map(|t| t.as_iri().cloned())
            .collect();
        if types.is_empty() {
            groups.entry(None).or_default().push(e.clone());
        }
        for t in types {
            groups.entry(Some(t)).or_default().push(e.clone());
        }
    }
    let mut entity_types = Vec::new();
    for (class, members) in groups {
        let profiles = paths::profile_entities(graph, &members, max_depth)?;
        entity_types.push(EntityTypeNode {
            entity_type: class.as_ref().map(|c| prefixes.render(c)),
            entity_count: members.len(),
            paths: profiles.iter().map(|p| p.path.render(prefixes)).collect(),
        });
    }
    Ok(SourceNode {
        id: source.id().clone(),
        label: source.label().to_string(),
        format: source.format(),
        triple_count: graph.len(),
        entity_count: entities.len(),
        entity_types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::io::{parse_rdfxml, parse_turtle};

    fn qb_dataset() -> Iri {
        Iri::new("http://purl.org/linked-data/cube#DataSet").unwrap()
    }

    #[test]
    fn register_and_extract() {
        let mut reg = Registry::new();
        let g = parse_turtle(fixtures::INITIAL_TTL).unwrap();
        let src = reg
            .register(g.clone(), "initial", FormatTag::Turtle, Some(qb_dataset()))
            .unwrap();
        assert_eq!(src.entities().len(), 1);
        assert_eq!(reg.list().len(), 1);
        assert!(matches!(
            reg.register(g, "initial", FormatTag::Turtle, None),
            Err(DatasetError::DuplicateLabel(_))
        ));
        let empty = reg.register(Graph::new(), "x", FormatTag::NTriples, None).unwrap();
        assert!(empty.entities().is_empty());
        assert_ne!(src.id(), empty.id());
        assert_eq!(reg.get(empty.id()).unwrap().label(), "x");
    }

    #[test]
    fn untyped_roots_skip_referenced_nodes() {
        let g = parse_turtle(fixtures::INITIAL_TTL).unwrap();
        let src = DataSource::new(SourceId::new("s"), "initial", g, FormatTag::Turtle, None);
        let roots: Vec<String> = extract_entities(&src)
            .iter()
            .map(|e| e.root.as_str().to_string())
            .collect();
        assert_eq!(roots, [fixtures::PAPER_001]);
    }

    #[test]
    fn typed_extraction_on_dblp() {
        let g = parse_rdfxml(fixtures::DBLP_RDF).unwrap();
        let class = vocab::iri(vocab::AKT, "Book-Section-Reference");
        let src = DataSource::new(SourceId::new("d"), "dblp", g, FormatTag::RdfXml, Some(class));
        let roots: Vec<String> = extract_entities(&src)
            .iter()
            .map(|e| e.root.as_str().to_string())
            .collect();
        assert_eq!(roots, [fixtures::DBLP_DAVIES_WS11]);
    }

    #[test]
    fn self_reference_does_not_hide_a_root() {
        let g = parse_rdfxml(fixtures::ACM_RDF).unwrap();
        let src = DataSource::new(SourceId::new("a"), "acm", g, FormatTag::RdfXml, None);
        let roots: Vec<String> = extract_entities(&src)
            .iter()
            .map(|e| e.root.as_str().to_string())
            .collect();
        assert_eq!(roots, [fixtures::ACM_1060409]);
    }

    #[test]
    fn tree_listing() {
        let mut reg = Registry::new();
        reg.register(
            parse_turtle(fixtures::INITIAL_TTL).unwrap(),
            "initial",
            FormatTag::Turtle,
            Some(qb_dataset()),
        )
        .unwrap();
        let tree = reg.tree(2).unwrap();
        assert_eq!(tree.len(), 1);
        assert_eq!(tree[0].triple_count, 18);
        assert_eq!(tree[0].entity_types.len(), 1);
        assert!(tree[0].entity_types[0]
            .paths
            .contains(&"dcterms:creator/foaf:name".to_string()));
    }
}
