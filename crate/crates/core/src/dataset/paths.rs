use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{extract_entities, DataSource, DatasetError, Entity};
use crate::rdf::{Graph, PropertyPath, Term};

pub const MAX_PATH_DEPTH: usize = 4;
const SAMPLE_SIZE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Terminal {
    Literal,
    Resource,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathProfile {
    pub path: PropertyPath,
    /// Entities with at least one value on this path.
    pub frequency: usize,
    /// First few literal lexical forms in sorted order.
    pub sample_values: Vec<String>,
    pub terminal: Terminal,
}

#[derive(Default)]
struct PathStats {
    entities: BTreeSet<usize>,
    literals: BTreeSet<String>,
    has_literal: bool,
    has_resource: bool,
}

/// Every forward path of length `1..=max_depth` from the source's entities.
/// A predicate never repeats within one path; literals end a path.
pub fn enumerate_property_paths(source: &DataSource, max_depth: usize) -> Result<Vec<PathProfile>, DatasetError> {
    profile_entities(source.graph(), &extract_entities(source), max_depth)
}

pub(crate) fn profile_entities(
    graph: &Graph,
    entities: &[Entity],
    max_depth: usize,
) -> Result<Vec<PathProfile>, DatasetError> {
    let stats = collect(graph, entities, max_depth)?;
    Ok(stats
        .into_iter()
        .map(|(path, st)| PathProfile {
            path,
            frequency: st.entities.len(),
            sample_values: st.literals.into_iter().take(SAMPLE_SIZE).collect(),
            terminal: match (st.has_literal, st.has_resource) {
                (true, false) => Terminal::Literal,
                (false, true) => Terminal::Resource,
                _ => Terminal::Mixed,
            },
        })
        .collect())
}

/// All literal lexical forms reachable on each path, across every entity.
pub fn path_values(
    source: &DataSource,
    max_depth: usize,
) -> Result<BTreeMap<PropertyPath, BTreeSet<String>>, DatasetError> {
    let stats = collect(source.graph(), &extract_entities(source), max_depth)?;
    Ok(stats.into_iter().map(|(p, st)| (p, st.literals)).collect())
}

fn collect(
    graph: &Graph,
    entities: &[Entity],
    max_depth: usize,
) -> Result<BTreeMap<PropertyPath, PathStats>, DatasetError> {
    if !(1..=MAX_PATH_DEPTH).contains(&max_depth) {
        return Err(DatasetError::InvalidDepth(max_depth));
    }
    let mut stats: BTreeMap<PropertyPath, PathStats> = BTreeMap::new();
    for (index, entity) in entities.iter().enumerate() {
        walk(graph, &entity.term(), None, index, max_depth, &mut stats);
    }
    Ok(stats)
}

fn walk(
    graph: &Graph,
    node: &Term,
    prefix: Option<&PropertyPath>,
    entity: usize,
    max_depth: usize,
    stats: &mut BTreeMap<PropertyPath, PathStats>,
) {
    let mut by_predicate: BTreeMap<_, Vec<&Term>> = BTreeMap::new();
    for (p, o) in graph.outgoing(node) {
        if prefix.is_some_and(|pre| pre.contains(p)) {
            continue;
        }
        by_predicate.entry(p).or_default().push(o);
    }
    for (p, objects) in by_predicate {
        let path = match prefix {
            Some(pre) => pre.extended(p.clone()),
            None => PropertyPath::single(p.clone()),
        };
        let entry = stats.entry(path.clone()).or_default();
        entry.entities.insert(entity);
        for o in &objects {
            match o {
                Term::Literal(lit) => {
                    entry.has_literal = true;
                    entry.literals.insert(lit.lexical().to_string());
                }
                _ => entry.has_resource = true,
            }
        }
        if path.len() < max_depth {
            for o in objects.into_iter().filter(|o| o.is_resource()) {
                walk(graph, o, Some(&path), entity, max_depth, stats);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SourceId;
    use crate::fixtures;
    use crate::io::{parse_rdfxml, FormatTag};
    use crate::rdf::{vocab, Iri, PrefixMap};

    fn source(text: &str, class: Option<Iri>) -> DataSource {
        DataSource::new(
            SourceId::new("t"),
            "t",
            parse_rdfxml(text).unwrap(),
            FormatTag::RdfXml,
            class,
        )
    }

    fn find<'a>(profiles: &'a [PathProfile], rendered: &str, prefixes: &PrefixMap) -> &'a PathProfile {
        profiles
            .iter()
            .find(|p| p.path.render(prefixes) == rendered)
            .unwrap_or_else(|| panic!("missing path {rendered}"))
    }

    #[test]
    fn dblp_author_names() {
        let src = source(
            fixtures::DBLP_RDF,
            Some(vocab::iri(vocab::AKT, "Book-Section-Reference")),
        );
        let profiles = enumerate_property_paths(&src, 2).unwrap();
        let prefixes = src.graph().prefixes().clone();
        let names = find(&profiles, "akt:has-author/akt:full-name", &prefixes);
        assert_eq!(names.frequency, 1);
        assert_eq!(names.terminal, Terminal::Literal);
        assert!(names.sample_values.contains(&"John Davies".to_string()));
        assert_eq!(
            find(&profiles, "akt:has-author", &prefixes).terminal,
            Terminal::Resource
        );
        assert!(profiles.iter().all(|p| p.path.len() <= 2 && p.frequency <= 1));
    }

    #[test]
    fn acm_year() {
        let src = source(fixtures::ACM_RDF, Some(vocab::iri(vocab::AKT, "Article-Reference")));
        let profiles = enumerate_property_paths(&src, 2).unwrap();
        let prefixes = src.graph().prefixes().clone();
        let year = find(&profiles, "akt:has-date/support:year-of", &prefixes);
        assert_eq!(year.sample_values, ["2005"]);
    }

    #[test]
    fn depth_bounds_and_empty() {
        let empty = DataSource::new(SourceId::new("e"), "e", Graph::new(), FormatTag::NTriples, None);
        assert!(enumerate_property_paths(&empty, 2).unwrap().is_empty());
        assert_eq!(enumerate_property_paths(&empty, 0), Err(DatasetError::InvalidDepth(0)));
        assert_eq!(enumerate_property_paths(&empty, 5), Err(DatasetError::InvalidDepth(5)));
    }

    #[test]
    fn samples_are_sorted_and_capped() {
        let mut text = String::from(
            r#"<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#" xmlns:ex="http://ex/"><rdf:Description rdf:about="http://ex/s">"#,
        );
        for v in ["g", "c", "a", "f", "b", "e", "d"] {
            text.push_str(&format!("<ex:p>{v}</ex:p>"));
        }
        text.push_str("</rdf:Description></rdf:RDF>");
        let profiles = enumerate_property_paths(&source(&text, None), 1).unwrap();
        assert_eq!(profiles[0].sample_values, ["a", "b", "c", "d", "e"]);
    }

    #[test]
    fn cycles_stop_at_repeated_predicates() {
        let text = r#"<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#" xmlns:ex="http://ex/">
<rdf:Description rdf:about="http://ex/a"><ex:knows rdf:resource="http://ex/b"/></rdf:Description>
<rdf:Description rdf:about="http://ex/b"><ex:knows rdf:resource="http://ex/a"/><ex:name>B</ex:name></rdf:Description>
</rdf:RDF>"#;
        let src = source(text, None);
        // both nodes are referenced, so no untyped roots exist
        assert!(enumerate_property_paths(&src, 4).unwrap().is_empty());
        let entities = vec![Entity {
            root: Iri::new("http://ex/a").unwrap(),
            source: SourceId::new("t"),
        }];
        let profiles = profile_entities(src.graph(), &entities, 4).unwrap();
        let rendered: Vec<String> = profiles.iter().map(|p| p.path.to_string()).collect();
        assert_eq!(rendered, ["<http://ex/knows>", "<http://ex/knows>/<http://ex/name>"]);
    }
}
