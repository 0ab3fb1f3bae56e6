use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::paths::{profile_entities, Terminal};
use super::{extract_entities, DataSource};
use crate::rdf::{vocab, Iri, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LintCode {
    GenericLabelReuse,
    ResourceValuedPath,
    MissingType,
    DanglingReference,
}

impl fmt::Display for LintCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LintCode::GenericLabelReuse => "GENERIC_LABEL_REUSE",
            LintCode::ResourceValuedPath => "RESOURCE_VALUED_PATH",
            LintCode::MissingType => "MISSING_TYPE",
            LintCode::DanglingReference => "DANGLING_REFERENCE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LintWarning {
    pub code: LintCode,
    #[serde(serialize_with = "serialize_opt_iri")]
    pub subject: Option<Iri>,
    pub message: String,
}

fn serialize_opt_iri<S: serde::Serializer>(iri: &Option<Iri>, s: S) -> Result<S::Ok, S::Error> {
    match iri {
        Some(i) => s.serialize_some(i.as_str()),
        None => s.serialize_none(),
    }
}

/// Modeling problems that get in the way of writing a linkage rule.
pub fn lint_source(source: &DataSource) -> Vec<LintWarning> {
    let graph = source.graph();
    let prefixes = graph.prefixes();
    let rdf_type = vocab::rdf_type();
    let label = vocab::rdfs_label();
    let entities = extract_entities(source);
    let mut out = Vec::new();

    let mut labelled_classes: BTreeSet<&Term> = BTreeSet::new();
    for s in graph.subjects() {
        if graph.objects(s, &label).next().is_some() {
            labelled_classes.extend(graph.objects(s, &rdf_type));
        }
    }
    if labelled_classes.len() >= 2 {
        let names: Vec<String> = labelled_classes
            .iter()
            .map(|c| c.as_iri().map_or_else(|| c.to_string(), |i| prefixes.render(i)))
            .collect();
        out.push(LintWarning {
            code: LintCode::GenericLabelReuse,
            subject: None,
            message: format!(
                "rdfs:label is used on instances of {}; use a class-specific naming property",
                names.join(", ")
            ),
        });
    }

    if let Ok(profiles) = profile_entities(graph, &entities, 2) {
        for first in profiles.iter().filter(|p| p.path.len() == 1) {
            let predicate = first.path.first();
            if first.terminal != Terminal::Resource || *predicate == rdf_type {
                continue;
            }
            let extensions: Vec<String> = profiles
                .iter()
                .filter(|p| p.path.len() == 2 && p.path.first() == predicate && p.terminal != Terminal::Resource)
                .map(|p| p.path.render(prefixes))
                .collect();
            let hint = if extensions.is_empty() {
                "no literal is reachable one step further".to_string()
            } else {
                format!("compare via {}", extensions.join(" or "))
            };
            out.push(LintWarning {
                code: LintCode::ResourceValuedPath,
                subject: Some(predicate.clone()),
                message: format!(
                    "{} points to resources, not literals; {hint}",
                    prefixes.render(predicate)
                ),
            });
        }
    }

    // Only meaningful when the source types anything at all.
    if graph.subjects().any(|s| graph.objects(s, &rdf_type).next().is_some()) {
        for e in &entities {
            if graph.objects(&e.term(), &rdf_type).next().is_none() {
                out.push(LintWarning {
                    code: LintCode::MissingType,
                    subject: Some(e.root.clone()),
                    message: format!("{} has no rdf:type", prefixes.render(&e.root)),
                });
            }
        }
    }

    let namespaces: BTreeSet<&str> = entities.iter().filter_map(|e| e.root.authority_prefix()).collect();
    let mut dangling: BTreeSet<&Iri> = BTreeSet::new();
    for s in graph.subjects() {
        for (p, object) in graph.outgoing(s) {
            if *p == rdf_type {
                continue;
            }
            if let Term::Iri(o) = object {
                let local = o.authority_prefix().is_some_and(|a| namespaces.contains(a));
                if local && !graph.has_subject(object) {
                    dangling.insert(o);
                }
            }
        }
    }
    for o in dangling {
        out.push(LintWarning {
            code: LintCode::DanglingReference,
            subject: Some(o.clone()),
            message: format!(
                "{} is referenced but has no description in this source",
                prefixes.render(o)
            ),
        });
    }

    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SourceId;
    use crate::fixtures;
    use crate::io::{parse_ntriples, parse_rdfxml, parse_turtle, FormatTag};
    use crate::rdf::Graph;

    fn src(graph: Graph, class: Option<Iri>) -> DataSource {
        DataSource::new(SourceId::new("t"), "t", graph, FormatTag::Turtle, class)
    }

    fn codes(warnings: &[LintWarning]) -> Vec<LintCode> {
        warnings.iter().map(|w| w.code).collect()
    }

    #[test]
    fn label_reuse_on_swc() {
        let g = parse_rdfxml(fixtures::SWC_RDF).unwrap();
        let warnings = lint_source(&src(g, Some(vocab::iri(vocab::SWRC, "InProceedings"))));
        assert!(codes(&warnings).contains(&LintCode::GenericLabelReuse));
    }

    #[test]
    fn resource_valued_author_on_dblp() {
        let g = parse_rdfxml(fixtures::DBLP_RDF).unwrap();
        let warnings = lint_source(&src(g, Some(vocab::iri(vocab::AKT, "Book-Section-Reference"))));
        let author = vocab::iri(vocab::AKT, "has-author");
        let w = warnings
            .iter()
            .find(|w| w.code == LintCode::ResourceValuedPath && w.subject.as_ref() == Some(&author))
            .expect("has-author warning");
        assert!(w.message.contains("akt:has-author/akt:full-name"), "{}", w.message);
        assert!(!codes(&warnings).contains(&LintCode::GenericLabelReuse));
    }

    #[test]
    fn literal_only_source_is_clean() {
        let g = parse_ntriples("<http://ex.org/a> <http://ex.org/p> \"v\" .\n").unwrap();
        assert!(lint_source(&src(g, None)).is_empty());
    }

    #[test]
    fn missing_type_and_dangling() {
        let g = parse_ntriples(concat!(
            "<http://ex.org/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex.org/C> .\n",
            "<http://ex.org/b> <http://ex.org/p> \"v\" .\n",
            "<http://ex.org/a> <http://ex.org/q> <http://ex.org/missing> .\n",
        ))
        .unwrap();
        let warnings = lint_source(&src(g, None));
        let missing: Vec<_> = warnings.iter().filter(|w| w.code == LintCode::MissingType).collect();
        assert_eq!(missing.len(), 1);
        assert_eq!(missing[0].subject.as_ref().unwrap().as_str(), "http://ex.org/b");
        let dangling: Vec<_> = warnings
            .iter()
            .filter(|w| w.code == LintCode::DanglingReference)
            .collect();
        assert_eq!(dangling.len(), 1);
        assert_eq!(dangling[0].subject.as_ref().unwrap().as_str(), "http://ex.org/missing");
    }

    #[test]
    fn lint_leaves_source_untouched() {
        let g = parse_turtle(fixtures::INITIAL_TTL).unwrap();
        let s = src(g.clone(), None);
        let first = lint_source(&s);
        assert_eq!(first, lint_source(&s));
        assert_eq!(s.graph(), &g);
    }

    #[test]
    fn codes_serialize_as_constants() {
        let w = LintWarning {
            code: LintCode::MissingType,
            subject: None,
            message: String::new(),
        };
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["code"], "MISSING_TYPE");
        assert_eq!(LintCode::DanglingReference.to_string(), "DANGLING_REFERENCE");
    }
}
