use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use super::EnrichError;
use crate::rdf::{vocab, Iri, PrefixMap};
use crate::rule::LinkageRule;

/// Which target triples may be copied onto a linked source subject.
#[derive(Debug, Clone, PartialEq)]
pub struct MergePolicy {
    /// When present, only these predicates are copied.
    pub include: Option<BTreeSet<Iri>>,
    pub exclude: BTreeSet<Iri>,
    /// Replace resource objects by their label literal.
    pub flatten_resources: bool,
    pub label_priority: Vec<Iri>,
}

/// Predicates that identify a record rather than add to it.
fn identifying_predicates() -> Vec<Iri> {
    [
        (vocab::RDF, "type"),
        (vocab::RDFS, "label"),
        (vocab::DCTERMS, "title"),
        (vocab::DCTERMS, "date"),
        (vocab::DCTERMS, "creator"),
        (vocab::DCTERMS, "contributor"),
        (vocab::DC, "title"),
        (vocab::DC, "date"),
        (vocab::DC, "creator"),
        (vocab::AKT, "has-title"),
        (vocab::AKT, "has-author"),
        (vocab::AKT, "has-date"),
        (vocab::SWRC, "year"),
    ]
    .into_iter()
    .map(|(ns, local)| vocab::iri(ns, local))
    .collect()
}

impl Default for MergePolicy {
    fn default() -> Self {
        Self {
            include: None,
            exclude: identifying_predicates().into_iter().collect(),
            flatten_resources: true,
            label_priority: vec![
                vocab::iri(vocab::AKT, "has-title"),
                vocab::rdfs_label(),
                vocab::iri(vocab::DC, "title"),
                vocab::iri(vocab::FOAF, "name"),
            ],
        }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct PolicyFile {
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    include: Option<Vec<String>>,
    exclude: Option<Vec<String>>,
    flatten_resources: Option<bool>,
    label_priority: Option<Vec<String>>,
}

impl MergePolicy {
    /// The default policy plus the first step of every path the rule
    /// compares, so values already matched on are not copied back.
    pub fn for_rule(rule: &LinkageRule) -> Self {
        let mut policy = Self::default();
        for c in rule.comparisons() {
            policy.exclude.insert(c.source_path.first().clone());
            policy.exclude.insert(c.target_path.first().clone());
        }
        policy
    }

    /// Reads `{prefixes?, include?, exclude?, flattenResources?, labelPriority?}`.
    /// Fields that are given replace the defaults.
    pub fn from_json(text: &str) -> Result<Self, EnrichError> {
        let raw: PolicyFile = serde_json::from_str(text).map_err(|e| EnrichError::InvalidPolicy(e.to_string()))?;
        let mut prefixes = PrefixMap::new();
        for (label, ns) in &raw.prefixes {
            let iri = Iri::new(ns.as_str()).map_err(|e| EnrichError::InvalidPolicy(e.to_string()))?;
            prefixes.bind(label.as_str(), &iri);
        }
        for (label, ns) in [("rdf", vocab::RDF), ("rdfs", vocab::RDFS), ("owl", vocab::OWL)] {
            prefixes.bind_if_free(label, &Iri::new(ns).expect("vocabulary IRI"));
        }
        let resolve = |items: Vec<String>| -> Result<Vec<Iri>, EnrichError> {
            items
                .iter()
                .map(|s| {
                    prefixes
                        .resolve(s)
                        .map_err(|e| EnrichError::InvalidPolicy(e.to_string()))
                })
                .collect()
        };
        let mut policy = Self::default();
        if let Some(include) = raw.include {
            policy.include = Some(resolve(include)?.into_iter().collect());
        }
        if let Some(exclude) = raw.exclude {
            policy.exclude = resolve(exclude)?.into_iter().collect();
        }
        if let Some(flatten) = raw.flatten_resources {
            policy.flatten_resources = flatten;
        }
        if let Some(priority) = raw.label_priority {
            policy.label_priority = resolve(priority)?;
        }
        policy.check()?;
        Ok(policy)
    }

    pub fn check(&self) -> Result<(), EnrichError> {
        if let Some(include) = &self.include {
            if let Some(both) = include.intersection(&self.exclude).next() {
                return Err(EnrichError::PolicyConflict(both.as_str().to_string()));
            }
        }
        Ok(())
    }

    pub fn permits(&self, predicate: &Iri) -> bool {
        !self.exclude.contains(predicate) && self.include.as_ref().is_none_or(|i| i.contains(predicate))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_file() {
        let p = MergePolicy::from_json(
            r#"{"prefixes":{"akt":"http://www.aktors.org/ontology/portal#"},
                "include":["akt:has-web-address"],"exclude":["rdf:type"],"flattenResources":false}"#,
        )
        .unwrap();
        assert!(p.permits(&vocab::iri(vocab::AKT, "has-web-address")));
        assert!(!p.permits(&vocab::iri(vocab::AKT, "article-of-journal")));
        assert!(!p.flatten_resources);
        assert_eq!(p.label_priority, MergePolicy::default().label_priority);
    }

    #[test]
    fn conflicting_lists() {
        let e = MergePolicy::from_json(r#"{"include":["rdf:type"]}"#).unwrap_err();
        assert!(matches!(e, EnrichError::PolicyConflict(_)));
        assert!(matches!(
            MergePolicy::from_json("{\"bogus\":1}"),
            Err(EnrichError::InvalidPolicy(_))
        ));
    }
}
