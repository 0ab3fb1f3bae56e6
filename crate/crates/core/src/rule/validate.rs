use std::collections::BTreeMap;

use serde::Serialize;

use super::{AggregationOp, LinkageRule, RuleNode};
use crate::dataset::{PathProfile, Terminal};
use crate::rdf::{vocab, Iri, PropertyPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleIssue {
    pub severity: Severity,
    /// Offending node, or `None` for rule-level problems.
    pub node_id: Option<String>,
    pub message: String,
}

impl RuleIssue {
    fn error(node: Option<&str>, message: String) -> Self {
        Self {
            severity: Severity::Error,
            node_id: node.map(str::to_string),
            message,
        }
    }

    fn warning(node: &str, message: String) -> Self {
        Self {
            severity: Severity::Warning,
            node_id: Some(node.to_string()),
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Predicates whose values are literals or classes, so they cannot carry a
/// link between two resources.
fn is_non_object_property(p: &Iri) -> bool {
    let known = [
        (vocab::RDF, "type"),
        (vocab::RDFS, "label"),
        (vocab::RDFS, "comment"),
        (vocab::DCTERMS, "title"),
        (vocab::DCTERMS, "date"),
        (vocab::DCTERMS, "description"),
        (vocab::DC, "title"),
        (vocab::DC, "date"),
        (vocab::FOAF, "name"),
        (vocab::FOAF, "firstName"),
        (vocab::FOAF, "lastName"),
        (vocab::AKT, "has-title"),
        (vocab::AKT, "full-name"),
        (vocab::AKTS, "year-of"),
        (vocab::SWRC, "year"),
    ];
    known
        .iter()
        .any(|(ns, local)| p.as_str().strip_prefix(ns) == Some(local))
}

/// Structural errors block a rule; warnings flag paths that were not
/// enumerated (custom paths) or that end on resources.
pub fn validate_rule(rule: &LinkageRule, source_paths: &[PathProfile], target_paths: &[PathProfile]) -> Vec<RuleIssue> {
    let mut issues = Vec::new();

    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    let mut order = Vec::new();
    rule.root.walk(&mut |n| {
        let count = seen.entry(n.id()).or_insert(0);
        if *count == 0 {
            order.push(n.id());
        }
        *count += 1;
    });
    for id in order {
        if seen[id] > 1 {
            issues.push(RuleIssue::error(Some(id), format!("duplicate node id {id:?}")));
        }
    }

    rule.root.walk(&mut |n| match n {
        RuleNode::Aggregate(a) => {
            if a.children.is_empty() {
                issues.push(RuleIssue::error(Some(&a.id), "empty aggregation".into()));
            }
            if let Some(w) = &a.weights {
                if a.operator != AggregationOp::Average {
                    issues.push(RuleIssue::error(
                        Some(&a.id),
                        "weights are only allowed on AVERAGE".into(),
                    ));
                } else if w.len() != a.children.len() {
                    issues.push(RuleIssue::error(
                        Some(&a.id),
                        format!(
                            "weights/children mismatch: {} weights for {} children",
                            w.len(),
                            a.children.len()
                        ),
                    ));
                } else if w.iter().any(|x| *x <= 0.0 || !x.is_finite()) {
                    issues.push(RuleIssue::error(Some(&a.id), "weights must be positive".into()));
                }
            }
        }
        RuleNode::Compare(c) => {
            for (side, path, known) in [
                ("source", &c.source_path, source_paths),
                ("target", &c.target_path, target_paths),
            ] {
                if let Some(w) = path_warning(side, path, known) {
                    issues.push(RuleIssue::warning(&c.id, w));
                }
            }
        }
    });

    if !(0.0..=1.0).contains(&rule.threshold) {
        issues.push(RuleIssue::error(
            None,
            format!("threshold {} is outside [0, 1]", rule.threshold),
        ));
    }
    if is_non_object_property(&rule.link_type) {
        issues.push(RuleIssue::error(
            None,
            format!("link type <{}> is not an object property", rule.link_type.as_str()),
        ));
    }
    issues
}

fn path_warning(side: &str, path: &PropertyPath, known: &[PathProfile]) -> Option<String> {
    match known.iter().find(|p| &p.path == path) {
        None => Some(format!("custom {side} path {path} is not among the enumerated paths")),
        Some(p) if p.terminal == Terminal::Resource => Some(format!(
            "{side} path {path} ends on resources; comparators need literals"
        )),
        Some(_) => None,
    }
}
