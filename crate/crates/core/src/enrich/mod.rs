//! Adding discovered links to a graph, and copying metadata across them.

mod policy;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::dataset::DataSource;
use crate::matcher::{LinkSet, Verdict};
use crate::rdf::{Graph, Iri, Term, Triple};

pub use policy::MergePolicy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnrichError {
    #[error("link target <{0}> is not described by any target source")]
    UnresolvableLinkTarget(String),
    #[error("<{0}> is both allowed and denied by the merge policy")]
    PolicyConflict(String),
    #[error("invalid merge policy: {0}")]
    InvalidPolicy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EnrichMode {
    LinksOnly,
    Merge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SkipReason {
    AlreadyPresent,
    ExcludedByPolicy,
    NoLabel,
    DuplicateValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AddedTriple {
    pub triple: Triple,
    /// Label of the source that supplied the triple.
    pub origin: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedTriple {
    pub triple: Triple,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentReport {
    pub mode: EnrichMode,
    pub added: Vec<AddedTriple>,
    pub skipped: Vec<SkippedTriple>,
}

impl EnrichmentReport {
    fn new(mode: EnrichMode) -> Self {
        Self {
            mode,
            added: Vec::new(),
            skipped: Vec::new(),
        }
    }

    /// One line per added triple: N-Triples rendering, a tab, the origin.
    pub fn provenance(&self) -> String {
        let mut lines: Vec<String> = self
            .added
            .iter()
            .map(|a| format!("{}\t{}\n", a.triple, a.origin))
            .collect();
        lines.sort();
        lines.concat()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": self.mode,
            "added": self.added.iter().map(|a| serde_json::json!({
                "triple": a.triple.to_string(),
                "origin": a.origin,
            })).collect::<Vec<_>>(),
            "skipped": self.skipped.iter().map(|s| serde_json::json!({
                "triple": s.triple.to_string(),
                "reason": s.reason,
            })).collect::<Vec<_>>(),
        })
    }
}

fn add(out: &mut Graph, report: &mut EnrichmentReport, triple: Triple, origin: &str) {
    if out.insert(triple.clone()) {
        report.added.push(AddedTriple {
            triple,
            origin: origin.to_string(),
        });
    } else {
        report.skipped.push(SkippedTriple {
            triple,
            reason: SkipReason::AlreadyPresent,
        });
    }
}

fn inject_into(out: &mut Graph, report: &mut EnrichmentReport, links: &LinkSet) {
    for link in links.filtered(&Verdict::EXPORTED) {
        add(out, report, link.triple(), &links.task_id);
    }
}

/// Adds the accepted and unreviewed links as triples. Nothing else changes.
pub fn inject_links(graph: &Graph, links: &LinkSet) -> (Graph, EnrichmentReport) {
    let mut out = graph.clone();
    let mut report = EnrichmentReport::new(EnrichMode::LinksOnly);
    inject_into(&mut out, &mut report, links);
    (out, report)
}

fn normalized(value: &str) -> String {
    value.trim().to_lowercase()
}

fn literal_values(graph: &Graph, subject: &Term) -> BTreeSet<String> {
    graph
        .outgoing(subject)
        .filter_map(|(_, o)| o.as_literal())
        .map(|l| normalized(l.lexical()))
        .collect()
}

/// First literal found under the label predicates, in priority order.
fn label_of(graph: &Graph, node: &Term, priority: &[Iri]) -> Option<Term> {
    priority
        .iter()
        .find_map(|p| graph.objects(node, p).find(|o| o.is_literal()).cloned())
}

/// Injects the links, then copies each link target's own triples onto the
/// link source as the policy allows.
pub fn merge_metadata(
    graph: &Graph,
    links: &LinkSet,
    targets: &[&DataSource],
    policy: &MergePolicy,
) -> Result<(Graph, EnrichmentReport), EnrichError> {
    policy.check()?;
    let mut resolved = Vec::new();
    for link in links.filtered(&Verdict::EXPORTED) {
        let target = Term::Iri(link.target.clone());
        let source = targets
            .iter()
            .find(|t| t.graph().has_subject(&target))
            .ok_or_else(|| EnrichError::UnresolvableLinkTarget(link.target.as_str().to_string()))?;
        resolved.push((Term::Iri(link.source.clone()), target, *source));
    }

    let mut out = graph.clone();
    let mut report = EnrichmentReport::new(EnrichMode::Merge);
    inject_into(&mut out, &mut report, links);

    for (subject, target, source) in resolved {
        let tg = source.graph();
        for (p, o) in tg.outgoing(&target) {
            let candidate = |object: Term| Triple::new(subject.clone(), p.clone(), object).expect("IRI subject");
            if !policy.permits(p) {
                report.skipped.push(SkippedTriple {
                    triple: candidate(o.clone()),
                    reason: SkipReason::ExcludedByPolicy,
                });
                continue;
            }
            // blank nodes have no identity outside their graph, so they are always flattened
            let flatten = policy.flatten_resources || matches!(o, Term::BlankNode(_));
            let value = match o {
                Term::Literal(_) => o.clone(),
                _ if flatten => match label_of(tg, o, &policy.label_priority) {
                    Some(label) => label,
                    None => {
                        report.skipped.push(SkippedTriple {
                            triple: candidate(o.clone()),
                            reason: SkipReason::NoLabel,
                        });
                        continue;
                    }
                },
                _ => o.clone(),
            };
            if let Some(lit) = value.as_literal() {
                let triple = candidate(value.clone());
                if !out.contains(&triple) && literal_values(&out, &subject).contains(&normalized(lit.lexical())) {
                    report.skipped.push(SkippedTriple {
                        triple,
                        reason: SkipReason::DuplicateValue,
                    });
                    continue;
                }
            }
            add(&mut out, &mut report, candidate(value), source.label());
        }
    }
    if !report.added.is_empty() {
        for t in targets {
            out.prefixes_mut().merge_free(t.graph().prefixes());
        }
    }
    Ok((out, report))
}
