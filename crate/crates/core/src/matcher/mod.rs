//! Candidate generation, pairwise rule evaluation and link output.

mod block;
mod progress;
mod run;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::io::{parse_ntriples, serialize_ntriples, ParseError};
use crate::rdf::{Graph, Iri, Term, Triple};

pub use block::{candidate_pairs, key_comparison, BlockIndex};
pub use progress::{Progress, ProgressTracker, RunState, PROGRESS_GRANULARITY};
pub use run::{generate_links, MatchOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    #[default]
    Unreviewed,
    Accepted,
    Rejected,
}

impl Verdict {
    /// Verdicts written out when no filter is given.
    pub const EXPORTED: [Verdict; 2] = [Verdict::Accepted, Verdict::Unreviewed];
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Unreviewed => "UNREVIEWED",
            Verdict::Accepted => "ACCEPTED",
            Verdict::Rejected => "REJECTED",
        })
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "UNREVIEWED" => Ok(Verdict::Unreviewed),
            "ACCEPTED" => Ok(Verdict::Accepted),
            "REJECTED" => Ok(Verdict::Rejected),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub source: Iri,
    pub predicate: Iri,
    pub target: Iri,
    pub confidence: f64,
    pub verdict: Verdict,
}

impl Link {
    pub fn triple(&self) -> Triple {
        Triple::new(
            Term::Iri(self.source.clone()),
            self.predicate.clone(),
            Term::Iri(self.target.clone()),
        )
        .expect("IRI subject")
    }
}

/// Links sorted by source then target, at most one per pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinkSet {
    pub task_id: String,
    links: Vec<Link>,
}

impl LinkSet {
    /// Sorts and drops repeated pairs, keeping the most confident link.
    pub fn new(task_id: impl Into<String>, mut links: Vec<Link>) -> Self {
        links.sort_by(|a, b| {
            (&a.source, &a.target)
                .cmp(&(&b.source, &b.target))
                .then(b.confidence.total_cmp(&a.confidence))
        });
        links.dedup_by(|later, earlier| later.source == earlier.source && later.target == earlier.target);
        Self {
            task_id: task_id.into(),
            links,
        }
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn get_mut(&mut self, index: usize) -> Option<&mut Link> {
        self.links.get_mut(index)
    }

    /// Links whose verdict is in `verdicts`.
    pub fn filtered<'a>(&'a self, verdicts: &'a [Verdict]) -> impl Iterator<Item = &'a Link> + 'a {
        self.links.iter().filter(move |l| verdicts.contains(&l.verdict))
    }

    pub fn to_graph(&self, verdicts: &[Verdict]) -> Graph {
        self.filtered(verdicts).map(Link::triple).collect()
    }

    /// Canonical N-Triples of the links whose verdict is in `verdicts`.
    pub fn to_ntriples(&self, verdicts: &[Verdict]) -> String {
        serialize_ntriples(&self.to_graph(verdicts))
    }

    /// Reads a links file. Each triple with an IRI object becomes an
    /// unreviewed link of confidence 1.
    pub fn from_ntriples(task_id: impl Into<String>, text: &str) -> Result<Self, ParseError> {
        let graph = parse_ntriples(text)?;
        let links = graph
            .iter()
            .filter_map(|t| {
                let (s, p, o) = t.into_parts();
                match (s, o) {
                    (Term::Iri(source), Term::Iri(target)) => Some(Link {
                        source,
                        predicate: p,
                        target,
                        confidence: 1.0,
                        verdict: Verdict::Unreviewed,
                    }),
                    _ => None,
                }
            })
            .collect();
        Ok(Self::new(task_id, links))
    }
}

/// Writes accepted and unreviewed links. Returns the number of lines.
pub fn write_links(links: &LinkSet, path: &Path) -> std::io::Result<usize> {
    let text = links.to_ntriples(&Verdict::EXPORTED);
    std::fs::write(path, &text)?;
    Ok(text.lines().count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rdf::vocab;

    fn link(s: &str, t: &str, confidence: f64, verdict: Verdict) -> Link {
        Link {
            source: Iri::new(s).unwrap(),
            predicate: vocab::owl_same_as(),
            target: Iri::new(t).unwrap(),
            confidence,
            verdict,
        }
    }

    #[test]
    fn sorted_and_unique() {
        let ls = LinkSet::new(
            "t",
            vec![
                link("http://b/1", "http://x/1", 0.5, Verdict::Unreviewed),
                link("http://a/1", "http://x/2", 0.5, Verdict::Unreviewed),
                link("http://b/1", "http://x/1", 0.9, Verdict::Unreviewed),
            ],
        );
        assert_eq!(ls.len(), 2);
        assert_eq!(ls.links()[0].source.as_str(), "http://a/1");
        assert_eq!(ls.links()[1].confidence, 0.9);
    }

    #[test]
    fn write_filters_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("links.nt");
        let scenario = LinkSet::new(
            "t",
            vec![link(
                fixtures::PAPER_001,
                fixtures::DBLP_DAVIES_WS11,
                0.97,
                Verdict::Unreviewed,
            )],
        );
        assert_eq!(write_links(&scenario, &path).unwrap(), 1);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), fixtures::LINKS_DBLP_NT);

        assert_eq!(write_links(&LinkSet::default(), &path).unwrap(), 0);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "");

        let rejected = LinkSet::new(
            "t",
            vec![link(
                fixtures::PAPER_001,
                fixtures::DBLP_DAVIES_WS11,
                0.97,
                Verdict::Rejected,
            )],
        );
        assert_eq!(write_links(&rejected, &path).unwrap(), 0);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "");
    }

    #[test]
    fn links_file_roundtrip() {
        let ls = LinkSet::from_ntriples("t", fixtures::LINKS_DBLP_NT).unwrap();
        assert_eq!(ls.len(), 1);
        assert_eq!(ls.to_ntriples(&Verdict::EXPORTED), fixtures::LINKS_DBLP_NT);
    }

    #[test]
    fn verdict_names() {
        assert_eq!("accepted".parse::<Verdict>().unwrap(), Verdict::Accepted);
        assert!("maybe".parse::<Verdict>().is_err());
        assert_eq!(serde_json::to_value(Verdict::Rejected).unwrap(), "REJECTED");
    }
}
