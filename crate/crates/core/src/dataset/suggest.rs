use std::collections::{BTreeMap, BTreeSet};

use super::paths::path_values;
use super::{DataSource, DatasetError};
use crate::rdf::PropertyPath;

#[derive(Debug, Clone, PartialEq)]
pub struct SuggestedPair {
    pub source_path: PropertyPath,
    pub target_path: PropertyPath,
    /// Jaccard overlap of the normalized literal value sets.
    pub score: f64,
}

fn normalized(values: BTreeMap<PropertyPath, BTreeSet<String>>) -> Vec<(PropertyPath, BTreeSet<String>)> {
    values
        .into_iter()
        .map(|(p, vs)| (p, vs.iter().map(|v| v.trim().to_lowercase()).collect::<BTreeSet<_>>()))
        .filter(|(_, vs)| !vs.is_empty())
        .collect()
}

/// Path pairs whose values overlap, best first.
pub fn suggest_property_pairs(
    a: &DataSource,
    b: &DataSource,
    max_depth: usize,
) -> Result<Vec<SuggestedPair>, DatasetError> {
    let left = normalized(path_values(a, max_depth)?);
    let right = normalized(path_values(b, max_depth)?);
    let mut out = Vec::new();
    for (lp, lv) in &left {
        for (rp, rv) in &right {
            let shared = lv.intersection(rv).count();
            if shared == 0 {
                continue;
            }
            let union = lv.len() + rv.len() - shared;
            out.push(SuggestedPair {
                source_path: lp.clone(),
                target_path: rp.clone(),
                score: shared as f64 / union as f64,
            });
        }
    }
    out.sort_by(|x, y| {
        y.score
            .total_cmp(&x.score)
            .then_with(|| x.source_path.cmp(&y.source_path))
            .then_with(|| x.target_path.cmp(&y.target_path))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SourceId;
    use crate::fixtures;
    use crate::io::{parse_ntriples, parse_rdfxml, parse_turtle, FormatTag};
    use crate::rdf::{vocab, Graph, Iri};

    fn src(graph: Graph, class: Option<Iri>) -> DataSource {
        DataSource::new(SourceId::new("t"), "t", graph, FormatTag::Turtle, class)
    }

    fn jaccard(a: &[&str], b: &[&str]) -> f64 {
        let a: BTreeSet<_> = a.iter().collect();
        let b: BTreeSet<_> = b.iter().collect();
        a.intersection(&b).count() as f64 / a.union(&b).count() as f64
    }

    #[test]
    fn initial_against_dblp() {
        let initial = src(parse_turtle(fixtures::INITIAL_TTL).unwrap(), None);
        let dblp = src(
            parse_rdfxml(fixtures::DBLP_RDF).unwrap(),
            Some(vocab::iri(vocab::AKT, "Book-Section-Reference")),
        );
        let pairs = suggest_property_pairs(&initial, &dblp, 2).unwrap();
        let p = initial.graph().prefixes();
        let q = dblp.graph().prefixes();
        let score = |l: &str, r: &str| {
            pairs
                .iter()
                .find(|s| s.source_path.render(p) == l && s.target_path.render(q) == r)
                .map(|s| s.score)
        };
        let names = ["john davies", "paul warren", "york sure"];
        assert_eq!(
            score("dcterms:contributor/foaf:name", "akt:has-author/akt:full-name"),
            Some(jaccard(&["paul warren", "york sure"], &names))
        );
        assert_eq!(
            score("dcterms:creator/foaf:name", "akt:has-author/akt:full-name"),
            Some(jaccard(&["john davies"], &names))
        );
        assert_eq!(score("dcterms:date", "akt:has-date/akts:year-of"), Some(1.0));
        assert!(score("dcterms:title", "akt:has-title").is_none());
        assert!(pairs.windows(2).all(|w| w[0].score >= w[1].score));
    }

    #[test]
    fn self_pairs_score_one() {
        let s = src(parse_turtle(fixtures::INITIAL_TTL).unwrap(), None);
        let pairs = suggest_property_pairs(&s, &s, 2).unwrap();
        let selfs: Vec<_> = pairs.iter().filter(|x| x.source_path == x.target_path).collect();
        assert!(!selfs.is_empty());
        assert!(selfs.iter().all(|x| x.score == 1.0));
    }

    #[test]
    fn disjoint_sources_give_nothing() {
        let a = src(
            parse_ntriples("<http://a.org/x> <http://a.org/p> \"one\" .\n").unwrap(),
            None,
        );
        let b = src(
            parse_ntriples("<http://b.org/y> <http://b.org/q> \"two\" .\n").unwrap(),
            None,
        );
        assert!(suggest_property_pairs(&a, &b, 2).unwrap().is_empty());
    }
}
