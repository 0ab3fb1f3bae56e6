//! Synthetic bibliographic sources for the benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use lodlink_core::dataset::{DataSource, SourceId};
use lodlink_core::io::FormatTag;
use lodlink_core::rdf::{vocab, Graph, Iri, Literal, PropertyPath, Term, Triple};
use lodlink_core::rule::{Comparator, Comparison, LinkageRule, RuleNode, Transformation};

const WORDS: [&str; 20] = [
    "semantic",
    "web",
    "linked",
    "data",
    "knowledge",
    "management",
    "graph",
    "query",
    "ontology",
    "fuzzy",
    "retrieval",
    "digital",
    "library",
    "analysis",
    "program",
    "evaluation",
    "services",
    "information",
    "entity",
    "matching",
];

pub fn random_title(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(3..=8);
    (0..n)
        .map(|_| WORDS[rng.gen_range(0..WORDS.len())])
        .collect::<Vec<_>>()
        .join(" ")
}

/// Applies `edits` random single-character edits.
pub fn with_typos(rng: &mut impl Rng, title: &str, edits: usize) -> String {
    let mut chars: Vec<char> = title.chars().collect();
    for _ in 0..edits {
        let c = (b'a' + rng.gen_range(0..26)) as char;
        let i = rng.gen_range(0..chars.len().max(1));
        match rng.gen_range(0..3) {
            0 if i < chars.len() => chars[i] = c,
            1 if i < chars.len() => {
                chars.remove(i);
            }
            _ => chars.insert(i.min(chars.len()), c),
        }
    }
    chars.into_iter().collect()
}

fn source(id: &str, base: &str, titles: &[String]) -> DataSource {
    let kind = Iri::new(format!("{base}Record")).expect("IRI");
    let title = Iri::new(format!("{base}title")).expect("IRI");
    let mut g = Graph::new();
    for (i, t) in titles.iter().enumerate() {
        let s = Term::iri(&format!("{base}r{i}")).expect("IRI");
        g.insert(Triple::new(s.clone(), vocab::rdf_type(), Term::Iri(kind.clone())).expect("IRI subject"));
        g.insert(Triple::new(s, title.clone(), Term::Literal(Literal::plain(t.clone()))).expect("IRI subject"));
    }
    DataSource::new(SourceId::new(id), id, g, FormatTag::NTriples, Some(kind))
}

/// Two sources of `n` records each. Half of the target titles are typo'd
/// copies of source titles.
pub fn source_pair(n: usize, seed: u64) -> (DataSource, DataSource) {
    let mut rng = StdRng::seed_from_u64(seed);
    let a: Vec<String> = (0..n).map(|_| random_title(&mut rng)).collect();
    let b: Vec<String> = (0..n)
        .map(|i| {
            if i % 2 == 0 {
                let edits = rng.gen_range(0..=3);
                let j = rng.gen_range(0..n);
                with_typos(&mut rng, &a[j], edits)
            } else {
                random_title(&mut rng)
            }
        })
        .collect();
    (
        source("a", "http://a.example/", &a),
        source("b", "http://b.example/", &b),
    )
}

pub fn title_rule(max_distance: usize) -> LinkageRule {
    LinkageRule::new(RuleNode::Compare(Comparison {
        id: "title".into(),
        source_path: PropertyPath::single(Iri::new("http://a.example/title").expect("IRI")),
        target_path: PropertyPath::single(Iri::new("http://b.example/title").expect("IRI")),
        transformations: vec![Transformation::Lowercase],
        comparator: Comparator::Levenshtein { max_distance },
    }))
}
