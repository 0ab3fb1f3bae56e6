use rayon::prelude::*;

use super::block::{candidate_pairs, key_comparison, BlockIndex};
use super::progress::{ProgressTracker, PROGRESS_GRANULARITY};
use super::{Link, LinkSet, Verdict};
use crate::dataset::{extract_entities, DataSource};
use crate::rule::{entity_values, evaluate_values, EntityValues, LinkageRule, Side};

#[derive(Debug, Clone, Copy)]
pub struct MatchOptions {
    pub blocking: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self { blocking: true }
    }
}

/// Evaluates the rule over candidate pairs and collects every link it
/// emits. Output order does not depend on scheduling.
pub fn generate_links(
    task_id: &str,
    rule: &LinkageRule,
    source: &DataSource,
    target: &DataSource,
    options: MatchOptions,
    progress: &ProgressTracker,
) -> LinkSet {
    let sources = extract_entities(source);
    let targets = extract_entities(target);
    let source_values: Vec<EntityValues> = sources
        .par_iter()
        .map(|e| entity_values(rule, source.graph(), &e.term(), Side::Source))
        .collect();
    let target_values: Vec<EntityValues> = targets
        .par_iter()
        .map(|e| entity_values(rule, target.graph(), &e.term(), Side::Target))
        .collect();

    let pairs: Vec<(usize, usize)> = match key_comparison(rule).filter(|_| options.blocking) {
        Some(key) => {
            // the key comparison is the first one in document order
            let position = rule
                .comparisons()
                .iter()
                .position(|c| std::ptr::eq(*c, key))
                .expect("key comparison belongs to the rule");
            let keyed = |vs: &[EntityValues]| vs.iter().map(|v| v.0[position].clone()).collect::<Vec<_>>();
            let index = BlockIndex::build(key, &keyed(&target_values));
            candidate_pairs(&index, &keyed(&source_values))
        }
        None => (0..sources.len())
            .flat_map(|s| (0..targets.len()).map(move |t| (s, t)))
            .collect(),
    };

    progress.start(pairs.len() as u64);
    let links: Vec<Link> = pairs
        .par_chunks(PROGRESS_GRANULARITY)
        .flat_map_iter(|chunk| {
            let found: Vec<Link> = chunk
                .iter()
                .filter_map(|&(s, t)| {
                    let decision = evaluate_values(rule, &source_values[s], &target_values[t]);
                    rule.emits(&decision).then(|| Link {
                        source: sources[s].root.clone(),
                        predicate: rule.link_type.clone(),
                        target: targets[t].root.clone(),
                        confidence: decision.confidence,
                        verdict: Verdict::Unreviewed,
                    })
                })
                .collect();
            progress.advance(chunk.len() as u64, found.len() as u64);
            found
        })
        .collect();
    let links = LinkSet::new(task_id, links);
    progress.finish();
    links
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SourceId;
    use crate::fixtures;
    use crate::io::{parse_rdfxml, parse_turtle, FormatTag};
    use crate::matcher::RunState;
    use crate::rule::parse_rule_spec;

    fn scenario_sources(target_rdf: &str, target_spec: &str) -> (LinkageRule, DataSource, DataSource) {
        let (task, rule) = parse_rule_spec(target_spec).unwrap();
        let src = DataSource::new(
            SourceId::new("s"),
            "initial",
            parse_turtle(fixtures::INITIAL_TTL).unwrap(),
            FormatTag::Turtle,
            task.source.entity_type,
        );
        let tgt = DataSource::new(
            SourceId::new("t"),
            "target",
            parse_rdfxml(target_rdf).unwrap(),
            FormatTag::RdfXml,
            task.target.entity_type,
        );
        (rule, src, tgt)
    }

    #[test]
    fn scenario_yields_one_link() {
        let (rule, src, tgt) = scenario_sources(fixtures::DBLP_RDF, fixtures::SCENARIO_JSON);
        for blocking in [true, false] {
            let progress = ProgressTracker::new();
            let ls = generate_links("t", &rule, &src, &tgt, MatchOptions { blocking }, &progress);
            assert_eq!(ls.len(), 1);
            assert_eq!(ls.to_ntriples(&Verdict::EXPORTED), fixtures::LINKS_DBLP_NT);
            let p = progress.snapshot();
            assert_eq!(p.state, RunState::Done);
            assert_eq!(p.pairs_evaluated, p.total_pairs);
            assert_eq!(p.links_found, 1);
        }
    }

    #[test]
    fn acm_yields_nothing() {
        let (rule, src, tgt) = scenario_sources(fixtures::ACM_RDF, fixtures::SCENARIO_ACM_JSON);
        let ls = generate_links("t", &rule, &src, &tgt, MatchOptions::default(), &ProgressTracker::new());
        assert!(ls.is_empty());
    }
}
