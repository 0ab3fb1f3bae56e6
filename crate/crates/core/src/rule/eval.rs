use std::collections::BTreeSet;

use super::compare::{apply_transformations, compare_sets};
use super::{AggregationOp, Comparison, LinkageRule, MatchDecision, RuleNode};
use crate::rdf::{Graph, PropertyPath, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

/// Transformed literal values of one entity, one set per comparison in
/// document order. Computing these once per entity keeps pairwise
/// evaluation free of graph lookups.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EntityValues(pub Vec<BTreeSet<String>>);

fn path_literals(graph: &Graph, root: &Term, path: &PropertyPath, c: &Comparison) -> BTreeSet<String> {
    let found = graph.eval_path(root, path);
    let lexical = found.iter().filter_map(|t| t.as_literal()).map(|l| l.lexical());
    apply_transformations(lexical, &c.transformations)
}

pub fn entity_values(rule: &LinkageRule, graph: &Graph, root: &Term, side: Side) -> EntityValues {
    EntityValues(
        rule.comparisons()
            .into_iter()
            .map(|c| {
                let path = match side {
                    Side::Source => &c.source_path,
                    Side::Target => &c.target_path,
                };
                path_literals(graph, root, path, c)
            })
            .collect(),
    )
}

pub fn evaluate_comparison(
    c: &Comparison,
    source_graph: &Graph,
    source_root: &Term,
    target_graph: &Graph,
    target_root: &Term,
) -> MatchDecision {
    let a = path_literals(source_graph, source_root, &c.source_path, c);
    let b = path_literals(target_graph, target_root, &c.target_path, c);
    compare_sets(&c.comparator, &a, &b)
}

pub fn evaluate_rule(
    rule: &LinkageRule,
    source_graph: &Graph,
    source_root: &Term,
    target_graph: &Graph,
    target_root: &Term,
) -> MatchDecision {
    let a = entity_values(rule, source_graph, source_root, Side::Source);
    let b = entity_values(rule, target_graph, target_root, Side::Target);
    evaluate_values(rule, &a, &b)
}

/// Evaluates the rule tree on precomputed values from [`entity_values`].
pub fn evaluate_values(rule: &LinkageRule, source: &EntityValues, target: &EntityValues) -> MatchDecision {
    let mut next = 0;
    eval_node(&rule.root, source, target, &mut next)
}

fn eval_node(node: &RuleNode, source: &EntityValues, target: &EntityValues, next: &mut usize) -> MatchDecision {
    match node {
        RuleNode::Compare(c) => {
            let i = *next;
            *next += 1;
            match (source.0.get(i), target.0.get(i)) {
                (Some(a), Some(b)) => compare_sets(&c.comparator, a, b),
                _ => MatchDecision::REJECT,
            }
        }
        RuleNode::Aggregate(agg) => {
            let decisions: Vec<MatchDecision> = agg
                .children
                .iter()
                .map(|child| eval_node(child, source, target, next))
                .collect();
            if decisions.is_empty() {
                return MatchDecision::REJECT;
            }
            match agg.operator {
                AggregationOp::Minimum => MatchDecision {
                    accept: decisions.iter().all(|d| d.accept),
                    confidence: decisions.iter().map(|d| d.confidence).fold(f64::INFINITY, f64::min),
                },
                AggregationOp::Maximum => MatchDecision {
                    accept: decisions.iter().any(|d| d.accept),
                    confidence: decisions.iter().map(|d| d.confidence).fold(f64::NEG_INFINITY, f64::max),
                },
                AggregationOp::Average => {
                    let weights: Vec<f64> = match &agg.weights {
                        Some(w) if w.len() == decisions.len() => w.clone(),
                        _ => vec![1.0; decisions.len()],
                    };
                    let total: f64 = weights.iter().sum();
                    let weighted: f64 = decisions.iter().zip(&weights).map(|(d, w)| d.confidence * w).sum();
                    MatchDecision {
                        accept: decisions.iter().all(|d| d.accept),
                        confidence: if total > 0.0 { weighted / total } else { 0.0 },
                    }
                }
            }
        }
    }
}
