//! Linkage rules: comparisons over property paths combined by aggregations.

mod compare;
mod eval;
mod levenshtein;
mod spec;
mod validate;

use serde::Serialize;

use crate::rdf::{vocab, Iri, PropertyPath};

pub use compare::{apply_transformations, compare, compare_sets, extract_year};
pub use eval::{entity_values, evaluate_comparison, evaluate_rule, evaluate_values, EntityValues, Side};
pub use levenshtein::{levenshtein, levenshtein_chars};
pub use spec::{parse_rule_payload, parse_rule_spec, rule_payload, task_spec_json, LinkingTask, SourceSpec, SpecError};
pub use validate::{validate_rule, RuleIssue, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Transformation {
    Lowercase,
    Trim,
    StripPunctuation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Equality,
    Levenshtein { max_distance: usize },
    DateEquality,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub id: String,
    pub source_path: PropertyPath,
    pub target_path: PropertyPath,
    pub transformations: Vec<Transformation>,
    pub comparator: Comparator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AggregationOp {
    Minimum,
    Maximum,
    Average,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregation {
    pub id: String,
    pub operator: AggregationOp,
    pub children: Vec<RuleNode>,
    /// Only meaningful for `Average`; aligned with `children`.
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RuleNode {
    Compare(Comparison),
    Aggregate(Aggregation),
}

impl RuleNode {
    pub fn id(&self) -> &str {
        match self {
            RuleNode::Compare(c) => &c.id,
            RuleNode::Aggregate(a) => &a.id,
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a RuleNode)) {
        visit(self);
        if let RuleNode::Aggregate(a) = self {
            for child in &a.children {
                child.walk(visit);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkageRule {
    pub root: RuleNode,
    pub link_type: Iri,
    /// Exclusive lower bound on confidence.
    pub threshold: f64,
}

impl LinkageRule {
    pub fn new(root: RuleNode) -> Self {
        Self {
            root,
            link_type: vocab::owl_same_as(),
            threshold: 0.0,
        }
    }

    /// Comparison nodes in document order.
    pub fn comparisons(&self) -> Vec<&Comparison> {
        let mut out = Vec::new();
        self.root.walk(&mut |n| {
            if let RuleNode::Compare(c) = n {
                out.push(c);
            }
        });
        out
    }

    /// Whether a decision produces a link under this rule.
    pub fn emits(&self, decision: &MatchDecision) -> bool {
        decision.accept && decision.confidence > self.threshold
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchDecision {
    pub accept: bool,
    pub confidence: f64,
}

impl MatchDecision {
    pub const REJECT: MatchDecision = MatchDecision {
        accept: false,
        confidence: 0.0,
    };

    pub fn binary(accept: bool) -> Self {
        Self {
            accept,
            confidence: if accept { 1.0 } else { 0.0 },
        }
    }

    /// Accepting beats rejecting, then higher confidence wins.
    pub fn better_than(&self, other: &MatchDecision) -> bool {
        (self.accept, self.confidence) > (other.accept, other.confidence)
    }
}
