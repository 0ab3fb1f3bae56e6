//! JSON task and rule files.
//!
//! Rule nodes are `{"compare": {...}}` or `{"aggregate": {...}}`. Paths are
//! "/"-joined compact IRIs resolved against the file's `prefixes`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Aggregation, AggregationOp, Comparator, Comparison, LinkageRule, RuleNode, Transformation};
use crate::io::FormatTag;
use crate::rdf::{vocab, Iri, PrefixMap, PropertyPath};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SpecError {
    /// `line L, column C` for syntax errors, otherwise a JSON pointer.
    pub location: String,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl SpecError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            message: message.into(),
        }
    }

    fn from_json(e: serde_json::Error) -> Self {
        Self::at(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    pub label: String,
    /// Dump location, relative to the spec file.
    pub path: Option<String>,
    pub format: Option<FormatTag>,
    pub entity_type: Option<Iri>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkingTask {
    pub id: String,
    pub prefixes: PrefixMap,
    pub source: SourceSpec,
    pub target: SourceSpec,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct TaskFile {
    id: Option<String>,
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    source: SourceFile,
    target: SourceFile,
    link_type: Option<String>,
    threshold: Option<f64>,
    rule: NodeFile,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RuleFile {
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    link_type: Option<String>,
    threshold: Option<f64>,
    rule: NodeFile,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SourceFile {
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<FormatTag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entity_type: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NodeFile {
    Compare(CompareFile),
    Aggregate(AggregateFile),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CompareFile {
    id: String,
    source_path: String,
    target_path: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    transformations: Vec<TransformationName>,
    comparator: ComparatorFile,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AggregateFile {
    id: String,
    operator: OperatorName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
    #[serde(default)]
    children: Vec<NodeFile>,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
enum TransformationName {
    #[serde(rename = "lowercase", alias = "LOWERCASE")]
    Lowercase,
    #[serde(rename = "trim", alias = "TRIM")]
    Trim,
    #[serde(rename = "stripPunctuation", alias = "STRIP_PUNCTUATION")]
    StripPunctuation,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
enum OperatorName {
    #[serde(rename = "minimum", alias = "MINIMUM")]
    Minimum,
    #[serde(rename = "maximum", alias = "MAXIMUM")]
    Maximum,
    #[serde(rename = "average", alias = "AVERAGE")]
    Average,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum ComparatorFile {
    #[serde(rename = "equality", alias = "EQUALITY")]
    Equality,
    #[serde(rename = "levenshtein", alias = "LEVENSHTEIN")]
    Levenshtein {
        #[serde(rename = "maxDistance")]
        max_distance: usize,
    },
    #[serde(rename = "dateEquality", alias = "DATE_EQUALITY")]
    DateEquality,
}

fn prefix_map(raw: &BTreeMap<String, String>, base: &PrefixMap) -> Result<PrefixMap, SpecError> {
    let mut map = PrefixMap::new();
    for (label, ns) in raw {
        let iri = Iri::new(ns.as_str()).map_err(|e| SpecError::at(format!("/prefixes/{label}"), e.to_string()))?;
        map.bind(label.as_str(), &iri);
    }
    map.merge_free(base);
    for (label, ns) in [
        ("rdf", vocab::RDF),
        ("rdfs", vocab::RDFS),
        ("owl", vocab::OWL),
        ("xsd", vocab::XSD),
    ] {
        map.bind_if_free(label, &Iri::new(ns).expect("vocabulary IRI"));
    }
    Ok(map)
}

fn resolve(prefixes: &PrefixMap, text: &str, at: &str) -> Result<Iri, SpecError> {
    prefixes.resolve(text).map_err(|e| SpecError::at(at, e.to_string()))
}

fn path(prefixes: &PrefixMap, text: &str, at: String) -> Result<PropertyPath, SpecError> {
    PropertyPath::parse(text, prefixes).map_err(|e| SpecError::at(at, e.to_string()))
}

fn build_node(node: NodeFile, prefixes: &PrefixMap, at: &str) -> Result<RuleNode, SpecError> {
    Ok(match node {
        NodeFile::Compare(c) => {
            let at = format!("{at}/compare");
            RuleNode::Compare(Comparison {
                source_path: path(prefixes, &c.source_path, format!("{at}/sourcePath"))?,
                target_path: path(prefixes, &c.target_path, format!("{at}/targetPath"))?,
                id: c.id,
                transformations: c
                    .transformations
                    .into_iter()
                    .map(|t| match t {
                        TransformationName::Lowercase => Transformation::Lowercase,
                        TransformationName::Trim => Transformation::Trim,
                        TransformationName::StripPunctuation => Transformation::StripPunctuation,
                    })
                    .collect(),
                comparator: match c.comparator {
                    ComparatorFile::Equality => Comparator::Equality,
                    ComparatorFile::Levenshtein { max_distance } => Comparator::Levenshtein { max_distance },
                    ComparatorFile::DateEquality => Comparator::DateEquality,
                },
            })
        }
        NodeFile::Aggregate(a) => {
            let at = format!("{at}/aggregate");
            let children = a
                .children
                .into_iter()
                .enumerate()
                .map(|(i, child)| build_node(child, prefixes, &format!("{at}/children/{i}")))
                .collect::<Result<_, _>>()?;
            RuleNode::Aggregate(Aggregation {
                id: a.id,
                operator: match a.operator {
                    OperatorName::Minimum => AggregationOp::Minimum,
                    OperatorName::Maximum => AggregationOp::Maximum,
                    OperatorName::Average => AggregationOp::Average,
                },
                children,
                weights: a.weights,
            })
        }
    })
}

fn build_rule(
    prefixes: &PrefixMap,
    link_type: Option<String>,
    threshold: Option<f64>,
    node: NodeFile,
) -> Result<LinkageRule, SpecError> {
    let mut rule = LinkageRule::new(build_node(node, prefixes, "/rule")?);
    if let Some(lt) = link_type {
        rule.link_type = resolve(prefixes, &lt, "/linkType")?;
    }
    if let Some(t) = threshold {
        rule.threshold = t;
    }
    Ok(rule)
}

fn source_spec(raw: SourceFile, prefixes: &PrefixMap, at: &str) -> Result<SourceSpec, SpecError> {
    let entity_type = match raw.entity_type {
        Some(t) => Some(resolve(prefixes, &t, &format!("{at}/entityType"))?),
        None => None,
    };
    Ok(SourceSpec {
        label: raw.label,
        path: raw.path,
        format: raw.format,
        entity_type,
    })
}

/// Reads a full task file. `linkType` defaults to owl:sameAs and
/// `threshold` to 0.
pub fn parse_rule_spec(text: &str) -> Result<(LinkingTask, LinkageRule), SpecError> {
    let raw: TaskFile = serde_json::from_str(text).map_err(SpecError::from_json)?;
    let prefixes = prefix_map(&raw.prefixes, &PrefixMap::new())?;
    let rule = build_rule(&prefixes, raw.link_type, raw.threshold, raw.rule)?;
    let task = LinkingTask {
        id: raw.id.unwrap_or_else(|| "task".to_string()),
        source: source_spec(raw.source, &prefixes, "/source")?,
        target: source_spec(raw.target, &prefixes, "/target")?,
        prefixes,
    };
    Ok((task, rule))
}

/// Reads a rule on its own: `{prefixes?, linkType?, threshold?, rule}`.
/// Prefixes bound in `base` are available unless the payload rebinds them.
pub fn parse_rule_payload(text: &str, base: &PrefixMap) -> Result<LinkageRule, SpecError> {
    let raw: RuleFile = serde_json::from_str(text).map_err(SpecError::from_json)?;
    let prefixes = prefix_map(&raw.prefixes, base)?;
    build_rule(&prefixes, raw.link_type, raw.threshold, raw.rule)
}

fn node_file(node: &RuleNode, prefixes: &PrefixMap) -> NodeFile {
    match node {
        RuleNode::Compare(c) => NodeFile::Compare(CompareFile {
            id: c.id.clone(),
            source_path: c.source_path.render(prefixes),
            target_path: c.target_path.render(prefixes),
            transformations: c
                .transformations
                .iter()
                .map(|t| match t {
                    Transformation::Lowercase => TransformationName::Lowercase,
                    Transformation::Trim => TransformationName::Trim,
                    Transformation::StripPunctuation => TransformationName::StripPunctuation,
                })
                .collect(),
            comparator: match c.comparator {
                Comparator::Equality => ComparatorFile::Equality,
                Comparator::Levenshtein { max_distance } => ComparatorFile::Levenshtein { max_distance },
                Comparator::DateEquality => ComparatorFile::DateEquality,
            },
        }),
        RuleNode::Aggregate(a) => NodeFile::Aggregate(AggregateFile {
            id: a.id.clone(),
            operator: match a.operator {
                AggregationOp::Minimum => OperatorName::Minimum,
                AggregationOp::Maximum => OperatorName::Maximum,
                AggregationOp::Average => OperatorName::Average,
            },
            weights: a.weights.clone(),
            children: a.children.iter().map(|c| node_file(c, prefixes)).collect(),
        }),
    }
}

/// The payload form read by [`parse_rule_payload`].
pub fn rule_payload(rule: &LinkageRule, prefixes: &PrefixMap) -> Value {
    serde_json::json!({
        "prefixes": prefixes,
        "linkType": prefixes.render(&rule.link_type),
        "threshold": rule.threshold,
        "rule": node_file(&rule.root, prefixes),
    })
}

/// A complete task file read back by [`parse_rule_spec`].
pub fn task_spec_json(task: &LinkingTask, rule: &LinkageRule) -> Value {
    let side = |s: &SourceSpec| SourceFile {
        label: s.label.clone(),
        path: s.path.clone(),
        format: s.format,
        entity_type: s.entity_type.as_ref().map(|t| task.prefixes.render(t)),
    };
    let mut v = rule_payload(rule, &task.prefixes);
    v["id"] = Value::from(task.id.clone());
    v["source"] = serde_json::to_value(side(&task.source)).expect("plain data");
    v["target"] = serde_json::to_value(side(&task.target)).expect("plain data");
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn scenario_file() {
        let (task, rule) = parse_rule_spec(fixtures::SCENARIO_JSON).unwrap();
        assert_eq!(task.id, "initial-to-dblp");
        assert_eq!(task.source.label, "initial");
        assert_eq!(task.target.path.as_deref(), Some("dblp.rdf"));
        assert_eq!(rule.link_type, vocab::owl_same_as());
        assert_eq!(rule.threshold, 0.0);
        match &rule.root {
            RuleNode::Aggregate(a) => {
                assert_eq!(a.operator, AggregationOp::Minimum);
                assert_eq!(a.children.len(), 3);
            }
            _ => panic!("expected aggregation"),
        }
        let c = rule.comparisons();
        assert_eq!(c[0].comparator, Comparator::Levenshtein { max_distance: 3 });
        assert_eq!(c[2].comparator, Comparator::DateEquality);
        assert_eq!(c[1].target_path.len(), 2);
    }

    #[test]
    fn defaults_apply() {
        let text = r#"{"source":{"label":"a"},"target":{"label":"b"},
            "rule":{"compare":{"id":"c","sourcePath":"<http://x/p>","targetPath":"<http://x/q>","comparator":{"kind":"equality"}}}}"#;
        let (task, rule) = parse_rule_spec(text).unwrap();
        assert_eq!(rule.link_type, vocab::owl_same_as());
        assert_eq!(rule.threshold, 0.0);
        assert_eq!(task.id, "task");
    }

    #[test]
    fn unknown_comparator_is_located() {
        let text = fixtures::SCENARIO_JSON.replace("\"dateEquality\"", "\"soundex\"");
        let e = parse_rule_spec(&text).unwrap_err();
        assert!(e.location.starts_with("line "), "{e}");
        assert!(e.message.contains("soundex"), "{e}");
    }

    #[test]
    fn unbound_prefix_is_located() {
        let text = fixtures::SCENARIO_JSON.replace("akt:has-title", "nope:has-title");
        let e = parse_rule_spec(&text).unwrap_err();
        assert_eq!(e.location, "/rule/aggregate/children/0/compare/targetPath");
    }

    #[test]
    fn upper_case_names_are_accepted() {
        let text = fixtures::SCENARIO_JSON
            .replace("\"minimum\"", "\"MINIMUM\"")
            .replace("\"lowercase\"", "\"LOWERCASE\"")
            .replace("\"dateEquality\"", "\"DATE_EQUALITY\"");
        assert_eq!(
            parse_rule_spec(&text).unwrap().1,
            parse_rule_spec(fixtures::SCENARIO_JSON).unwrap().1
        );
    }

    #[test]
    fn payload_roundtrip() {
        let (task, rule) = parse_rule_spec(fixtures::SCENARIO_JSON).unwrap();
        let payload = rule_payload(&rule, &task.prefixes);
        let back = parse_rule_payload(&payload.to_string(), &PrefixMap::new()).unwrap();
        assert_eq!(back, rule);
        let full = task_spec_json(&task, &rule);
        assert_eq!(parse_rule_spec(&full.to_string()).unwrap(), (task, rule));
    }
}
