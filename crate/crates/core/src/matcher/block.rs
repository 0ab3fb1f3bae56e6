//! Lossless candidate generation for the rule's key comparison.
//!
//! For edit distance `m` each target value of length `l` is cut into `m + 1`
//! segments. A value within distance `m` must contain one of those segments
//! unchanged, shifted by at most `m` positions, so probing every shifted
//! substring of a source value finds every accepting target.

use std::collections::{BTreeSet, HashMap};

use crate::rule::{extract_year, AggregationOp, Comparator, Comparison, LinkageRule, RuleNode};

/// The comparison whose rejection forces the whole rule to reject: the first
/// comparison reached through first children of MINIMUM and AVERAGE nodes.
/// `None` when the rule has no such node (MAXIMUM at the top).
pub fn key_comparison(rule: &LinkageRule) -> Option<&Comparison> {
    let mut node = &rule.root;
    loop {
        match node {
            RuleNode::Compare(c) => return Some(c),
            RuleNode::Aggregate(a) => match a.operator {
                AggregationOp::Minimum | AggregationOp::Average => node = a.children.first()?,
                AggregationOp::Maximum => return None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Exact(String),
    Segment { length: usize, index: usize, text: String },
}

/// Start offsets and lengths of the `parts` segments of a string of `len`
/// characters, sizes differing by at most one.
fn segments(len: usize, parts: usize) -> impl Iterator<Item = (usize, usize)> {
    let base = len / parts;
    let longer = len % parts;
    (0..parts).scan(0, move |start, i| {
        let size = base + usize::from(i >= parts - longer);
        let seg = (*start, size);
        *start += size;
        Some(seg)
    })
}

#[derive(Debug, Clone)]
pub struct BlockIndex {
    comparator: Comparator,
    buckets: HashMap<Key, Vec<usize>>,
    lengths: BTreeSet<usize>,
}

impl BlockIndex {
    /// Indexes each target's transformed values for `key`.
    pub fn build(key: &Comparison, targets: &[BTreeSet<String>]) -> Self {
        let mut index = Self {
            comparator: key.comparator,
            buckets: HashMap::new(),
            lengths: BTreeSet::new(),
        };
        for (id, values) in targets.iter().enumerate() {
            for value in values {
                for k in index.target_keys(value) {
                    let bucket = index.buckets.entry(k).or_default();
                    if bucket.last() != Some(&id) {
                        bucket.push(id);
                    }
                }
            }
        }
        index
    }

    fn target_keys(&mut self, value: &str) -> Vec<Key> {
        match self.comparator {
            Comparator::Equality => vec![Key::Exact(value.to_string())],
            Comparator::DateEquality => extract_year(value)
                .map(|y| Key::Exact(y.to_string()))
                .into_iter()
                .collect(),
            Comparator::Levenshtein { max_distance } => {
                let chars: Vec<char> = value.chars().collect();
                self.lengths.insert(chars.len());
                segments(chars.len(), max_distance + 1)
                    .enumerate()
                    .map(|(index, (start, size))| Key::Segment {
                        length: chars.len(),
                        index,
                        text: chars[start..start + size].iter().collect(),
                    })
                    .collect()
            }
        }
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    fn lookup(&self, key: &Key, out: &mut BTreeSet<usize>) {
        if let Some(ids) = self.buckets.get(key) {
            out.extend(ids.iter().copied());
        }
    }

    /// Targets sharing at least one key with any of the source values.
    pub fn candidates(&self, values: &BTreeSet<String>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for value in values {
            match self.comparator {
                Comparator::Equality => self.lookup(&Key::Exact(value.clone()), &mut out),
                Comparator::DateEquality => {
                    if let Some(y) = extract_year(value) {
                        self.lookup(&Key::Exact(y.to_string()), &mut out);
                    }
                }
                Comparator::Levenshtein { max_distance: m } => {
                    let chars: Vec<char> = value.chars().collect();
                    let n = chars.len();
                    let lo = n.saturating_sub(m);
                    for &length in self.lengths.range(lo..=n + m) {
                        for (index, (start, size)) in segments(length, m + 1).enumerate() {
                            if size > n {
                                continue;
                            }
                            let first = start.saturating_sub(m);
                            let last = (start + m).min(n - size);
                            if first > last {
                                continue;
                            }
                            for pos in first..=last {
                                let text: String = chars[pos..pos + size].iter().collect();
                                self.lookup(&Key::Segment { length, index, text }, &mut out);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Each (source, target) index pair at most once, in order.
pub fn candidate_pairs(index: &BlockIndex, sources: &[BTreeSet<String>]) -> Vec<(usize, usize)> {
    sources
        .iter()
        .enumerate()
        .flat_map(|(s, values)| index.candidates(values).into_iter().map(move |t| (s, t)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{Iri, PropertyPath};
    use crate::rule::{compare_sets, levenshtein, Aggregation, Transformation};
    use proptest::prelude::*;

    fn comparison(comparator: Comparator) -> Comparison {
        let p = PropertyPath::single(Iri::new("http://ex.org/title").unwrap());
        Comparison {
            id: "k".into(),
            source_path: p.clone(),
            target_path: p,
            transformations: vec![Transformation::Lowercase],
            comparator,
        }
    }

    fn set(values: &[&str]) -> BTreeSet<String> {
        values.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn segment_layout() {
        assert_eq!(segments(10, 4).collect::<Vec<_>>(), [(0, 2), (2, 2), (4, 3), (7, 3)]);
        assert_eq!(segments(2, 4).collect::<Vec<_>>(), [(0, 0), (0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn equality_buckets() {
        let targets = [set(&["a"]), set(&["b"]), set(&["c"])];
        let index = BlockIndex::build(&comparison(Comparator::Equality), &targets);
        assert_eq!(index.bucket_count(), 3);
        assert_eq!(candidate_pairs(&index, &[set(&["b"])]), [(0, 1)]);
        assert!(candidate_pairs(&index, &[set(&["z"])]).is_empty());
    }

    #[test]
    fn titles_one_edit_apart_share_a_bucket() {
        let a = "semantic technology and knowledge management";
        let b = "semantic technology and knowledge management.";
        let index = BlockIndex::build(&comparison(Comparator::Levenshtein { max_distance: 3 }), &[set(&[b])]);
        assert_eq!(candidate_pairs(&index, &[set(&[a])]), [(0, 0)]);
    }

    #[test]
    fn empty_targets() {
        let index = BlockIndex::build(&comparison(Comparator::Levenshtein { max_distance: 2 }), &[]);
        assert!(index.is_empty());
        assert!(candidate_pairs(&index, &[set(&["x"])]).is_empty());
    }

    #[test]
    fn year_keys() {
        let index = BlockIndex::build(
            &comparison(Comparator::DateEquality),
            &[set(&["2005-06-01"]), set(&["n/a"])],
        );
        assert_eq!(candidate_pairs(&index, &[set(&["2005"])]), [(0, 0)]);
    }

    #[test]
    fn key_comparison_follows_conjunctions() {
        let leaf = RuleNode::Compare(comparison(Comparator::Equality));
        let agg = |operator| {
            LinkageRule::new(RuleNode::Aggregate(Aggregation {
                id: "a".into(),
                operator,
                children: vec![leaf.clone()],
                weights: None,
            }))
        };
        assert!(key_comparison(&agg(AggregationOp::Minimum)).is_some());
        assert!(key_comparison(&agg(AggregationOp::Average)).is_some());
        assert!(key_comparison(&agg(AggregationOp::Maximum)).is_none());
        assert!(key_comparison(&LinkageRule::new(leaf)).is_some());
    }

    proptest! {
        // every pair the comparison accepts must be a candidate
        #[test]
        fn levenshtein_blocking_is_lossless(
            m in 0usize..4,
            sources in proptest::collection::vec(proptest::collection::btree_set("[abc]{0,9}", 0..3), 1..12),
            targets in proptest::collection::vec(proptest::collection::btree_set("[abc]{0,9}", 0..3), 0..12),
        ) {
            let c = comparison(Comparator::Levenshtein { max_distance: m });
            let index = BlockIndex::build(&c, &targets);
            let candidates: BTreeSet<_> = candidate_pairs(&index, &sources).into_iter().collect();
            for (s, sv) in sources.iter().enumerate() {
                for (t, tv) in targets.iter().enumerate() {
                    let accepted = sv.iter().any(|a| tv.iter().any(|b| levenshtein(a, b) <= m));
                    prop_assert_eq!(accepted, compare_sets(&c.comparator, sv, tv).accept);
                    if accepted {
                        prop_assert!(candidates.contains(&(s, t)), "missed {:?} {:?}", sv, tv);
                    }
                }
            }
        }
    }
}
