use std::collections::BTreeSet;

use super::levenshtein::levenshtein_chars;
use super::{Comparator, MatchDecision, Transformation};

impl Transformation {
    pub fn apply(&self, value: &str) -> String {
        match self {
            Transformation::Lowercase => value.to_lowercase(),
            Transformation::Trim => value.trim().to_string(),
            Transformation::StripPunctuation => value
                .chars()
                .filter(|c| c.is_alphanumeric() || c.is_whitespace())
                .collect(),
        }
    }
}

/// Applies each transformation to every value, in order. Values that become
/// equal collapse.
pub fn apply_transformations<'a, I>(values: I, transformations: &[Transformation]) -> BTreeSet<String>
where
    I: IntoIterator<Item = &'a str>,
{
    values
        .into_iter()
        .map(|v| transformations.iter().fold(v.to_string(), |acc, t| t.apply(&acc)))
        .collect()
}

/// First run of four ASCII digits.
pub fn extract_year(value: &str) -> Option<&str> {
    let bytes = value.as_bytes();
    let mut run = 0;
    for (i, b) in bytes.iter().enumerate() {
        if b.is_ascii_digit() {
            run += 1;
            if run == 4 {
                return Some(&value[i - 3..=i]);
            }
        } else {
            run = 0;
        }
    }
    None
}

pub fn compare(comparator: &Comparator, a: &str, b: &str) -> MatchDecision {
    match comparator {
        Comparator::Equality => MatchDecision::binary(a == b),
        Comparator::DateEquality => {
            MatchDecision::binary(matches!((extract_year(a), extract_year(b)), (Some(x), Some(y)) if x == y))
        }
        Comparator::Levenshtein { max_distance } => {
            let a: Vec<char> = a.chars().collect();
            let b: Vec<char> = b.chars().collect();
            let d = levenshtein_chars(&a, &b);
            let longest = a.len().max(b.len()).max(1);
            MatchDecision {
                accept: d <= *max_distance,
                confidence: 1.0 - d as f64 / longest as f64,
            }
        }
    }
}

/// Best decision over the cross product: the most confident accepting pair,
/// or the most confident pair when none accepts. Empty sides reject.
pub fn compare_sets(comparator: &Comparator, a: &BTreeSet<String>, b: &BTreeSet<String>) -> MatchDecision {
    let mut best: Option<MatchDecision> = None;
    for x in a {
        for y in b {
            let d = compare(comparator, x, y);
            if d.accept && d.confidence >= 1.0 {
                return d;
            }
            best = Some(match best {
                Some(cur) if !d.better_than(&cur) => cur,
                _ => d,
            });
        }
    }
    best.unwrap_or(MatchDecision::REJECT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TITLE_A: &str = "Semantic Technology and Knowledge Management";
    const TITLE_B: &str = "Semantic Technology and Knowledge Management.";

    #[test]
    fn transformations() {
        assert_eq!(
            apply_transformations(["John Davies"], &[Transformation::Lowercase]),
            BTreeSet::from(["john davies".to_string()])
        );
        assert_eq!(
            apply_transformations([" x ", "x"], &[Transformation::Trim]),
            BTreeSet::from(["x".to_string()])
        );
        let s = BTreeSet::from(["A".to_string(), "b".to_string()]);
        assert_eq!(apply_transformations(s.iter().map(String::as_str), &[]), s);
        assert_eq!(Transformation::StripPunctuation.apply("a.b, c!"), "ab c");
    }

    #[test]
    fn levenshtein_comparator_on_titles() {
        let d = compare(&Comparator::Levenshtein { max_distance: 3 }, TITLE_A, TITLE_B);
        let longest = TITLE_A.chars().count().max(TITLE_B.chars().count());
        assert_eq!(longest, 45);
        assert!(d.accept);
        assert_eq!(d.confidence, 1.0 - 1.0 / longest as f64);
    }

    #[test]
    fn date_and_equality() {
        assert!(compare(&Comparator::DateEquality, "2005-06-01", "2005").accept);
        assert!(!compare(&Comparator::DateEquality, "June", "June").accept);
        assert!(!compare(&Comparator::DateEquality, "2011", "2012").accept);
        let d = compare(&Comparator::Equality, "2011", "2012");
        assert!(!d.accept);
        assert_eq!(d.confidence, 0.0);
        assert_eq!(extract_year("ab12345"), Some("1234"));
        assert_eq!(extract_year("12-345"), None);
    }

    #[test]
    fn empty_sets_reject() {
        let one = BTreeSet::from(["x".to_string()]);
        assert_eq!(
            compare_sets(&Comparator::Equality, &one, &BTreeSet::new()),
            MatchDecision::REJECT
        );
        assert_eq!(
            compare_sets(&Comparator::Equality, &BTreeSet::new(), &one),
            MatchDecision::REJECT
        );
    }

    #[test]
    fn best_pair_prefers_acceptance() {
        let a = BTreeSet::from(["abcdef".to_string(), "zzzzzz".to_string()]);
        let b = BTreeSet::from(["abcdxx".to_string(), "zzzzzy".to_string()]);
        let d = compare_sets(&Comparator::Levenshtein { max_distance: 1 }, &a, &b);
        assert!(d.accept);
        assert_eq!(d.confidence, 1.0 - 1.0 / 6.0);
    }

    proptest! {
        #[test]
        fn transformations_are_idempotent(s in "\\PC{0,24}") {
            for t in [Transformation::Lowercase, Transformation::Trim, Transformation::StripPunctuation] {
                let once = t.apply(&s);
                prop_assert_eq!(t.apply(&once), once);
            }
        }

        #[test]
        fn zero_distance_is_equality(a in "[ab]{0,6}", b in "[ab]{0,6}") {
            let lev = compare(&Comparator::Levenshtein { max_distance: 0 }, &a, &b);
            prop_assert_eq!(lev.accept, compare(&Comparator::Equality, &a, &b).accept);
        }
    }
}
