//! Edit distance over Unicode scalar values.
//!
//! Patterns of up to 64 characters use the bit-parallel recurrence of Myers
//! in Hyyrö's formulation; longer ones fall back to a two-row table.

/// Number of single-character insertions, deletions and substitutions
/// needed to turn `a` into `b`.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b)
}

pub fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    let (pattern, text) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if pattern.is_empty() {
        return text.len();
    }
    if pattern.len() <= 64 {
        bit_parallel(pattern, text)
    } else {
        two_row(pattern, text)
    }
}

struct PatternMasks {
    ascii: [u64; 128],
    other: Vec<(char, u64)>,
}

impl PatternMasks {
    fn new(pattern: &[char]) -> Self {
        let mut masks = Self {
            ascii: [0; 128],
            other: Vec::new(),
        };
        for (i, &c) in pattern.iter().enumerate() {
            let bit = 1u64 << i;
            if c.is_ascii() {
                masks.ascii[c as usize] |= bit;
            } else if let Some(entry) = masks.other.iter_mut().find(|(k, _)| *k == c) {
                entry.1 |= bit;
            } else {
                masks.other.push((c, bit));
            }
        }
        masks
    }

    fn get(&self, c: char) -> u64 {
        if c.is_ascii() {
            self.ascii[c as usize]
        } else {
            self.other.iter().find(|(k, _)| *k == c).map_or(0, |(_, m)| *m)
        }
    }
}

fn bit_parallel(pattern: &[char], text: &[char]) -> usize {
    let masks = PatternMasks::new(pattern);
    let last = 1u64 << (pattern.len() - 1);
    let mut pv = !0u64;
    let mut mv = 0u64;
    let mut score = pattern.len();
    for &c in text {
        let eq = masks.get(c);
        let xv = eq | mv;
        let xh = ((eq & pv).wrapping_add(pv) ^ pv) | eq;
        let mut ph = mv | !(xh | pv);
        let mut mh = pv & xh;
        if ph & last != 0 {
            score += 1;
        }
        if mh & last != 0 {
            score -= 1;
        }
        ph = (ph << 1) | 1;
        mh <<= 1;
        pv = mh | !(xv | ph);
        mv = ph & xv;
    }
    score
}

fn two_row(a: &[char], b: &[char]) -> usize {
    let mut prev: Vec<usize> = (0..=a.len()).collect();
    let mut cur = vec![0; a.len() + 1];
    for (j, &cb) in b.iter().enumerate() {
        cur[0] = j + 1;
        for (i, &ca) in a.iter().enumerate() {
            let sub = prev[i] + usize::from(ca != cb);
            cur[i + 1] = sub.min(prev[i + 1] + 1).min(cur[i] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[a.len()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dp_oracle(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in d.iter_mut().enumerate() {
            row[0] = i;
        }
        for (j, cell) in d[0].iter_mut().enumerate() {
            *cell = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let cost = usize::from(a[i - 1] != b[j - 1]);
                d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
            }
        }
        d[a.len()][b.len()]
    }

    #[test]
    fn titles_differ_by_one() {
        let a = "Semantic Technology and Knowledge Management";
        let b = "Semantic Technology and Knowledge Management.";
        assert_eq!(levenshtein(a, b), dp_oracle(a, b));
        assert_eq!(levenshtein(a, b), 1);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(levenshtein("abc", "abc"), 0);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("abc", ""), 3);
        assert_eq!(levenshtein("", ""), 0);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("héllo", "hello"), 1);
    }

    #[test]
    fn boundary_lengths() {
        let a64 = "a".repeat(64);
        let b64 = format!("{}b", "a".repeat(63));
        assert_eq!(levenshtein(&a64, &b64), 1);
        let long = "xy".repeat(50);
        let other = format!("{}z", "xy".repeat(49));
        assert_eq!(levenshtein(&long, &other), dp_oracle(&long, &other));
    }

    proptest! {
        #[test]
        fn matches_oracle(a in "[abc ]{0,70}", b in "[abc ]{0,70}") {
            prop_assert_eq!(levenshtein(&a, &b), dp_oracle(&a, &b));
        }

        #[test]
        fn matches_oracle_unicode(a in "\\PC{0,20}", b in "\\PC{0,20}") {
            prop_assert_eq!(levenshtein(&a, &b), dp_oracle(&a, &b));
        }

        #[test]
        fn metric_laws(a in "[ab]{0,12}", b in "[ab]{0,12}", c in "[ab]{0,12}") {
            prop_assert_eq!(levenshtein(&a, &b), levenshtein(&b, &a));
            prop_assert_eq!(levenshtein(&a, &a), 0);
            prop_assert!(levenshtein(&a, &c) <= levenshtein(&a, &b) + levenshtein(&b, &c));
            prop_assert!(levenshtein(&a, &b) <= a.chars().count().max(b.chars().count()));
        }
    }
}
