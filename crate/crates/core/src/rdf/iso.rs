//! Graph isomorphism up to blank-node relabeling.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use super::{BlankNode, Graph, Term, Triple};

const REFINEMENT_ROUNDS: usize = 3;

/// True iff some blank-node bijection maps `a` onto `b`. Exhaustive
/// backtracking over colour-compatible candidates.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (ground_a, blank_a) = split(a);
    let (ground_b, blank_b) = split(b);
    if ground_a != ground_b || blank_a.len() != blank_b.len() {
        return false;
    }
    if blank_a.is_empty() {
        return true;
    }
    let colours_a = colour(&blank_a);
    let colours_b = colour(&blank_b);
    let histogram = |c: &BTreeMap<BlankNode, u64>| {
        let mut h: BTreeMap<u64, usize> = BTreeMap::new();
        for v in c.values() {
            *h.entry(*v).or_default() += 1;
        }
        h
    };
    if histogram(&colours_a) != histogram(&colours_b) {
        return false;
    }
    let target: BTreeSet<Triple> = blank_b.iter().cloned().collect();
    let order: Vec<BlankNode> = colours_a.keys().cloned().collect();
    let mut mapping = HashMap::new();
    let mut used = BTreeSet::new();
    search(
        &order,
        0,
        &colours_a,
        &colours_b,
        &blank_a,
        &target,
        &mut mapping,
        &mut used,
    )
}

fn split(g: &Graph) -> (BTreeSet<Triple>, Vec<Triple>) {
    let mut ground = BTreeSet::new();
    let mut blank = Vec::new();
    for t in g.iter() {
        if matches!(t.subject(), Term::BlankNode(_)) || matches!(t.object(), Term::BlankNode(_)) {
            blank.push(t);
        } else {
            ground.insert(t);
        }
    }
    (ground, blank)
}

fn colour(triples: &[Triple]) -> BTreeMap<BlankNode, u64> {
    let mut colours: BTreeMap<BlankNode, u64> = BTreeMap::new();
    for t in triples {
        for term in [t.subject(), t.object()] {
            if let Term::BlankNode(b) = term {
                colours.insert(b.clone(), 0);
            }
        }
    }
    let term_key = |term: &Term, colours: &BTreeMap<BlankNode, u64>| match term {
        Term::BlankNode(b) => format!("_:{}", colours[b]),
        other => other.to_string(),
    };
    for _ in 0..REFINEMENT_ROUNDS {
        let mut signatures: BTreeMap<BlankNode, Vec<String>> = BTreeMap::new();
        for t in triples {
            let s = term_key(t.subject(), &colours);
            let o = term_key(t.object(), &colours);
            if let Term::BlankNode(b) = t.subject() {
                signatures
                    .entry(b.clone())
                    .or_default()
                    .push(format!("out {} {}", t.predicate(), o));
            }
            if let Term::BlankNode(b) = t.object() {
                signatures
                    .entry(b.clone())
                    .or_default()
                    .push(format!("in {} {}", s, t.predicate()));
            }
        }
        for (b, mut sig) in signatures {
            sig.sort();
            let mut h = DefaultHasher::new();
            colours[&b].hash(&mut h);
            sig.hash(&mut h);
            colours.insert(b, h.finish());
        }
    }
    colours
}

#[allow(clippy::too_many_arguments)]
fn search(
    order: &[BlankNode],
    depth: usize,
    colours_a: &BTreeMap<BlankNode, u64>,
    colours_b: &BTreeMap<BlankNode, u64>,
    triples_a: &[Triple],
    target: &BTreeSet<Triple>,
    mapping: &mut HashMap<BlankNode, BlankNode>,
    used: &mut BTreeSet<BlankNode>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let node = &order[depth];
    let want = colours_a[node];
    let candidates: Vec<BlankNode> = colours_b
        .iter()
        .filter(|(b, c)| **c == want && !used.contains(*b))
        .map(|(b, _)| b.clone())
        .collect();
    for candidate in candidates {
        mapping.insert(node.clone(), candidate.clone());
        used.insert(candidate.clone());
        if consistent(node, triples_a, target, mapping)
            && search(order, depth + 1, colours_a, colours_b, triples_a, target, mapping, used)
        {
            return true;
        }
        mapping.remove(node);
        used.remove(&candidate);
    }
    false
}

/// Every triple touching `node` whose blank nodes are all mapped must map
/// into the target.
fn consistent(
    node: &BlankNode,
    triples_a: &[Triple],
    target: &BTreeSet<Triple>,
    mapping: &HashMap<BlankNode, BlankNode>,
) -> bool {
    let map_term = |term: &Term| -> Option<Term> {
        match term {
            Term::BlankNode(b) => mapping.get(b).cloned().map(Term::BlankNode),
            other => Some(other.clone()),
        }
    };
    let touches = |term: &Term| matches!(term, Term::BlankNode(b) if b == node);
    for t in triples_a.iter().filter(|t| touches(t.subject()) || touches(t.object())) {
        let (Some(s), Some(o)) = (map_term(t.subject()), map_term(t.object())) else {
            continue;
        };
        let mapped = Triple::new(s, t.predicate().clone(), o).expect("subject kind preserved");
        if !target.contains(&mapped) {
            return false;
        }
    }
    true
}
