//! Content-derived blank node labels.

use std::collections::{BTreeMap, HashMap};

use sha2::{Digest, Sha256};

use crate::rdf::{BlankNode, Graph, Term, Triple};

/// Relabels every blank node by a hash of its sorted outgoing triples,
/// refined once with the first-round hashes of blank-node objects. Nodes
/// whose hashes collide get an ordinal suffix in original label order.
pub fn canonical_relabel(graph: &Graph) -> Graph {
    let nodes: Vec<BlankNode> = blank_nodes(graph);
    if nodes.is_empty() {
        return graph.clone();
    }

    let placeholder = |_: &BlankNode| "_:".to_string();
    let first: HashMap<BlankNode, String> = nodes
        .iter()
        .map(|b| (b.clone(), digest(graph, b, &placeholder)))
        .collect();
    let refined = |b: &BlankNode| format!("_:{}", first[b]);
    let second: Vec<(BlankNode, String)> = nodes
        .iter()
        .map(|b| (b.clone(), digest_with_seed(graph, b, &first[b], &refined)))
        .collect();

    let mut groups: BTreeMap<String, Vec<BlankNode>> = BTreeMap::new();
    for (b, h) in second {
        groups.entry(h).or_default().push(b);
    }
    let mut relabel: HashMap<BlankNode, BlankNode> = HashMap::new();
    for (hash, mut members) in groups {
        members.sort();
        let single = members.len() == 1;
        for (i, b) in members.into_iter().enumerate() {
            let label = if single {
                format!("c{}", &hash[..16])
            } else {
                format!("c{}_{i}", &hash[..16])
            };
            relabel.insert(b, BlankNode::new(label).expect("hex label"));
        }
    }

    let map = |t: &Term| match t {
        Term::BlankNode(b) => Term::BlankNode(relabel[b].clone()),
        other => other.clone(),
    };
    let mut out = Graph::with_prefixes(graph.prefixes().clone());
    for t in graph.iter() {
        out.insert(
            Triple::new(map(t.subject()), t.predicate().clone(), map(t.object()))
                .expect("relabeling keeps subject kinds"),
        );
    }
    out
}

fn blank_nodes(graph: &Graph) -> Vec<BlankNode> {
    let mut nodes = std::collections::BTreeSet::new();
    for t in graph.iter() {
        for term in [t.subject(), t.object()] {
            if let Term::BlankNode(b) = term {
                nodes.insert(b.clone());
            }
        }
    }
    nodes.into_iter().collect()
}

fn digest(graph: &Graph, node: &BlankNode, render_bnode: &dyn Fn(&BlankNode) -> String) -> String {
    digest_with_seed(graph, node, "", render_bnode)
}

fn digest_with_seed(
    graph: &Graph,
    node: &BlankNode,
    seed: &str,
    render_bnode: &dyn Fn(&BlankNode) -> String,
) -> String {
    let subject = Term::BlankNode(node.clone());
    let mut lines: Vec<String> = graph
        .outgoing(&subject)
        .map(|(p, o)| {
            let o = match o {
                Term::BlankNode(b) => render_bnode(b),
                other => other.to_string(),
            };
            format!("{p} {o}")
        })
        .collect();
    lines.sort();
    let mut hasher = Sha256::new();
    hasher.update(seed.as_bytes());
    for line in lines {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_ntriples;
    use crate::rdf::isomorphic;

    #[test]
    fn labels_are_independent_of_input_labels() {
        let a = parse_ntriples("_:x <http://a/p> \"1\" .\n_:y <http://a/p> \"2\" .\n_:x <http://a/q> _:y .\n").unwrap();
        let b = parse_ntriples("_:k <http://a/q> _:m .\n_:m <http://a/p> \"2\" .\n_:k <http://a/p> \"1\" .\n").unwrap();
        let ca = canonical_relabel(&a);
        let cb = canonical_relabel(&b);
        assert_eq!(ca, cb);
        assert!(isomorphic(&a, &ca));
    }

    #[test]
    fn colliding_nodes_stay_distinct() {
        let g = parse_ntriples("_:x <http://a/p> \"1\" .\n_:y <http://a/p> \"1\" .\n").unwrap();
        let c = canonical_relabel(&g);
        assert_eq!(c.len(), 2);
        assert!(isomorphic(&g, &c));
    }
}
