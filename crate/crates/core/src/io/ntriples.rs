//! N-Triples reader and canonical writer.

use super::canonical::canonical_relabel;
use super::scanner::{BlankNodes, Scanner};
use super::ParseError;
use crate::rdf::{Graph, Iri, Literal, Term, Triple};

/// Parses an N-Triples document. Blank node labels are replaced by fresh
/// `b<n>` labels.
pub fn parse_ntriples(text: &str) -> Result<Graph, ParseError> {
    let mut sc = Scanner::new(text);
    let mut bnodes = BlankNodes::default();
    let mut graph = Graph::new();
    loop {
        sc.skip_ws_and_comments();
        if sc.at_end() {
            break;
        }
        let subject = match sc.peek() {
            Some('<') => Term::Iri(read_iri(&mut sc)?),
            Some('_') => read_bnode(&mut sc, &mut bnodes)?,
            _ => return Err(sc.unexpected("subject IRI or blank node")),
        };
        sc.skip_inline_ws();
        let predicate = match sc.peek() {
            Some('<') => read_iri(&mut sc)?,
            _ => return Err(sc.unexpected("predicate IRI")),
        };
        sc.skip_inline_ws();
        let object = match sc.peek() {
            Some('<') => Term::Iri(read_iri(&mut sc)?),
            Some('_') => read_bnode(&mut sc, &mut bnodes)?,
            Some('"') => Term::Literal(read_literal(&mut sc)?),
            _ => return Err(sc.unexpected("object term")),
        };
        sc.skip_inline_ws();
        sc.expect('.').map_err(|_| sc.unexpected("'.'"))?;
        sc.skip_inline_ws();
        if sc.peek() == Some('#') {
            while sc.peek().is_some_and(|c| c != '\n') {
                sc.bump();
            }
        }
        match sc.peek() {
            None | Some('\n') | Some('\r') => {}
            Some(_) => return Err(sc.unexpected("end of line")),
        }
        let triple = Triple::new(subject, predicate, object).map_err(|e| sc.error(e.to_string()))?;
        graph.insert(triple);
    }
    Ok(graph)
}

fn read_iri(sc: &mut Scanner) -> Result<Iri, ParseError> {
    let raw = sc.read_iri_ref()?;
    Iri::new(raw).map_err(|e| sc.error(e.to_string()))
}

fn read_bnode(sc: &mut Scanner, bnodes: &mut BlankNodes) -> Result<Term, ParseError> {
    if !sc.starts_with("_:") {
        return Err(sc.unexpected("'_:'"));
    }
    sc.advance(2);
    let label = sc.read_bnode_label()?;
    Ok(Term::BlankNode(bnodes.named(&label)))
}

fn read_literal(sc: &mut Scanner) -> Result<Literal, ParseError> {
    sc.expect('"')?;
    let mut lexical = String::new();
    loop {
        match sc.bump() {
            Some('"') => break,
            Some('\\') => lexical.push(sc.read_string_escape()?),
            Some('\n') | None => return Err(sc.error("unterminated string literal")),
            Some(c) => lexical.push(c),
        }
    }
    if sc.eat('@') {
        let tag = sc.read_langtag();
        return Literal::lang(lexical, &tag).map_err(|e| sc.error(e.to_string()));
    }
    if sc.starts_with("^^") {
        sc.advance(2);
        let dt = read_iri(sc)?;
        return Ok(Literal::typed(lexical, dt));
    }
    Ok(Literal::plain(lexical))
}

/// Canonical N-Triples: blank nodes relabelled by content, one triple per
/// line, lines sorted bytewise, LF endings.
pub fn serialize_ntriples(graph: &Graph) -> String {
    let graph = canonical_relabel(graph);
    let mut lines: Vec<String> = graph.iter().map(|t| t.to_string()).collect();
    lines.sort();
    lines.dedup();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::isomorphic;

    const LINK: &str = "<http://lars.org/Paper/001> <http://www.w3.org/2002/07/owl#sameAs> <http://dblp.rkbexplorer.com/id/conf/birthday/DaviesWS11> .";

    #[test]
    fn single_link_line() {
        let g = parse_ntriples(LINK).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(serialize_ntriples(&g), format!("{LINK}\n"));
    }

    #[test]
    fn empty_and_comment_only() {
        assert!(parse_ntriples("").unwrap().is_empty());
        assert!(parse_ntriples("# nothing\n\n").unwrap().is_empty());
        assert_eq!(serialize_ntriples(&Graph::new()), "");
    }

    #[test]
    fn missing_dot_reports_line() {
        let text = format!("{LINK}\n<http://a/s> <http://a/p> \"x\"\n");
        let err = parse_ntriples(&text).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("'.'"), "{}", err.message);
        assert!(err.column >= 1);
    }

    #[test]
    fn literal_forms() {
        let text = r#"
_:x <http://a/p> "plain" .
_:x <http://a/p> "tagged"@EN .
_:x <http://a/p> "2011"^^<http://www.w3.org/2001/XMLSchema#gYear> .
_:y <http://a/p> "esc \"q\" \\ \n é" .
_:x <http://a/q> _:y . # trailing comment
"#;
        let g = parse_ntriples(text).unwrap();
        assert_eq!(g.len(), 5);
        let lits: Vec<String> = g.iter().map(|t| t.object().to_string()).collect();
        assert!(lits.iter().any(|l| l == "\"tagged\"@en"));
        assert!(lits.iter().any(|l| l == "\"esc \\\"q\\\" \\\\ \\n é\""));
        let again = parse_ntriples(&serialize_ntriples(&g)).unwrap();
        assert!(isomorphic(&g, &again));
    }

    #[test]
    fn errors_carry_positions() {
        for bad in [
            "<http://a/s> <http://a/p> .",
            "\"lit\" <http://a/p> <http://a/o> .",
            "<relative> <http://a/p> <http://a/o> .",
            "<http://a/s> <http://a/p> \"unterminated .",
            "<http://a/s> <http://a/p> <http://a/o> . junk",
        ] {
            let err = parse_ntriples(bad).unwrap_err();
            assert!(err.line >= 1 && err.column >= 1 && !err.message.is_empty(), "{bad}");
        }
    }
}
