//! Turtle reader (common subset) and grouped writer.

use super::scanner::{BlankNodes, Scanner};
use super::ParseError;
use crate::rdf::vocab::{self, RDF, XSD};
use crate::rdf::{is_valid_prefix_label, Graph, Iri, Literal, PrefixMap, Term, Triple};

/// Parses Turtle: `@prefix`/`PREFIX`, `@base`/`BASE`, `a`, `;` and `,`
/// lists, `[...]` blank nodes, `(...)` collections, quoted and long
/// strings, language tags, datatypes, numbers and booleans.
pub fn parse_turtle(text: &str) -> Result<Graph, ParseError> {
    let mut parser = TurtleParser {
        sc: Scanner::new(text),
        bnodes: BlankNodes::default(),
        graph: Graph::new(),
        base: None,
    };
    parser.document()?;
    Ok(parser.graph)
}

struct TurtleParser {
    sc: Scanner,
    bnodes: BlankNodes,
    graph: Graph,
    base: Option<String>,
}

impl TurtleParser {
    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            self.sc.skip_ws_and_comments();
            if self.sc.at_end() {
                return Ok(());
            }
            if self.sc.starts_with("@prefix") {
                self.sc.advance(7);
                self.prefix_decl()?;
                self.ws();
                self.sc.expect('.').map_err(|_| self.sc.unexpected("'.'"))?;
            } else if self.sc.starts_with("@base") {
                self.sc.advance(5);
                self.base_decl()?;
                self.ws();
                self.sc.expect('.').map_err(|_| self.sc.unexpected("'.'"))?;
            } else if self.sc.starts_with_keyword("PREFIX") {
                self.sc.advance(6);
                self.prefix_decl()?;
            } else if self.sc.starts_with_keyword("BASE") {
                self.sc.advance(4);
                self.base_decl()?;
            } else {
                self.triples()?;
                self.ws();
                self.sc.expect('.').map_err(|_| self.sc.unexpected("'.'"))?;
            }
        }
    }

    fn ws(&mut self) {
        self.sc.skip_ws_and_comments();
    }

    fn prefix_decl(&mut self) -> Result<(), ParseError> {
        self.ws();
        let mut label = String::new();
        while let Some(c) = self.sc.peek() {
            if c == ':' {
                break;
            }
            if c.is_whitespace() {
                return Err(self.sc.unexpected("':'"));
            }
            label.push(c);
            self.sc.bump();
        }
        if !is_valid_prefix_label(&label) {
            return Err(self.sc.error(format!("invalid prefix label {label:?}")));
        }
        self.sc.expect(':')?;
        self.ws();
        let ns = self.iri_ref()?;
        self.graph.prefixes_mut().bind(label, &ns);
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), ParseError> {
        self.ws();
        let base = self.iri_ref()?;
        self.base = Some(base.into_string());
        Ok(())
    }

    fn iri_ref(&mut self) -> Result<Iri, ParseError> {
        let raw = self.sc.read_iri_ref()?;
        let resolved = match (&self.base, raw.contains(':')) {
            (Some(base), false) => resolve_relative(base, &raw),
            _ => raw,
        };
        Iri::new(resolved).map_err(|e| self.sc.error(e.to_string()))
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        let subject = match self.sc.peek() {
            Some('[') => {
                let node = self.blank_node_property_list()?;
                self.ws();
                if self.sc.peek() == Some('.') {
                    return Ok(());
                }
                node
            }
            Some('(') => self.collection()?,
            _ => self.subject_term()?,
        };
        self.ws();
        self.predicate_object_list(&subject)
    }

    fn subject_term(&mut self) -> Result<Term, ParseError> {
        match self.sc.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.sc.peek_at(1) == Some(':') => self.blank_label(),
            Some(_) => Ok(Term::Iri(self.prefixed_name()?)),
            None => Err(self.sc.unexpected("subject")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), ParseError> {
        loop {
            let predicate = self.verb()?;
            self.ws();
            self.object_list(subject, &predicate)?;
            self.ws();
            if !self.sc.eat(';') {
                return Ok(());
            }
            // repeated or trailing semicolons are allowed
            loop {
                self.ws();
                if !self.sc.eat(';') {
                    break;
                }
            }
            match self.sc.peek() {
                Some('.') | Some(']') | None => return Ok(()),
                _ => {}
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, ParseError> {
        if self.sc.peek() == Some('a')
            && self
                .sc
                .peek_at(1)
                .is_none_or(|c| c.is_whitespace() || c == '<' || c == '"' || c == '[' || c == '_')
        {
            self.sc.bump();
            return Ok(vocab::rdf_type());
        }
        match self.sc.peek() {
            Some('<') => self.iri_ref(),
            Some(_) => self.prefixed_name(),
            None => Err(self.sc.unexpected("predicate")),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Iri) -> Result<(), ParseError> {
        loop {
            let object = self.object()?;
            self.emit(subject.clone(), predicate.clone(), object)?;
            self.ws();
            if !self.sc.eat(',') {
                return Ok(());
            }
            self.ws();
        }
    }

    fn emit(&mut self, s: Term, p: Iri, o: Term) -> Result<(), ParseError> {
        let t = Triple::new(s, p, o).map_err(|e| self.sc.error(e.to_string()))?;
        self.graph.insert(t);
        Ok(())
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        match self.sc.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.sc.peek_at(1) == Some(':') => self.blank_label(),
            Some('[') => self.blank_node_property_list(),
            Some('(') => self.collection(),
            Some('"') | Some('\'') => Ok(Term::Literal(self.rdf_literal()?)),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => Ok(Term::Literal(self.numeric()?)),
            Some(_) if self.sc.starts_with_bool() => Ok(Term::Literal(self.boolean())),
            Some(_) => Ok(Term::Iri(self.prefixed_name()?)),
            None => Err(self.sc.unexpected("object")),
        }
    }

    fn blank_label(&mut self) -> Result<Term, ParseError> {
        self.sc.advance(2);
        let label = self.sc.read_bnode_label()?;
        Ok(Term::BlankNode(self.bnodes.named(&label)))
    }

    fn blank_node_property_list(&mut self) -> Result<Term, ParseError> {
        self.sc.expect('[')?;
        let node = Term::BlankNode(self.bnodes.fresh());
        self.ws();
        if !self.sc.eat(']') {
            self.predicate_object_list(&node)?;
            self.ws();
            self.sc.expect(']')?;
        }
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, ParseError> {
        self.sc.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.ws();
            if self.sc.eat(')') {
                break;
            }
            items.push(self.object()?);
        }
        let nil = Term::Iri(vocab::iri(RDF, "nil"));
        let mut head = nil;
        for item in items.into_iter().rev() {
            let cell = Term::BlankNode(self.bnodes.fresh());
            self.emit(cell.clone(), vocab::iri(RDF, "first"), item)?;
            self.emit(cell.clone(), vocab::iri(RDF, "rest"), head)?;
            head = cell;
        }
        Ok(head)
    }

    fn prefixed_name(&mut self) -> Result<Iri, ParseError> {
        let mut label = String::new();
        while let Some(c) = self.sc.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_alphanumeric() || matches!(c, '_' | '-' | '.')) {
                return Err(self.sc.unexpected("prefixed name"));
            }
            label.push(c);
            self.sc.bump();
        }
        if !self.sc.eat(':') {
            return Err(self.sc.unexpected("':' in prefixed name"));
        }
        let mut local = String::new();
        while let Some(c) = self.sc.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | ':') {
                local.push(c);
                self.sc.bump();
            } else if c == '.' {
                // a dot only belongs to the name when a name char follows
                let next = self.sc.peek_at(1);
                if next.is_some_and(|n| n.is_alphanumeric() || matches!(n, '_' | '-' | ':' | '.')) {
                    local.push(c);
                    self.sc.bump();
                } else {
                    break;
                }
            } else if c == '\\' {
                self.sc.bump();
                match self.sc.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => return Err(self.sc.error("invalid escape in local name")),
                }
            } else if c == '%' {
                local.push(c);
                self.sc.bump();
                for _ in 0..2 {
                    match self.sc.bump() {
                        Some(h) if h.is_ascii_hexdigit() => local.push(h),
                        _ => return Err(self.sc.error("invalid percent escape")),
                    }
                }
            } else {
                break;
            }
        }
        let ns = self
            .graph
            .prefixes()
            .get(&label)
            .ok_or_else(|| self.sc.error(format!("unbound prefix {label:?}")))?
            .to_string();
        Iri::new(format!("{ns}{local}")).map_err(|e| self.sc.error(e.to_string()))
    }

    fn rdf_literal(&mut self) -> Result<Literal, ParseError> {
        let lexical = self.string()?;
        if self.sc.eat('@') {
            let tag = self.sc.read_langtag();
            return Literal::lang(lexical, &tag).map_err(|e| self.sc.error(e.to_string()));
        }
        if self.sc.starts_with("^^") {
            self.sc.advance(2);
            let dt = match self.sc.peek() {
                Some('<') => self.iri_ref()?,
                _ => self.prefixed_name()?,
            };
            return Ok(Literal::typed(lexical, dt));
        }
        Ok(Literal::plain(lexical))
    }

    fn string(&mut self) -> Result<String, ParseError> {
        let quote = self.sc.peek().expect("caller checked quote");
        let long: String = std::iter::repeat_n(quote, 3).collect();
        let is_long = self.sc.starts_with(&long);
        self.sc.advance(if is_long { 3 } else { 1 });
        let mut out = String::new();
        loop {
            if is_long && self.sc.starts_with(&long) {
                self.sc.advance(3);
                return Ok(out);
            }
            match self.sc.bump() {
                Some(c) if c == quote && !is_long => return Ok(out),
                Some('\\') => out.push(self.sc.read_string_escape()?),
                Some('\n') if !is_long => return Err(self.sc.error("unterminated string literal")),
                Some(c) => out.push(c),
                None => return Err(self.sc.error("unterminated string literal")),
            }
        }
    }

    fn numeric(&mut self) -> Result<Literal, ParseError> {
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.sc.peek() {
            text.push(c);
            self.sc.bump();
        }
        let mut seen_dot = false;
        let mut seen_exp = false;
        while let Some(c) = self.sc.peek() {
            if c.is_ascii_digit() {
                text.push(c);
            } else if c == '.' && !seen_dot && !seen_exp && self.sc.peek_at(1).is_some_and(|n| n.is_ascii_digit()) {
                seen_dot = true;
                text.push(c);
            } else if (c == 'e' || c == 'E') && !seen_exp {
                seen_exp = true;
                text.push(c);
                self.sc.bump();
                if let Some(s @ ('+' | '-')) = self.sc.peek() {
                    text.push(s);
                    self.sc.bump();
                }
                continue;
            } else {
                break;
            }
            self.sc.bump();
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.sc.error(format!("malformed number {text:?}")));
        }
        let dt = if seen_exp {
            "double"
        } else if seen_dot {
            "decimal"
        } else {
            "integer"
        };
        Ok(Literal::typed(text, vocab::iri(XSD, dt)))
    }

    fn boolean(&mut self) -> Literal {
        let value = if self.sc.starts_with("true") { "true" } else { "false" };
        self.sc.advance(value.len());
        Literal::typed(value, vocab::iri(XSD, "boolean"))
    }
}

impl Scanner {
    fn starts_with_bool(&self) -> bool {
        ["true", "false"].iter().any(|kw| {
            self.starts_with(kw)
                && self
                    .peek_at(kw.len())
                    .is_none_or(|c| !(c.is_alphanumeric() || c == ':' || c == '_' || c == '-'))
        })
    }
}

fn resolve_relative(base: &str, relative: &str) -> String {
    if relative.is_empty() {
        return base.to_string();
    }
    if relative.starts_with('#') {
        let stem = base.split('#').next().unwrap_or(base);
        return format!("{stem}{relative}");
    }
    match base.rfind('/') {
        Some(i) if base[..i].contains("//") || base[..i].ends_with(':') => format!("{}{relative}", &base[..=i]),
        _ => format!("{base}{relative}"),
    }
}

/// Writes bound prefixes first, then one block per subject with `;`
/// separated predicate/object pairs. `rdf:type` is written as `a` and
/// comes first in each block.
pub fn serialize_turtle(graph: &Graph) -> String {
    let prefixes = graph.prefixes();
    let mut out = String::new();
    for (label, ns) in prefixes.iter() {
        out.push_str(&format!("@prefix {label}: <{ns}> .\n"));
    }
    let rdf_type = vocab::rdf_type();
    let mut first_block = true;
    for subject in graph.subjects() {
        if !(first_block && prefixes.is_empty()) {
            out.push('\n');
        }
        first_block = false;
        out.push_str(&render_term(subject, prefixes));
        let mut pairs: Vec<(&Iri, &Term)> = graph.outgoing(subject).collect();
        pairs.sort_by_key(|(p, _)| **p != rdf_type);
        let n = pairs.len();
        for (i, (p, o)) in pairs.into_iter().enumerate() {
            let verb = if *p == rdf_type {
                "a".to_string()
            } else {
                prefixes.render(p)
            };
            out.push_str("\n    ");
            out.push_str(&verb);
            out.push(' ');
            out.push_str(&render_term(o, prefixes));
            out.push_str(if i + 1 == n { " ." } else { " ;" });
        }
        out.push('\n');
    }
    out
}

fn render_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(iri) => prefixes.render(iri),
        Term::BlankNode(b) => b.to_string(),
        Term::Literal(lit) => {
            let body = format!("\"{}\"", crate::rdf::escape_string(lit.lexical()));
            match (lit.datatype(), lit.language()) {
                (Some(dt), _) => format!("{body}^^{}", prefixes.render(dt)),
                (None, Some(lang)) => format!("{body}@{lang}"),
                (None, None) => body,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{isomorphic, PropertyPath};

    #[test]
    fn minimal_document() {
        let g = parse_turtle("@prefix ex: <http://ex/> . ex:s ex:p \"v\" .").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.prefixes().get("ex"), Some("http://ex/"));
    }

    #[test]
    fn lists_and_keywords() {
        let text = r#"
PREFIX ex: <http://ex/>
@prefix : <http://default/> .
ex:s a ex:C , ex:D ;
     ex:p "one"@EN-gb, 'two', """three
lines""" ;
     ex:n 42, -1.5, 1e3, true ;
     ex:b [ ex:q "nested" ] ;
     ex:l ( 1 2 ) ;
     :x ex:o.
_:z ex:p ex:s.
"#;
        let g = parse_turtle(text).unwrap();
        let s = Term::iri("http://ex/s").unwrap();
        let p = |l: &str| Iri::new(format!("http://ex/{l}")).unwrap();
        assert_eq!(g.objects(&s, &vocab::rdf_type()).count(), 2);
        assert_eq!(g.objects(&s, &p("p")).count(), 3);
        assert_eq!(g.objects(&s, &p("n")).count(), 4);
        let nested = PropertyPath::new(vec![p("b"), p("q")]).unwrap();
        assert_eq!(g.eval_path(&s, &nested).len(), 1);
        let lang = g
            .objects(&s, &p("p"))
            .find_map(|o| o.as_literal()?.language().map(str::to_string));
        assert_eq!(lang.as_deref(), Some("en-gb"));
        assert!(g.contains(
            &Triple::new(
                s.clone(),
                Iri::new("http://default/x").unwrap(),
                Term::iri("http://ex/o").unwrap()
            )
            .unwrap()
        ));
    }

    #[test]
    fn escapes_in_strings() {
        let g = parse_turtle(r#"<http://a/s> <http://a/p> "say \"hi\" \\ there" ."#).unwrap();
        let lit = g.iter().next().unwrap();
        assert_eq!(lit.object().as_literal().unwrap().lexical(), "say \"hi\" \\ there");
    }

    #[test]
    fn errors() {
        for bad in [
            "ex:s ex:p ex:o .",
            "@prefix ex: <http://ex/> . ex:s ex:p \"v\"",
            "<http://a/s> <http://a/p> \"open .",
            "@prefix ex: <http://ex/> . ex:s ex:p .",
        ] {
            let err = parse_turtle(bad).unwrap_err();
            assert!(err.line >= 1 && err.column >= 1 && !err.message.is_empty(), "{bad}");
        }
    }

    #[test]
    fn serializer_roundtrip_and_layout() {
        let text = r#"@prefix ex: <http://ex/> .
ex:s a ex:C ; ex:p "x\ny", "z"@de ; ex:q _:b1 ; ex:r "1"^^<http://www.w3.org/2001/XMLSchema#int> .
_:b1 ex:p <http://other/a/b> .
"#;
        let g = parse_turtle(text).unwrap();
        let out = serialize_turtle(&g);
        assert!(out.starts_with("@prefix ex: <http://ex/> .\n"));
        assert!(out.contains("ex:s\n    a ex:C ;"));
        assert!(out.contains("<http://other/a/b>"));
        assert!(isomorphic(&g, &parse_turtle(&out).unwrap()));
    }

    #[test]
    fn empty_graph_has_only_header() {
        assert_eq!(serialize_turtle(&Graph::new()), "");
        let mut g = Graph::new();
        g.prefixes_mut().bind("ex", &Iri::new("http://ex/").unwrap());
        assert_eq!(serialize_turtle(&g), "@prefix ex: <http://ex/> .\n");
    }
}
