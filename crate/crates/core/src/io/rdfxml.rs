//! RDF/XML reader for the striped node/property subset used by
//! bibliographic dumps: typed node elements, `rdf:about`/`rdf:nodeID`,
//! `rdf:resource`, nested node elements, text literals with `xml:lang` and
//! `rdf:datatype`, and property attributes.

use roxmltree::{Document, Node, ParsingOptions};

use super::scanner::BlankNodes;
use super::ParseError;
use crate::rdf::vocab::{self, RDF};
use crate::rdf::{Graph, Iri, Literal, Term, Triple};

const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

pub fn parse_rdfxml(text: &str) -> Result<Graph, ParseError> {
    let options = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    let doc = Document::parse_with_options(text, options).map_err(xml_error)?;
    let mut reader = Reader {
        doc: &doc,
        bnodes: BlankNodes::default(),
        graph: Graph::new(),
    };
    reader.collect_prefixes(doc.root_element());
    let root = doc.root_element();
    if is_rdf(root, "RDF") {
        for child in root.children().filter(Node::is_element) {
            reader.node_element(child)?;
        }
    } else {
        reader.node_element(root)?;
    }
    Ok(reader.graph)
}

fn xml_error(err: roxmltree::Error) -> ParseError {
    let pos = err.pos();
    let (line, column) = (pos.row.max(1) as usize, pos.col.max(1) as usize);
    match err {
        roxmltree::Error::UnknownEntityReference(name, _) => {
            ParseError::unsupported(line, column, format!("&{name};"), "undeclared XML entity")
        }
        other => ParseError::syntax(line, column, other.to_string()),
    }
}

fn is_rdf(node: Node, local: &str) -> bool {
    node.tag_name().namespace() == Some(RDF) && node.tag_name().name() == local
}

struct Reader<'a, 'input> {
    doc: &'a Document<'input>,
    bnodes: BlankNodes,
    graph: Graph,
}

impl<'a, 'input> Reader<'a, 'input> {
    fn collect_prefixes(&mut self, root: Node) {
        for ns in root.namespaces() {
            let Ok(iri) = Iri::new(ns.uri()) else { continue };
            let label = ns.name().unwrap_or("");
            self.graph.prefixes_mut().bind_if_free(label, &iri);
        }
    }

    fn error(&self, node: Node, message: impl Into<String>) -> ParseError {
        let pos = self.doc.text_pos_at(node.range().start);
        ParseError::syntax(pos.row as usize, pos.col as usize, message)
    }

    fn unsupported(&self, node: Node, name: &str) -> ParseError {
        let pos = self.doc.text_pos_at(node.range().start);
        ParseError::unsupported(
            pos.row as usize,
            pos.col as usize,
            name,
            "construct outside the supported RDF/XML subset",
        )
    }

    fn element_iri(&self, node: Node) -> Result<Iri, ParseError> {
        let name = node.tag_name();
        let ns = name
            .namespace()
            .ok_or_else(|| self.error(node, format!("element <{}> has no namespace", name.name())))?;
        Iri::new(format!("{ns}{}", name.name())).map_err(|e| self.error(node, e.to_string()))
    }

    fn rdf_attr<'n>(&self, node: Node<'n, 'input>, local: &str) -> Option<&'n str> {
        node.attribute((RDF, local))
    }

    fn node_element(&mut self, node: Node) -> Result<Term, ParseError> {
        for forbidden in ["parseType", "ID", "bagID", "aboutEach", "aboutEachPrefix"] {
            if self.rdf_attr(node, forbidden).is_some() {
                return Err(self.unsupported(node, &format!("rdf:{forbidden}")));
            }
        }
        let subject = if let Some(about) = self.rdf_attr(node, "about") {
            Term::Iri(Iri::new(about).map_err(|e| self.error(node, e.to_string()))?)
        } else if let Some(id) = self.rdf_attr(node, "nodeID") {
            Term::BlankNode(self.bnodes.named(id))
        } else {
            Term::BlankNode(self.bnodes.fresh())
        };

        if !is_rdf(node, "Description") {
            let class = self.element_iri(node)?;
            self.emit(node, subject.clone(), vocab::rdf_type(), Term::Iri(class))?;
        }

        for attr in node.attributes() {
            let ns = attr.namespace();
            if ns == Some(XML_NS) {
                continue;
            }
            if ns == Some(RDF) {
                match attr.name() {
                    "about" | "nodeID" => continue,
                    "type" => {
                        let class = Iri::new(attr.value()).map_err(|e| self.error(node, e.to_string()))?;
                        self.emit(node, subject.clone(), vocab::rdf_type(), Term::Iri(class))?;
                        continue;
                    }
                    other => return Err(self.unsupported(node, &format!("rdf:{other}"))),
                }
            }
            let Some(ns) = ns else {
                return Err(self.error(node, format!("attribute {} has no namespace", attr.name())));
            };
            let predicate = Iri::new(format!("{ns}{}", attr.name())).map_err(|e| self.error(node, e.to_string()))?;
            let object = self.literal(node, attr.value().to_string(), None)?;
            self.emit(node, subject.clone(), predicate, object)?;
        }

        for child in node.children().filter(Node::is_element) {
            self.property_element(child, &subject)?;
        }
        Ok(subject)
    }

    fn property_element(&mut self, node: Node, subject: &Term) -> Result<(), ParseError> {
        for forbidden in ["parseType", "ID", "bagID"] {
            if self.rdf_attr(node, forbidden).is_some() {
                return Err(self.unsupported(node, &format!("rdf:{forbidden}")));
            }
        }
        if is_rdf(node, "li") {
            return Err(self.unsupported(node, "rdf:li"));
        }
        let predicate = self.element_iri(node)?;

        if let Some(resource) = self.rdf_attr(node, "resource") {
            let object = Iri::new(resource).map_err(|e| self.error(node, e.to_string()))?;
            return self.emit(node, subject.clone(), predicate, Term::Iri(object));
        }
        if let Some(id) = self.rdf_attr(node, "nodeID") {
            let object = Term::BlankNode(self.bnodes.named(id));
            return self.emit(node, subject.clone(), predicate, object);
        }

        let children: Vec<Node> = node.children().filter(Node::is_element).collect();
        match children.as_slice() {
            [] => {
                let text: String = node
                    .children()
                    .filter(|c| c.is_text())
                    .filter_map(|c| c.text())
                    .collect();
                let datatype = match self.rdf_attr(node, "datatype") {
                    Some(dt) => Some(Iri::new(dt).map_err(|e| self.error(node, e.to_string()))?),
                    None => None,
                };
                let object = self.literal(node, text, datatype)?;
                self.emit(node, subject.clone(), predicate, object)
            }
            [single] => {
                let object = self.node_element(*single)?;
                self.emit(node, subject.clone(), predicate, object)
            }
            _ => Err(self.error(node, "property element holds more than one node element")),
        }
    }

    fn literal(&self, node: Node, text: String, datatype: Option<Iri>) -> Result<Term, ParseError> {
        if let Some(dt) = datatype {
            return Ok(Term::Literal(Literal::typed(text, dt)));
        }
        match inherited_lang(node) {
            Some(lang) if !lang.is_empty() => Literal::lang(text, lang)
                .map(Term::Literal)
                .map_err(|e| self.error(node, e.to_string())),
            _ => Ok(Term::Literal(Literal::plain(text))),
        }
    }

    fn emit(&mut self, node: Node, s: Term, p: Iri, o: Term) -> Result<(), ParseError> {
        let t = Triple::new(s, p, o).map_err(|e| self.error(node, e.to_string()))?;
        self.graph.insert(t);
        Ok(())
    }
}

fn inherited_lang<'a>(node: Node<'a, '_>) -> Option<&'a str> {
    node.ancestors()
        .filter(Node::is_element)
        .find_map(|n| n.attribute((XML_NS, "lang")))
}
