//! Well-known vocabulary IRIs.

use super::Iri;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const DCTERMS: &str = "http://purl.org/dc/terms/";
pub const DC: &str = "http://purl.org/dc/elements/1.1/";
pub const FOAF: &str = "http://xmlns.com/foaf/0.1/";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const AKT: &str = "http://www.aktors.org/ontology/portal#";
pub const AKTS: &str = "http://www.aktors.org/ontology/support#";
pub const SWRC: &str = "http://swrc.ontoware.org/ontology#";

pub fn iri(ns: &str, local: &str) -> Iri {
    Iri::new(format!("{ns}{local}")).expect("vocabulary IRIs are valid")
}

pub fn rdf_type() -> Iri {
    iri(RDF, "type")
}

pub fn owl_same_as() -> Iri {
    iri(OWL, "sameAs")
}

pub fn rdfs_label() -> Iri {
    iri(RDFS, "label")
}
