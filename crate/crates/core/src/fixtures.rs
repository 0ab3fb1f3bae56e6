//! Bundled sample records: a sparse initial dataset, one record each from
//! DBLP, ACM and the Semantic Web Conference Corpus, the expected link file,
//! the two enriched outputs, and the linkage task specs.
//!
//! All lars.org IRIs use the `http://lars.org/Paper/…` and
//! `http://lars.org/persons/…` bases.

pub const INITIAL_TTL: &str = include_str!("../fixtures/initial.ttl");
pub const DBLP_RDF: &str = include_str!("../fixtures/dblp.rdf");
pub const ACM_RDF: &str = include_str!("../fixtures/acm.rdf");
pub const SWC_RDF: &str = include_str!("../fixtures/swc.rdf");
pub const LINKS_DBLP_NT: &str = include_str!("../fixtures/links_dblp.nt");
pub const ENRICHED_LINKS_TTL: &str = include_str!("../fixtures/enriched_links.ttl");
pub const ENRICHED_MERGE_TTL: &str = include_str!("../fixtures/enriched_merge.ttl");
pub const SCENARIO_JSON: &str = include_str!("../fixtures/scenario.json");
pub const SCENARIO_ACM_JSON: &str = include_str!("../fixtures/scenario_acm.json");
pub const SCENARIO_SWC_JSON: &str = include_str!("../fixtures/scenario_swc.json");

pub const PAPER_001: &str = "http://lars.org/Paper/001";
pub const DBLP_DAVIES_WS11: &str = "http://dblp.rkbexplorer.com/id/conf/birthday/DaviesWS11";
pub const ACM_1060409: &str = "http://acm.rkbexplorer.com/id/1060409";
pub const SWC_PAPER: &str = "http://data.semanticweb.org/conference/eswc/2011/paper/digital-libraries/1";

/// Directory holding the fixture files on disk.
pub fn dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}
