use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Iri, RdfError};

/// Prefix label to namespace bindings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrefixMap {
    bindings: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `label` to `namespace`, replacing any earlier binding.
    pub fn bind(&mut self, label: impl Into<String>, namespace: &Iri) {
        self.bindings.insert(label.into(), namespace.as_str().to_string());
    }

    /// Binds only when `label` is free. Returns whether the map now holds
    /// exactly this binding.
    pub fn bind_if_free(&mut self, label: &str, namespace: &Iri) -> bool {
        match self.bindings.get(label) {
            Some(existing) => existing == namespace.as_str(),
            None => {
                self.bindings.insert(label.to_string(), namespace.as_str().to_string());
                true
            }
        }
    }

    pub fn get(&self, label: &str) -> Option<&str> {
        self.bindings.get(label).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Copies bindings from `other` whose labels are not yet bound here.
    pub fn merge_free(&mut self, other: &PrefixMap) {
        for (label, ns) in other.iter() {
            self.bindings.entry(label.to_string()).or_insert_with(|| ns.to_string());
        }
    }

    /// `label:local` to a full IRI.
    pub fn expand(&self, compact: &str) -> Result<Iri, RdfError> {
        let Some((label, local)) = compact.split_once(':') else {
            return Err(RdfError::NotCompact(compact.to_string()));
        };
        let ns = self
            .bindings
            .get(label)
            .ok_or_else(|| RdfError::UnboundPrefix(label.to_string()))?;
        Iri::new(format!("{ns}{local}"))
    }

    /// Accepts `<full-iri>`, a bound compact name, or an absolute IRI whose
    /// scheme is not a bound prefix label.
    pub fn resolve(&self, text: &str) -> Result<Iri, RdfError> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            return Iri::new(inner);
        }
        match text.split_once(':') {
            Some((label, _)) if self.bindings.contains_key(label) => self.expand(text),
            Some((_, rest)) if rest.starts_with("//") => Iri::new(text),
            Some((label, _)) => Err(RdfError::UnboundPrefix(label.to_string())),
            None => Err(RdfError::NotCompact(text.to_string())),
        }
    }

    /// Compact form using the longest matching namespace with a safe local
    /// part, or `None`.
    pub fn compact(&self, iri: &Iri) -> Option<String> {
        self.bindings
            .iter()
            .filter_map(|(label, ns)| {
                let local = iri.as_str().strip_prefix(ns.as_str())?;
                is_safe_local(local).then_some((ns.len(), label, local))
            })
            .max_by_key(|(len, label, _)| (*len, std::cmp::Reverse(label.as_str())))
            .map(|(_, label, local)| format!("{label}:{local}"))
    }

    /// Compact form if available, `<iri>` otherwise.
    pub fn render(&self, iri: &Iri) -> String {
        self.compact(iri).unwrap_or_else(|| iri.to_string())
    }
}

/// Local parts the Turtle writer can emit without escaping.
fn is_safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
            local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
        Some(_) => false,
    }
}

pub fn is_valid_prefix_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphabetic() => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.') && !label.ends_with('.')
        }
        Some(_) => false,
    }
}
