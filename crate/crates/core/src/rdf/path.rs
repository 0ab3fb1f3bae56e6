use std::fmt;

use super::{Iri, PrefixMap, RdfError};

/// A forward-only predicate sequence, at least one step long.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropertyPath(Vec<Iri>);

impl PropertyPath {
    pub fn new(steps: Vec<Iri>) -> Result<Self, RdfError> {
        if steps.is_empty() {
            return Err(RdfError::EmptyPath);
        }
        Ok(Self(steps))
    }

    pub fn single(step: Iri) -> Self {
        Self(vec![step])
    }

    pub fn steps(&self) -> &[Iri] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> &Iri {
        &self.0[0]
    }

    pub fn last(&self) -> &Iri {
        &self.0[self.0.len() - 1]
    }

    pub fn contains(&self, step: &Iri) -> bool {
        self.0.contains(step)
    }

    pub fn extended(&self, step: Iri) -> Self {
        let mut steps = self.0.clone();
        steps.push(step);
        Self(steps)
    }

    /// Concatenation of two paths.
    pub fn join(&self, other: &PropertyPath) -> Self {
        let mut steps = self.0.clone();
        steps.extend(other.0.iter().cloned());
        Self(steps)
    }

    /// Parses "/"-joined steps. Each step is a compact name or `<iri>`.
    pub fn parse(text: &str, prefixes: &PrefixMap) -> Result<Self, RdfError> {
        let mut steps = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let (step, tail) = if rest.starts_with('<') {
                let end = rest.find('>').ok_or_else(|| RdfError::InvalidPath(text.to_string()))?;
                (&rest[..=end], &rest[end + 1..])
            } else {
                match rest.find('/') {
                    Some(i) => (&rest[..i], &rest[i..]),
                    None => (rest, ""),
                }
            };
            if step.trim().is_empty() {
                return Err(RdfError::InvalidPath(text.to_string()));
            }
            steps.push(prefixes.resolve(step)?);
            rest = match tail.strip_prefix('/') {
                Some(t) if t.trim().is_empty() => return Err(RdfError::InvalidPath(text.to_string())),
                Some(t) => t.trim_start(),
                None if tail.trim().is_empty() => "",
                None => return Err(RdfError::InvalidPath(text.to_string())),
            };
        }
        Self::new(steps)
    }

    pub fn render(&self, prefixes: &PrefixMap) -> String {
        self.0
            .iter()
            .map(|step| prefixes.render(step))
            .collect::<Vec<_>>()
            .join("/")
    }
}

impl fmt::Display for PropertyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(&PrefixMap::new()).fmt(f)
    }
}
