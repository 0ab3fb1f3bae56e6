use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Iri, PrefixMap, PropertyPath, RdfError, Term};

/// A single statement. Subjects are never literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, RdfError> {
        if subject.is_literal() {
            return Err(RdfError::LiteralSubject(subject.to_string()));
        }
        Ok(Self {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

type Objects = BTreeSet<Term>;

/// An in-memory triple set indexed by subject then predicate.
///
/// Iteration order is canonical: subject, predicate, object, each compared
/// by N-Triples rendering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    spo: BTreeMap<Term, BTreeMap<Iri, Objects>>,
    len: usize,
    prefixes: PrefixMap,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_prefixes(prefixes: PrefixMap) -> Self {
        Self {
            prefixes,
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixMap {
        &mut self.prefixes
    }

    /// Returns `false` when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let (s, p, o) = triple.into_parts();
        let inserted = self.spo.entry(s).or_default().entry(p).or_default().insert(o);
        if inserted {
            self.len += 1;
        }
        inserted
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(triple.subject())
            .and_then(|po| po.get(triple.predicate()))
            .is_some_and(|objs| objs.contains(triple.object()))
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, po)| {
            po.iter().flat_map(move |(p, objs)| {
                objs.iter().map(move |o| Triple {
                    subject: s.clone(),
                    predicate: p.clone(),
                    object: o.clone(),
                })
            })
        })
    }

    pub fn subjects(&self) -> impl Iterator<Item = &Term> {
        self.spo.keys()
    }

    pub fn has_subject(&self, subject: &Term) -> bool {
        self.spo.contains_key(subject)
    }

    /// Predicate/object pairs of one subject in canonical order.
    pub fn outgoing<'a>(&'a self, subject: &Term) -> impl Iterator<Item = (&'a Iri, &'a Term)> + 'a {
        self.spo
            .get(subject)
            .into_iter()
            .flat_map(|po| po.iter().flat_map(|(p, objs)| objs.iter().map(move |o| (p, o))))
    }

    pub fn objects<'a>(&'a self, subject: &Term, predicate: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.spo
            .get(subject)
            .and_then(|po| po.get(predicate))
            .into_iter()
            .flatten()
    }

    /// All terms reachable from `root` by following `path` forward.
    pub fn eval_path(&self, root: &Term, path: &PropertyPath) -> BTreeSet<Term> {
        let mut frontier: BTreeSet<Term> = BTreeSet::from([root.clone()]);
        for step in path.steps() {
            let mut next = BTreeSet::new();
            for node in frontier.iter().filter(|t| t.is_resource()) {
                next.extend(self.objects(node, step).cloned());
            }
            if next.is_empty() {
                return next;
            }
            frontier = next;
        }
        frontier
    }

    /// Every term that appears in object position.
    pub fn object_terms(&self) -> BTreeSet<&Term> {
        self.spo.values().flat_map(|po| po.values().flatten()).collect()
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) {
        for t in triples {
            self.insert(t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}
