//! Short, unique, identifier-safe names for IRIs.

use std::collections::{BTreeMap, BTreeSet};

use crate::kg::Iri;

/// Local name of `iri` with everything outside `[A-Za-z0-9_]` replaced by `_`.
pub fn sanitize(iri: &Iri) -> String {
    let s: String = iri
        .local_name()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "_".to_owned()
    } else {
        s
    }
}

/// Assigns each IRI its sanitized local name. IRIs are processed in sorted
/// order; when a name is already taken the later IRI gets `_2`, `_3`, ...
#[derive(Debug, Clone, Default)]
pub struct LocalNames {
    names: BTreeMap<Iri, String>,
}

impl LocalNames {
    pub fn new<'a>(iris: impl IntoIterator<Item = &'a Iri>) -> Self {
        let sorted: BTreeSet<&Iri> = iris.into_iter().collect();
        let mut taken = BTreeSet::new();
        let mut names = BTreeMap::new();
        for iri in sorted {
            let base = sanitize(iri);
            let mut name = base.clone();
            let mut n = 2;
            while taken.contains(&name) {
                name = format!("{base}_{n}");
                n += 1;
            }
            taken.insert(name.clone());
            names.insert(iri.clone(), name);
        }
        LocalNames { names }
    }

    /// Panics if `iri` was not registered.
    pub fn get(&self, iri: &Iri) -> &str {
        self.names
            .get(iri)
            .unwrap_or_else(|| panic!("no local name registered for <{iri}>"))
    }

    pub fn try_get(&self, iri: &Iri) -> Option<&str> {
        self.names.get(iri).map(String::as_str)
    }
}
