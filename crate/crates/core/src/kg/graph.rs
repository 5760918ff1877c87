use std::collections::{BTreeMap, BTreeSet};

use super::{Iri, Term, Triple};

type Index<A, B, C> = BTreeMap<A, BTreeMap<B, BTreeSet<C>>>;

/// A set of triples plus the prefix map used to read or write them.
///
/// Three nested indexes (SPO, POS, OSP) answer any partially bound lookup.
/// Iteration is always in SPO lexicographic order. Equality compares the
/// triple sets only; prefixes are presentation.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    spo: Index<Iri, Iri, Term>,
    pos: Index<Iri, Term, Iri>,
    osp: Index<Term, Iri, Iri>,
    len: usize,
    prefixes: BTreeMap<String, Iri>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.spo == other.spo
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let Triple {
            subject,
            predicate,
            object,
        } = triple;
        let fresh = self
            .spo
            .entry(subject.clone())
            .or_default()
            .entry(predicate.clone())
            .or_default()
            .insert(object.clone());
        if !fresh {
            return false;
        }
        self.pos
            .entry(predicate.clone())
            .or_default()
            .entry(object.clone())
            .or_default()
            .insert(subject.clone());
        self.osp
            .entry(object)
            .or_default()
            .entry(subject)
            .or_default()
            .insert(predicate);
        self.len += 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(&triple.subject)
            .and_then(|p| p.get(&triple.predicate))
            .is_some_and(|o| o.contains(&triple.object))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, pm)| {
            pm.iter().flat_map(move |(p, os)| {
                os.iter()
                    .map(move |o| Triple::new(s.clone(), p.clone(), o.clone()))
            })
        })
    }

    /// All triples matching the given positions; `None` is a wildcard.
    pub fn matching<'a>(
        &'a self,
        subject: Option<&'a Iri>,
        predicate: Option<&'a Iri>,
        object: Option<&'a Term>,
    ) -> Box<dyn Iterator<Item = Triple> + 'a> {
        match (subject, predicate, object) {
            (Some(s), p, o) => {
                let Some(pm) = self.spo.get(s) else {
                    return Box::new(std::iter::empty());
                };
                Box::new(
                    pm.iter()
                        .filter(move |(pk, _)| p.is_none_or(|p| p == *pk))
                        .flat_map(move |(pk, os)| {
                            os.iter()
                                .filter(move |ok| o.is_none_or(|o| o == *ok))
                                .map(move |ok| Triple::new(s.clone(), pk.clone(), ok.clone()))
                        }),
                )
            }
            (None, Some(p), o) => {
                let Some(om) = self.pos.get(p) else {
                    return Box::new(std::iter::empty());
                };
                Box::new(
                    om.iter()
                        .filter(move |(ok, _)| o.is_none_or(|o| o == *ok))
                        .flat_map(move |(ok, ss)| {
                            ss.iter()
                                .map(move |sk| Triple::new(sk.clone(), p.clone(), ok.clone()))
                        }),
                )
            }
            (None, None, Some(o)) => {
                let Some(sm) = self.osp.get(o) else {
                    return Box::new(std::iter::empty());
                };
                Box::new(sm.iter().flat_map(move |(sk, ps)| {
                    ps.iter()
                        .map(move |pk| Triple::new(sk.clone(), pk.clone(), o.clone()))
                }))
            }
            (None, None, None) => Box::new(self.iter()),
        }
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects<'a>(
        &'a self,
        subject: &Iri,
        predicate: &Iri,
    ) -> impl Iterator<Item = &'a Term> + 'a {
        self.spo
            .get(subject)
            .and_then(|pm| pm.get(predicate))
            .into_iter()
            .flatten()
    }

    /// Subjects of `(?, predicate, object)`.
    pub fn subjects<'a>(
        &'a self,
        predicate: &Iri,
        object: &Term,
    ) -> impl Iterator<Item = &'a Iri> + 'a {
        self.pos
            .get(predicate)
            .and_then(|om| om.get(object))
            .into_iter()
            .flatten()
    }

    /// Every `(subject, object)` pair for one predicate, in POS order.
    pub fn pairs<'a>(&'a self, predicate: &Iri) -> impl Iterator<Item = (&'a Iri, &'a Term)> + 'a {
        self.pos
            .get(predicate)
            .into_iter()
            .flat_map(|om| om.iter().flat_map(|(o, ss)| ss.iter().map(move |s| (s, o))))
    }

    /// All distinct terms occurring in any position.
    pub fn terms(&self) -> BTreeSet<Term> {
        let mut out: BTreeSet<Term> = self.spo.keys().cloned().map(Term::Iri).collect();
        out.extend(self.pos.keys().cloned().map(Term::Iri));
        out.extend(self.osp.keys().cloned());
        out
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }

    pub fn set_prefix(&mut self, prefix: impl Into<String>, namespace: Iri) {
        self.prefixes.insert(prefix.into(), namespace);
    }

    /// Expands `prefix:local` against this graph's prefix map.
    pub fn expand(&self, pname: &str) -> Option<Iri> {
        let (prefix, local) = pname.split_once(':')?;
        let ns = self.prefixes.get(prefix)?;
        Iri::new(format!("{ns}{local}")).ok()
    }

    /// Set union; prefixes of `self` win on conflict.
    pub fn extend_from(&mut self, other: &Graph) {
        for t in other.iter() {
            self.insert(t);
        }
        for (p, ns) in &other.prefixes {
            self.prefixes.entry(p.clone()).or_insert_with(|| ns.clone());
        }
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.iter().all(|t| other.contains(&t))
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
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
