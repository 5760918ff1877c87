use std::collections::{BTreeMap, BTreeSet};

use crate::depgraph::{DependencyGraph, RedundancyGroup};
use crate::kg::Iri;

/// Failure propagation over the dependency graph, independent of any
/// fault tree.
///
/// A component fails if it has an internal fault, or if for some resource
/// it consumes every supplier of that resource has failed. Suppliers come
/// from the redundancy group for (component, resource) when there is one,
/// otherwise from the dependency edges.
#[derive(Debug, Clone)]
pub struct Propagation {
    components: Vec<Iri>,
    index: BTreeMap<Iri, usize>,
    // per component: supplier index sets, one per consumed resource
    needs: Vec<Vec<Vec<usize>>>,
}

impl Propagation {
    pub fn new(d: &DependencyGraph, groups: &BTreeSet<RedundancyGroup>) -> Self {
        let mut all: BTreeSet<Iri> = d.components().clone();
        for g in groups {
            all.insert(g.consumer.clone());
            all.extend(g.producers.iter().cloned());
        }
        let components: Vec<Iri> = all.into_iter().collect();
        let index: BTreeMap<Iri, usize> = components
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();

        let mut supply: BTreeMap<(&Iri, &Iri), BTreeSet<&Iri>> = BTreeMap::new();
        let edges: Vec<_> = d.edges().collect();
        for e in &edges {
            for r in &e.resources {
                supply
                    .entry((&e.consumer, r))
                    .or_default()
                    .insert(&e.producer);
            }
        }
        for g in groups {
            supply.insert((&g.consumer, &g.resource), g.producers.iter().collect());
        }

        let mut needs = vec![Vec::new(); components.len()];
        for ((consumer, _), producers) in supply {
            if producers.is_empty() {
                continue;
            }
            needs[index[consumer]].push(producers.into_iter().map(|p| index[p]).collect());
        }
        Propagation {
            components,
            index,
            needs,
        }
    }

    pub fn components(&self) -> &[Iri] {
        &self.components
    }

    pub fn index_of(&self, c: &Iri) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Least fixpoint starting from `failed`, in place.
    pub fn close(&self, failed: &mut [bool]) {
        loop {
            let mut changed = false;
            for (c, needs) in self.needs.iter().enumerate() {
                if failed[c] {
                    continue;
                }
                if needs
                    .iter()
                    .any(|suppliers| suppliers.iter().all(|p| failed[*p]))
                {
                    failed[c] = true;
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn run(&self, internal: &BTreeSet<Iri>) -> BTreeSet<Iri> {
        let mut failed = vec![false; self.components.len()];
        for c in internal {
            if let Some(i) = self.index_of(c) {
                failed[i] = true;
            }
        }
        self.close(&mut failed);
        self.components
            .iter()
            .zip(failed)
            .filter(|(_, f)| *f)
            .map(|(c, _)| c.clone())
            .collect()
    }
}

/// The set of failed components once failures stop spreading.
pub fn propagate(
    d: &DependencyGraph,
    groups: &BTreeSet<RedundancyGroup>,
    internal: &BTreeSet<Iri>,
) -> BTreeSet<Iri> {
    Propagation::new(d, groups).run(internal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Iri {
        Iri::new(format!("http://ex/{s}")).unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<Iri> {
        xs.iter().map(|x| ex(x)).collect()
    }

    #[test]
    fn empty_start_is_empty() {
        let mut d = DependencyGraph::new();
        d.add_dependency(ex("a"), ex("b"), ex("r"));
        assert!(propagate(&d, &BTreeSet::new(), &BTreeSet::new()).is_empty());
    }

    #[test]
    fn chain_fails_downstream() {
        let mut d = DependencyGraph::new();
        d.add_dependency(ex("a"), ex("b"), ex("r"));
        d.add_dependency(ex("b"), ex("c"), ex("r"));
        assert_eq!(
            propagate(&d, &BTreeSet::new(), &set(&["c"])),
            set(&["a", "b", "c"])
        );
        assert_eq!(
            propagate(&d, &BTreeSet::new(), &set(&["b"])),
            set(&["a", "b"])
        );
    }

    #[test]
    fn redundancy_needs_all_suppliers() {
        let mut d = DependencyGraph::new();
        d.add_dependency(ex("c"), ex("p1"), ex("r"));
        d.add_dependency(ex("c"), ex("p2"), ex("r"));
        let groups: BTreeSet<_> = [RedundancyGroup {
            consumer: ex("c"),
            resource: ex("r"),
            producers: set(&["p1", "p2"]),
        }]
        .into_iter()
        .collect();
        assert_eq!(propagate(&d, &groups, &set(&["p1"])), set(&["p1"]));
        assert_eq!(
            propagate(&d, &groups, &set(&["p1", "p2"])),
            set(&["c", "p1", "p2"])
        );
    }

    #[test]
    fn cycles_do_not_self_justify() {
        let mut d = DependencyGraph::new();
        d.add_dependency(ex("a"), ex("b"), ex("r"));
        d.add_dependency(ex("b"), ex("a"), ex("r"));
        d.add_component(ex("x"));
        assert_eq!(propagate(&d, &BTreeSet::new(), &set(&["x"])), set(&["x"]));
        assert_eq!(
            propagate(&d, &BTreeSet::new(), &set(&["a"])),
            set(&["a", "b"])
        );
    }
}
