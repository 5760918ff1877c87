//! Functional dependency graph and redundancy groups, extracted from a
//! closed knowledge graph with the two fixed queries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::kg::{Graph, Iri};
use crate::naming::LocalNames;
use crate::ontology::Vocabulary;
use crate::query::{
    dependency_query, dependency_query_unfiltered, evaluate_query, redundancy_query,
};

/// `consumer` depends on `producer` for each resource in `resources`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DependencyEdge {
    pub consumer: Iri,
    pub producer: Iri,
    pub resources: BTreeSet<Iri>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    components: BTreeSet<Iri>,
    // consumer -> producer -> resources
    edges: BTreeMap<Iri, BTreeMap<Iri, BTreeSet<Iri>>>,
    warnings: Vec<String>,
}

impl DependencyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_component(&mut self, c: Iri) {
        self.components.insert(c);
    }

    /// Adds (or extends) the edge `consumer -> producer`. Self-dependencies
    /// are ignored and reported as `false`.
    pub fn add_dependency(&mut self, consumer: Iri, producer: Iri, resource: Iri) -> bool {
        if consumer == producer {
            return false;
        }
        self.components.insert(consumer.clone());
        self.components.insert(producer.clone());
        self.edges
            .entry(consumer)
            .or_default()
            .entry(producer)
            .or_default()
            .insert(resource);
        true
    }

    pub fn components(&self) -> &BTreeSet<Iri> {
        &self.components
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(BTreeMap::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = DependencyEdge> + '_ {
        self.edges.iter().flat_map(|(c, ps)| {
            ps.iter().map(move |(p, rs)| DependencyEdge {
                consumer: c.clone(),
                producer: p.clone(),
                resources: rs.clone(),
            })
        })
    }

    /// Producers `consumer` depends on, with the resources each supplies.
    pub fn producers_of<'a>(
        &'a self,
        consumer: &'a Iri,
    ) -> impl Iterator<Item = (&'a Iri, &'a BTreeSet<Iri>)> + 'a {
        self.edges.get(consumer).into_iter().flatten()
    }

    /// resource -> the producers supplying it to `consumer`.
    pub fn supply(&self, consumer: &Iri) -> BTreeMap<Iri, BTreeSet<Iri>> {
        let mut out: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
        for (p, rs) in self.producers_of(consumer) {
            for r in rs {
                out.entry(r.clone()).or_default().insert(p.clone());
            }
        }
        out
    }

    pub fn depends_on(&self, consumer: &Iri, producer: &Iri, resource: &Iri) -> bool {
        self.edges
            .get(consumer)
            .and_then(|ps| ps.get(producer))
            .is_some_and(|rs| rs.contains(resource))
    }

    /// Components reachable from `top` along dependency edges, `top` included.
    pub fn reachable_from(&self, top: &Iri) -> BTreeSet<Iri> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![top.clone()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            stack.extend(self.producers_of(&c).map(|(p, _)| p.clone()));
        }
        seen
    }

    /// One dependency cycle among the components reachable from `top`, if any.
    pub fn find_cycle_from(&self, top: &Iri) -> Option<Vec<Iri>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        let mut marks: BTreeMap<Iri, Mark> = BTreeMap::new();
        let mut path: Vec<Iri> = Vec::new();
        // Iterative DFS: (node, remaining producers).
        let mut stack: Vec<(Iri, Vec<Iri>)> = Vec::new();
        let children = |c: &Iri| -> Vec<Iri> {
            let mut v: Vec<Iri> = self.producers_of(c).map(|(p, _)| p.clone()).collect();
            v.reverse();
            v
        };
        marks.insert(top.clone(), Mark::Active);
        path.push(top.clone());
        stack.push((top.clone(), children(top)));
        while let Some((_, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(next) => match marks.get(&next) {
                    Some(Mark::Active) => {
                        let start = path
                            .iter()
                            .position(|c| *c == next)
                            .expect("active node is on path");
                        let mut cycle = path[start..].to_vec();
                        cycle.push(next);
                        return Some(cycle);
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(next.clone(), Mark::Active);
                        path.push(next.clone());
                        let ch = children(&next);
                        stack.push((next, ch));
                    }
                },
                None => {
                    let (done, _) = stack.pop().expect("non-empty");
                    marks.insert(done, Mark::Done);
                    path.pop();
                }
            }
        }
        None
    }
}

/// One consumer that depends on several producers for the same resource.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RedundancyGroup {
    pub consumer: Iri,
    pub resource: Iri,
    pub producers: BTreeSet<Iri>,
}

/// Runs the dependency query and builds the graph. Every `Component`
/// appears as a node, including isolated ones.
pub fn extract_dependencies(g: &Graph, voc: &Vocabulary) -> DependencyGraph {
    let mut d = DependencyGraph::new();
    for c in voc.instances(g, &voc.component) {
        d.add_component(c.clone());
    }
    for b in evaluate_query(g, &dependency_query(voc)) {
        let (Some(producer), Some(consumer), Some(resource)) =
            (b.iri("c1"), b.iri("c2"), b.iri("resource"))
        else {
            continue;
        };
        d.add_dependency(consumer.clone(), producer.clone(), resource.clone());
    }

    let mut self_loops = BTreeSet::new();
    for b in evaluate_query(g, &dependency_query_unfiltered(voc)) {
        if let (Some(c1), Some(c2), Some(r)) = (b.iri("c1"), b.iri("c2"), b.iri("resource")) {
            if c1 == c2 {
                self_loops.insert((c1.clone(), r.clone()));
            }
        }
    }
    for (c, r) in self_loops {
        d.warnings.push(format!(
            "ignored self-dependency: <{c}> supplies <{r}> to itself"
        ));
    }
    d
}

/// Runs the redundancy query and groups its rows by (consumer, resource).
///
/// Only producers that are actual dependencies in `d` are kept, so a
/// component wired to itself never shows up as its own redundant supplier.
pub fn extract_redundancy(
    g: &Graph,
    voc: &Vocabulary,
    d: &DependencyGraph,
) -> BTreeSet<RedundancyGroup> {
    let mut grouped: BTreeMap<(Iri, Iri), BTreeSet<Iri>> = BTreeMap::new();
    for b in evaluate_query(g, &redundancy_query(voc)) {
        let (Some(c1), Some(c3), Some(r), Some(c2)) =
            (b.iri("c1"), b.iri("c3"), b.iri("resource"), b.iri("c2"))
        else {
            continue;
        };
        let producers = grouped.entry((c2.clone(), r.clone())).or_default();
        for p in [c1, c3] {
            if d.depends_on(c2, p, r) {
                producers.insert(p.clone());
            }
        }
    }
    grouped
        .into_iter()
        .filter(|(_, ps)| ps.len() >= 2)
        .map(|((consumer, resource), producers)| RedundancyGroup {
            consumer,
            resource,
            producers,
        })
        .collect()
}

/// Redundancy groups read directly off the dependency graph: every
/// (consumer, resource) with two or more producers.
pub fn redundancy_from_dependencies(d: &DependencyGraph) -> BTreeSet<RedundancyGroup> {
    let mut out = BTreeSet::new();
    for c in d.components() {
        for (resource, producers) in d.supply(c) {
            if producers.len() >= 2 {
                out.insert(RedundancyGroup {
                    consumer: c.clone(),
                    resource,
                    producers,
                });
            }
        }
    }
    out
}

#[derive(Serialize)]
struct DepsJson<'a> {
    components: &'a BTreeSet<Iri>,
    edges: Vec<DependencyEdge>,
}

pub fn dependencies_to_json(d: &DependencyGraph) -> String {
    let doc = DepsJson {
        components: d.components(),
        edges: d.edges().collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn redundancy_to_json(groups: &BTreeSet<RedundancyGroup>) -> String {
    let v: Vec<&RedundancyGroup> = groups.iter().collect();
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Graphviz rendering; edges carrying a redundant resource are red.
pub fn dependencies_to_dot(d: &DependencyGraph, groups: &BTreeSet<RedundancyGroup>) -> String {
    let names = LocalNames::new(d.components().iter());
    let resource_names = LocalNames::new(
        d.edges()
            .flat_map(|e| e.resources)
            .collect::<BTreeSet<_>>()
            .iter(),
    );
    let redundant: BTreeSet<(&Iri, &Iri, &Iri)> = groups
        .iter()
        .flat_map(|g| {
            g.producers
                .iter()
                .map(move |p| (&g.consumer, p, &g.resource))
        })
        .collect();

    let mut out = String::from("digraph dependencies {\n    rankdir=TB;\n    node [shape=box];\n");
    for c in d.components() {
        let _ = writeln!(out, "    \"{}\" [tooltip=\"{}\"];", names.get(c), c);
    }
    for e in d.edges() {
        let label = e
            .resources
            .iter()
            .map(|r| resource_names.get(r))
            .collect::<Vec<_>>()
            .join(",");
        let red = e
            .resources
            .iter()
            .any(|r| redundant.contains(&(&e.consumer, &e.producer, r)));
        let style = if red {
            ", color=red, fontcolor=red"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "    \"{}\" -> \"{}\" [label=\"{}\"{}];",
            names.get(&e.consumer),
            names.get(&e.producer),
            label,
            style
        );
    }
    out.push_str("}\n");
    out
}
