//! Fault tree synthesis from a dependency graph and its redundancy groups.
//!
//! Every component `c` reachable from the top becomes an OR gate "`c` fails"
//! over
//!
//! 1. its own internal-fault basic event,
//! 2. one AND gate per resource that `c` receives from a redundancy group,
//!    over the OR gates of all suppliers in that group,
//! 3. the OR gate of every producer that is the sole supplier of some
//!    resource `c` consumes.
//!
//! Gates are memoized per component, so a supplier shared by several
//! consumers is one subtree with several parents.

mod export;
mod tree;

use std::collections::{BTreeMap, BTreeSet};

use crate::depgraph::{DependencyGraph, RedundancyGroup};
use crate::kg::Iri;
use crate::naming::LocalNames;

pub use export::{to_dot, to_galileo, to_json, DEFAULT_PROBABILITY};
pub use tree::{FaultTree, FtNode, NodeKind, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthesisError {
    #[error("top component <{0}> is not in the dependency graph")]
    TopNotFound(Iri),
    #[error("cyclic functional dependency: {}", render_cycle(.0))]
    CyclicDependency(Vec<Iri>),
}

fn render_cycle(cycle: &[Iri]) -> String {
    cycle
        .iter()
        .map(|c| c.local_name())
        .collect::<Vec<_>>()
        .join(" -> ")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Expand cyclic dependencies along each path instead of rejecting them.
    /// A dependency back to a component already on the current path is
    /// treated as "cannot fail through here" and omitted with a warning.
    pub break_cycles: bool,
}

/// Deterministic node ids derived from component and resource local names.
#[derive(Debug, Clone)]
pub struct NodeNamer {
    components: LocalNames,
    resources: LocalNames,
}

impl NodeNamer {
    pub fn new(d: &DependencyGraph, groups: &BTreeSet<RedundancyGroup>) -> Self {
        let mut resources: BTreeSet<Iri> = d.edges().flat_map(|e| e.resources).collect();
        resources.extend(groups.iter().map(|g| g.resource.clone()));
        let mut components = d.components().clone();
        for g in groups {
            components.insert(g.consumer.clone());
            components.extend(g.producers.iter().cloned());
        }
        NodeNamer {
            components: LocalNames::new(&components),
            resources: LocalNames::new(&resources),
        }
    }

    pub fn component_name(&self, c: &Iri) -> &str {
        self.components.get(c)
    }

    pub fn resource_name(&self, r: &Iri) -> &str {
        self.resources.get(r)
    }

    /// `<local>.fails` for OR gates, `<local>.internal` for basic events and
    /// `<consumer>.<resource>.redundant` for AND gates (which need `resource`).
    pub fn node_id(&self, component: &Iri, resource: Option<&Iri>, kind: NodeKind) -> String {
        let c = self.component_name(component);
        match kind {
            NodeKind::OrGate => format!("{c}.fails"),
            NodeKind::BasicEvent => format!("{c}.internal"),
            NodeKind::AndGate => {
                let r = resource.expect("AND gate ids need a resource");
                format!("{c}.{}.redundant", self.resource_name(r))
            }
        }
    }
}

struct Synthesizer<'a> {
    d: &'a DependencyGraph,
    namer: NodeNamer,
    // consumer -> resource -> redundant producers
    groups: BTreeMap<&'a Iri, BTreeMap<&'a Iri, &'a BTreeSet<Iri>>>,
    // component -> members of its strongly connected component, when that
    // component is non-trivial (only computed when breaking cycles)
    scc: BTreeMap<Iri, BTreeSet<Iri>>,
    nodes: BTreeMap<String, FtNode>,
    memo: BTreeMap<(Iri, BTreeSet<Iri>), String>,
    copies: BTreeMap<Iri, usize>,
    back_edges: BTreeSet<(Iri, Iri)>,
}

impl<'a> Synthesizer<'a> {
    fn basic_event(&mut self, c: &Iri) -> String {
        let id = self.namer.node_id(c, None, NodeKind::BasicEvent);
        self.nodes.entry(id.clone()).or_insert_with(|| {
            FtNode::basic_event(
                id.clone(),
                format!("{} internal fault", self.namer.component_name(c)),
            )
            .with_component(c.clone())
        });
        id
    }

    fn fresh_id(&mut self, base: String, c: &Iri) -> String {
        let n = self.copies.get(c).copied().unwrap_or(0);
        if n == 0 {
            base
        } else {
            format!("{base}.{}", n + 1)
        }
    }

    /// Returns the id of `c`'s OR gate for the given ancestor path.
    fn expand(&mut self, c: &Iri, path: &mut Vec<Iri>) -> String {
        let context: BTreeSet<Iri> = match self.scc.get(c) {
            Some(members) => path
                .iter()
                .filter(|p| members.contains(*p))
                .cloned()
                .collect(),
            None => BTreeSet::new(),
        };
        let key = (c.clone(), context);
        if let Some(id) = self.memo.get(&key) {
            return id.clone();
        }

        path.push(c.clone());
        let mut children = vec![self.basic_event(c)];
        let supply = self.d.supply(c);
        let groups = self.groups.get(c).cloned().unwrap_or_default();

        let mut and_gates = Vec::new();
        for (resource, producers) in &groups {
            if let Some(back) = producers.iter().find(|p| path.contains(p)) {
                // One supplier can only fail through `c` itself, so under the
                // least-fixpoint reading the conjunction never holds here.
                self.back_edges.insert((c.clone(), back.clone()));
                continue;
            }
            let inputs: Vec<String> = producers.iter().map(|p| self.expand(p, path)).collect();
            and_gates.push((*resource, inputs));
        }

        let mut direct = BTreeSet::new();
        for (resource, producers) in &supply {
            if groups.contains_key(resource) {
                continue;
            }
            direct.extend(producers.iter().cloned());
        }
        let mut or_inputs = Vec::new();
        for p in direct {
            if path.contains(&p) {
                self.back_edges.insert((c.clone(), p));
                continue;
            }
            or_inputs.push(self.expand(&p, path));
        }
        path.pop();

        let and_ids: Vec<String> = and_gates
            .into_iter()
            .map(|(resource, inputs)| {
                let base = self.namer.node_id(c, Some(resource), NodeKind::AndGate);
                let id = self.fresh_id(base, c);
                let label = format!(
                    "loss of all {} suppliers to {}",
                    self.namer.resource_name(resource),
                    self.namer.component_name(c)
                );
                let mut node = FtNode::gate(id.clone(), NodeKind::AndGate, label, inputs)
                    .with_component(c.clone());
                node.resource = Some(resource.clone());
                self.nodes.insert(id.clone(), node);
                id
            })
            .collect();
        children.extend(and_ids);
        for id in or_inputs {
            if !children.contains(&id) {
                children.push(id);
            }
        }

        let base = self.namer.node_id(c, None, NodeKind::OrGate);
        let id = self.fresh_id(base, c);
        *self.copies.entry(c.clone()).or_insert(0) += 1;
        let label = format!("{} fails", self.namer.component_name(c));
        self.nodes.insert(
            id.clone(),
            FtNode::gate(id.clone(), NodeKind::OrGate, label, children).with_component(c.clone()),
        );
        self.memo.insert(key, id.clone());
        id
    }
}

/// Strongly connected components with more than one member, per member.
fn nontrivial_sccs(d: &DependencyGraph, within: &BTreeSet<Iri>) -> BTreeMap<Iri, BTreeSet<Iri>> {
    let reach: BTreeMap<&Iri, BTreeSet<Iri>> =
        within.iter().map(|c| (c, d.reachable_from(c))).collect();
    let mut out = BTreeMap::new();
    for c in within {
        let members: BTreeSet<Iri> = reach[c]
            .iter()
            .filter(|x| reach.get(x).is_some_and(|r| r.contains(c)))
            .cloned()
            .collect();
        if members.len() > 1 {
            out.insert(c.clone(), members);
        }
    }
    out
}

/// Builds the fault tree whose top event is the failure of `top`.
pub fn synthesize(
    d: &DependencyGraph,
    groups: &BTreeSet<RedundancyGroup>,
    top: &Iri,
    options: SynthesisOptions,
) -> Result<FaultTree, SynthesisError> {
    if !d.components().contains(top) {
        return Err(SynthesisError::TopNotFound(top.clone()));
    }
    let reachable = d.reachable_from(top);
    let scc = match d.find_cycle_from(top) {
        Some(cycle) if !options.break_cycles => {
            return Err(SynthesisError::CyclicDependency(cycle))
        }
        Some(_) => nontrivial_sccs(d, &reachable),
        None => BTreeMap::new(),
    };

    let mut by_consumer: BTreeMap<&Iri, BTreeMap<&Iri, &BTreeSet<Iri>>> = BTreeMap::new();
    for g in groups {
        by_consumer
            .entry(&g.consumer)
            .or_default()
            .insert(&g.resource, &g.producers);
    }

    let mut s = Synthesizer {
        d,
        namer: NodeNamer::new(d, groups),
        groups: by_consumer,
        scc,
        nodes: BTreeMap::new(),
        memo: BTreeMap::new(),
        copies: BTreeMap::new(),
        back_edges: BTreeSet::new(),
    };
    let top_id = s.expand(top, &mut Vec::new());

    let mut warnings = Vec::new();
    for (consumer, producer) in &s.back_edges {
        warnings.push(format!(
            "broke dependency cycle: omitted {} -> {}",
            s.namer.component_name(consumer),
            s.namer.component_name(producer)
        ));
    }
    for c in d.components().difference(&reachable) {
        warnings.push(format!(
            "component {} is not reachable from the top event {} and was excluded",
            s.namer.component_name(c),
            s.namer.component_name(top)
        ));
    }
    Ok(FaultTree::from_parts(top_id, s.nodes, warnings))
}
