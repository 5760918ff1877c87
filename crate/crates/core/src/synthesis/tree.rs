use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::kg::Iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeKind {
    #[serde(rename = "be")]
    BasicEvent,
    #[serde(rename = "or")]
    OrGate,
    #[serde(rename = "and")]
    AndGate,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::BasicEvent => "be",
            NodeKind::OrGate => "or",
            NodeKind::AndGate => "and",
        }
    }

    pub fn is_gate(self) -> bool {
        self != NodeKind::BasicEvent
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FtNode {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
    pub children: Vec<String>,
    /// The component this event concerns.
    pub component: Option<Iri>,
    /// The redundantly supplied resource; AND gates only.
    pub resource: Option<Iri>,
}

impl FtNode {
    pub fn basic_event(id: impl Into<String>, label: impl Into<String>) -> Self {
        FtNode {
            id: id.into(),
            kind: NodeKind::BasicEvent,
            label: label.into(),
            children: Vec::new(),
            component: None,
            resource: None,
        }
    }

    pub fn gate(
        id: impl Into<String>,
        kind: NodeKind,
        label: impl Into<String>,
        children: Vec<String>,
    ) -> Self {
        FtNode {
            id: id.into(),
            kind,
            label: label.into(),
            children,
            component: None,
            resource: None,
        }
    }

    pub fn with_component(mut self, c: Iri) -> Self {
        self.component = Some(c);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("top node '{0}' does not exist")]
    MissingTop(String),
    #[error("node '{0}' is defined twice")]
    DuplicateNode(String),
    #[error("node '{parent}' refers to unknown child '{child}'")]
    UnknownChild { parent: String, child: String },
    #[error("node '{0}' has the wrong number of children for its kind")]
    Arity(String),
    #[error("fault tree contains a cycle through '{0}'")]
    Cycle(String),
}

/// A rooted DAG of AND/OR gates over basic events. Subtrees may be shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultTree {
    nodes: BTreeMap<String, FtNode>,
    top: String,
    warnings: Vec<String>,
}

impl FaultTree {
    /// Checks that children exist, arities match kinds and there is no cycle.
    pub fn from_nodes(top: impl Into<String>, nodes: Vec<FtNode>) -> Result<Self, TreeError> {
        let top = top.into();
        let mut map = BTreeMap::new();
        for n in nodes {
            if map.contains_key(&n.id) {
                return Err(TreeError::DuplicateNode(n.id));
            }
            map.insert(n.id.clone(), n);
        }
        let ft = FaultTree {
            nodes: map,
            top,
            warnings: Vec::new(),
        };
        ft.check()?;
        Ok(ft)
    }

    pub(crate) fn from_parts(
        top: String,
        nodes: BTreeMap<String, FtNode>,
        warnings: Vec<String>,
    ) -> Self {
        let ft = FaultTree {
            nodes,
            top,
            warnings,
        };
        debug_assert_eq!(ft.check(), Ok(()));
        ft
    }

    fn check(&self) -> Result<(), TreeError> {
        if !self.nodes.contains_key(&self.top) {
            return Err(TreeError::MissingTop(self.top.clone()));
        }
        for n in self.nodes.values() {
            if n.kind.is_gate() == n.children.is_empty() {
                return Err(TreeError::Arity(n.id.clone()));
            }
            if let Some(c) = n.children.iter().find(|c| !self.nodes.contains_key(*c)) {
                return Err(TreeError::UnknownChild {
                    parent: n.id.clone(),
                    child: c.clone(),
                });
            }
        }
        self.topological_order().map(|_| ())
    }

    /// Node ids with every child before its parents.
    pub fn topological_order(&self) -> Result<Vec<&str>, TreeError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
        let mut order = Vec::with_capacity(self.nodes.len());
        for root in self.nodes.keys() {
            if marks.contains_key(root.as_str()) {
                continue;
            }
            let mut stack: Vec<(&str, usize)> = vec![(root, 0)];
            marks.insert(root, Mark::Active);
            while let Some((id, next)) = stack.last_mut() {
                let node = &self.nodes[*id];
                if let Some(child) = node.children.get(*next) {
                    *next += 1;
                    match marks.get(child.as_str()) {
                        Some(Mark::Active) => return Err(TreeError::Cycle(child.clone())),
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(child, Mark::Active);
                            stack.push((child, 0));
                        }
                    }
                } else {
                    let done = *id;
                    marks.insert(done, Mark::Done);
                    order.push(done);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    pub fn top(&self) -> &str {
        &self.top
    }

    pub fn top_node(&self) -> &FtNode {
        &self.nodes[&self.top]
    }

    pub fn node(&self, id: &str) -> Option<&FtNode> {
        self.nodes.get(id)
    }

    /// All nodes, sorted by id.
    pub fn nodes(&self) -> impl Iterator<Item = &FtNode> {
        self.nodes.values()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn count(&self, kind: NodeKind) -> usize {
        self.nodes.values().filter(|n| n.kind == kind).count()
    }

    pub fn basic_events(&self) -> impl Iterator<Item = &FtNode> {
        self.nodes
            .values()
            .filter(|n| n.kind == NodeKind::BasicEvent)
    }

    /// The basic event standing for `component`'s internal fault.
    pub fn basic_event_of(&self, component: &Iri) -> Option<&FtNode> {
        self.basic_events()
            .find(|n| n.component.as_ref() == Some(component))
    }

    /// Ids of nodes that list `id` as a child.
    pub fn parents_of(&self, id: &str) -> BTreeSet<&str> {
        self.nodes
            .values()
            .filter(|n| n.children.iter().any(|c| c == id))
            .map(|n| n.id.as_str())
            .collect()
    }

    /// Changes a gate's kind, e.g. to build mutants. Returns `false` if
    /// `id` is not a gate or `kind` is not a gate kind.
    pub fn set_gate_kind(&mut self, id: &str, kind: NodeKind) -> bool {
        match self.nodes.get_mut(id) {
            Some(n) if n.kind.is_gate() && kind.is_gate() => {
                n.kind = kind;
                true
            }
            _ => false,
        }
    }
}
