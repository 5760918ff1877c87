use std::collections::{BTreeMap, BTreeSet};

use crate::synthesis::{FaultTree, NodeKind};

use super::AnalysisError;

/// The set of basic events that occur.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FailureScenario {
    pub failed_bes: BTreeSet<String>,
}

impl FailureScenario {
    pub fn new<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FailureScenario {
            failed_bes: ids.into_iter().map(Into::into).collect(),
        }
    }
}

/// A fault tree flattened into index form for repeated evaluation.
/// Nodes are stored children-first, so one forward pass evaluates the DAG
/// with every node computed exactly once.
#[derive(Debug, Clone)]
pub struct CompiledTree {
    ops: Vec<Op>,
    top: usize,
    events: Vec<String>,
    event_index: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
enum Op {
    Event(usize),
    Or(Vec<usize>),
    And(Vec<usize>),
}

impl CompiledTree {
    pub fn new(ft: &FaultTree) -> Self {
        let order = ft
            .topological_order()
            .expect("FaultTree invariants guarantee acyclicity");
        let slot: BTreeMap<&str, usize> =
            order.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let events: Vec<String> = ft.basic_events().map(|n| n.id.clone()).collect();
        let event_index: BTreeMap<String, usize> = events
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let ops = order
            .iter()
            .map(|id| {
                let node = ft.node(id).expect("ordered ids exist");
                let kids = || node.children.iter().map(|c| slot[c.as_str()]).collect();
                match node.kind {
                    NodeKind::BasicEvent => Op::Event(event_index[*id]),
                    NodeKind::OrGate => Op::Or(kids()),
                    NodeKind::AndGate => Op::And(kids()),
                }
            })
            .collect();
        CompiledTree {
            ops,
            top: slot[ft.top()],
            events,
            event_index,
        }
    }

    /// Basic event ids, sorted; positions match the `failed` slice of
    /// [`CompiledTree::eval`].
    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn event_index(&self, id: &str) -> Option<usize> {
        self.event_index.get(id).copied()
    }

    pub fn eval(&self, failed: &[bool]) -> bool {
        let mut value = vec![false; self.ops.len()];
        for (i, op) in self.ops.iter().enumerate() {
            value[i] = match op {
                Op::Event(e) => failed[*e],
                Op::Or(kids) => kids.iter().any(|k| value[*k]),
                Op::And(kids) => kids.iter().all(|k| value[*k]),
            };
        }
        value[self.top]
    }

    /// Evaluates with the events whose bit is set in `mask` failed.
    pub fn eval_mask(&self, mask: u64) -> bool {
        let failed: Vec<bool> = (0..self.events.len()).map(|i| mask >> i & 1 == 1).collect();
        self.eval(&failed)
    }

    pub fn scenario_vector(&self, s: &FailureScenario) -> Result<Vec<bool>, AnalysisError> {
        let mut failed = vec![false; self.events.len()];
        for id in &s.failed_bes {
            let i = self
                .event_index(id)
                .ok_or_else(|| AnalysisError::UnknownEvent(id.clone()))?;
            failed[i] = true;
        }
        Ok(failed)
    }
}

/// Whether the top event occurs when exactly the events in `s` occur.
pub fn evaluate(ft: &FaultTree, s: &FailureScenario) -> Result<bool, AnalysisError> {
    let compiled = CompiledTree::new(ft);
    let failed = compiled.scenario_vector(s)?;
    Ok(compiled.eval(&failed))
}
