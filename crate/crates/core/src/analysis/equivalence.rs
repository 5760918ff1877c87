use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::depgraph::{DependencyGraph, RedundancyGroup};
use crate::kg::Iri;
use crate::par::{self, Execution};
use crate::synthesis::FaultTree;

use super::eval::CompiledTree;
use super::propagate::Propagation;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Up to this many reachable components every subset is checked.
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceOptions {
    pub seed: u64,
    pub samples: usize,
    pub exhaustive_limit: usize,
    pub execution: Execution,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        EquivalenceOptions {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            exhaustive_limit: EXHAUSTIVE_LIMIT,
            execution: Execution::default(),
        }
    }
}

/// A set of internally faulty components on which the tree and the
/// propagation semantics disagree about the top event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub internal: BTreeSet<Iri>,
    pub fault_tree: bool,
    pub propagation: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub top: Iri,
    pub components: Vec<Iri>,
    pub exhaustive: bool,
    /// Set when subsets were sampled.
    pub seed: Option<u64>,
    pub subsets_checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.seed {
            Some(seed) => format!("sampled (seed {seed})"),
            None => "exhaustive".to_owned(),
        };
        writeln!(f, "top: {}", self.top.local_name())?;
        writeln!(f, "components: {}", self.components.len())?;
        writeln!(f, "subsets checked: {} ({mode})", self.subsets_checked)?;
        writeln!(f, "counterexamples: {}", self.counterexamples.len())?;
        for cx in &self.counterexamples {
            let names: Vec<&str> = cx.internal.iter().map(Iri::local_name).collect();
            writeln!(
                f,
                "  {{{}}}: fault tree says {}, propagation says {}",
                names.join(", "),
                if cx.fault_tree { "fails" } else { "works" },
                if cx.propagation { "fails" } else { "works" },
            )?;
        }
        write!(
            f,
            "{}",
            if self.is_equivalent() {
                "equivalent"
            } else {
                "NOT equivalent"
            }
        )
    }
}

/// Compares the fault tree against failure propagation on subsets of the
/// components reachable from `top`: all of them when there are at most
/// `exhaustive_limit`, otherwise `samples` uniformly random ones.
///
/// A component's internal fault is the basic event whose `component` is
/// that component. Counterexamples are listed in subset order, which does
/// not depend on `execution`.
pub fn check_equivalence(
    d: &DependencyGraph,
    groups: &BTreeSet<RedundancyGroup>,
    ft: &FaultTree,
    top: &Iri,
    options: &EquivalenceOptions,
) -> EquivalenceReport {
    let components: Vec<Iri> = d.reachable_from(top).into_iter().collect();
    let n = components.len();
    let compiled = CompiledTree::new(ft);
    let propagation = Propagation::new(d, groups);

    let event_of: Vec<Option<usize>> = components
        .iter()
        .map(|c| {
            ft.basic_event_of(c)
                .and_then(|be| compiled.event_index(&be.id))
        })
        .collect();
    let slot_of: Vec<usize> = components
        .iter()
        .map(|c| {
            propagation
                .index_of(c)
                .expect("reachable components are in the graph")
        })
        .collect();
    let top_slot = propagation.index_of(top).expect("top is in the graph");

    let check = |subset: &[bool]| -> Option<Counterexample> {
        let mut events = vec![false; compiled.events().len()];
        let mut failed = vec![false; propagation.components().len()];
        for (i, &on) in subset.iter().enumerate() {
            if on {
                if let Some(e) = event_of[i] {
                    events[e] = true;
                }
                failed[slot_of[i]] = true;
            }
        }
        let by_tree = compiled.eval(&events);
        propagation.close(&mut failed);
        let by_propagation = failed[top_slot];
        (by_tree != by_propagation).then(|| Counterexample {
            internal: components
                .iter()
                .zip(subset)
                .filter(|(_, on)| **on)
                .map(|(c, _)| c.clone())
                .collect(),
            fault_tree: by_tree,
            propagation: by_propagation,
        })
    };

    let (results, exhaustive, seed): (Vec<Option<Counterexample>>, bool, Option<u64>) =
        if n <= options.exhaustive_limit {
            let results = par::map_range(1u64 << n, options.execution, |mask| {
                let subset: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                check(&subset)
            });
            (results, true, None)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            let subsets: Vec<Vec<bool>> = (0..options.samples)
                .map(|_| (0..n).map(|_| rng.gen_bool(0.5)).collect())
                .collect();
            let results = par::map_slice(&subsets, options.execution, |s| check(s));
            (results, false, Some(options.seed))
        };

    EquivalenceReport {
        top: top.clone(),
        components,
        exhaustive,
        seed,
        subsets_checked: results.len(),
        counterexamples: results.into_iter().flatten().collect(),
    }
}
