use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::par::{self, Execution};
use crate::synthesis::{FaultTree, NodeKind};

use super::eval::CompiledTree;
use super::AnalysisError;

/// Default bound on the size of any intermediate cut-set family.
pub const DEFAULT_FAMILY_CAP: usize = 1_000_000;

/// Largest tree the brute-force enumeration accepts.
pub const BRUTE_FORCE_MAX_EVENTS: usize = 20;

/// A set of basic event ids, kept sorted. Orders by size, then
/// lexicographically, which is also the order `mcs` prints them in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutSet(Vec<String>);

impl CutSet {
    pub fn new<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = ids.into_iter().map(Into::into).collect();
        CutSet(set.into_iter().collect())
    }

    pub fn events(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for CutSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for CutSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CutSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(", "))
    }
}

/// Fixed-width bit set over basic event indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(width: usize) -> Self {
        Bits(vec![0; width.div_ceil(64).max(1)])
    }

    fn single(width: usize, i: usize) -> Self {
        let mut b = Bits::empty(width);
        b.0[i / 64] |= 1 << (i % 64);
        b
    }

    fn union(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

/// Absorption: drop every set that contains another set of the family.
fn minimize(mut family: Vec<Bits>) -> Vec<Bits> {
    family.sort_by_key(|b| b.count());
    family.dedup();
    let mut kept: Vec<Bits> = Vec::with_capacity(family.len());
    for set in family {
        if !kept.iter().any(|k| k.is_subset_of(&set)) {
            kept.push(set);
        }
    }
    kept
}

/// Exact minimal cut sets by bottom-up family expansion with absorption.
pub fn minimal_cut_sets(ft: &FaultTree) -> Result<BTreeSet<CutSet>, AnalysisError> {
    minimal_cut_sets_with_cap(ft, DEFAULT_FAMILY_CAP)
}

pub fn minimal_cut_sets_with_cap(
    ft: &FaultTree,
    cap: usize,
) -> Result<BTreeSet<CutSet>, AnalysisError> {
    let order = ft
        .topological_order()
        .expect("FaultTree invariants guarantee acyclicity");
    let events: Vec<&str> = ft.basic_events().map(|n| n.id.as_str()).collect();
    let width = events.len();
    let index = |id: &str| {
        events
            .binary_search(&id)
            .expect("basic event ids are sorted")
    };

    let mut families: std::collections::BTreeMap<&str, Vec<Bits>> = Default::default();
    for id in order {
        let node = ft.node(id).expect("ordered ids exist");
        let family = match node.kind {
            NodeKind::BasicEvent => vec![Bits::single(width, index(id))],
            NodeKind::OrGate => {
                let mut all = Vec::new();
                for c in &node.children {
                    all.extend(families[c.as_str()].iter().cloned());
                    if all.len() > cap {
                        return Err(AnalysisError::FamilyTooLarge { cap });
                    }
                }
                minimize(all)
            }
            NodeKind::AndGate => {
                let mut acc = vec![Bits::empty(width)];
                for c in &node.children {
                    let child = &families[c.as_str()];
                    if acc.len().saturating_mul(child.len()) > cap {
                        return Err(AnalysisError::FamilyTooLarge { cap });
                    }
                    let product = acc
                        .iter()
                        .flat_map(|a| child.iter().map(move |b| a.union(b)))
                        .collect();
                    acc = minimize(product);
                }
                acc
            }
        };
        families.insert(id, family);
    }

    Ok(families[ft.top()]
        .iter()
        .map(|b| CutSet::new(b.indices().map(|i| events[i])))
        .collect())
}

/// Reference implementation: try every subset of basic events and keep the
/// inclusion-minimal ones that trigger the top event.
pub fn brute_force_cut_sets(ft: &FaultTree) -> Result<BTreeSet<CutSet>, AnalysisError> {
    brute_force_cut_sets_with(ft, Execution::default())
}

pub fn brute_force_cut_sets_with(
    ft: &FaultTree,
    exec: Execution,
) -> Result<BTreeSet<CutSet>, AnalysisError> {
    let compiled = CompiledTree::new(ft);
    let n = compiled.events().len();
    if n > BRUTE_FORCE_MAX_EVENTS {
        return Err(AnalysisError::TooManyEvents {
            events: n,
            max: BRUTE_FORCE_MAX_EVENTS,
        });
    }
    // The structure function is monotone, so a triggering set is minimal
    // iff removing any single member stops triggering.
    let minimal = par::map_range(1u64 << n, exec, |mask| {
        compiled.eval_mask(mask)
            && (0..n).all(|i| mask >> i & 1 == 0 || !compiled.eval_mask(mask & !(1 << i)))
    });
    Ok(minimal
        .into_iter()
        .enumerate()
        .filter(|(_, keep)| *keep)
        .map(|(mask, _)| {
            CutSet::new(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| compiled.events()[i].as_str()),
            )
        })
        .collect())
}
