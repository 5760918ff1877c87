//! Qualitative fault tree analysis and the propagation oracle used to
//! cross-check synthesized trees.

mod equivalence;
mod eval;
mod mcs;
mod propagate;

pub use equivalence::{
    check_equivalence, Counterexample, EquivalenceOptions, EquivalenceReport, DEFAULT_SAMPLES,
    DEFAULT_SEED, EXHAUSTIVE_LIMIT,
};
pub use eval::{evaluate, CompiledTree, FailureScenario};
pub use mcs::{
    brute_force_cut_sets, brute_force_cut_sets_with, minimal_cut_sets, minimal_cut_sets_with_cap,
    CutSet, BRUTE_FORCE_MAX_EVENTS, DEFAULT_FAMILY_CAP,
};
pub use propagate::{propagate, Propagation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("unknown basic event '{0}'")]
    UnknownEvent(String),
    #[error("cut set family exceeds the limit of {cap} sets")]
    FamilyTooLarge { cap: usize },
    #[error("{events} basic events is too many for exhaustive enumeration (max {max})")]
    TooManyEvents { events: usize, max: usize },
}
