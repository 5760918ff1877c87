//! The component/function/resource vocabulary, its materialization rules
//! and well-formedness checks.

mod infer;
mod validate;
mod vocab;

use crate::kg::Iri;

pub use infer::infer;
pub use validate::{find_system, system_candidates, validate, Issue, IssueCode, ValidationReport};
pub use vocab::{Vocabulary, DEFAULT_NAMESPACE, NAMESPACE_ENV};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OntologyError {
    #[error("no system component: every component is part of another")]
    NoSystem,
    #[error("ambiguous system: {} candidates ({}); choose one explicitly", .0.len(), join(.0))]
    AmbiguousSystem(Vec<Iri>),
}

fn join(iris: &[Iri]) -> String {
    iris.iter()
        .map(|i| format!("<{i}>"))
        .collect::<Vec<_>>()
        .join(", ")
}
