//! Basic graph patterns with UNION, join and FILTER, evaluated with set
//! semantics over a [`Graph`](crate::kg::Graph).

mod eval;
mod pattern;
mod queries;

use std::collections::BTreeSet;

use crate::kg::Graph;

pub use eval::evaluate_query;
pub use pattern::{Binding, Condition, GraphPattern, PatternTerm, Query, TriplePattern, Var};
pub use queries::{dependency_query, dependency_query_unfiltered, redundancy_query};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("filter variable {0} is not bound by its inner pattern")]
    UnboundFilterVar(Var),
    #[error("projected variable {0} is not bound by the pattern")]
    UnboundProjection(Var),
    #[error("variable {0} is projected twice")]
    DuplicateProjection(Var),
    #[error("a literal cannot appear in {0} position")]
    LiteralPosition(&'static str),
}

/// Builds the query and evaluates it in one step.
pub fn evaluate(
    g: &Graph,
    pattern: GraphPattern,
    projection: Vec<Var>,
) -> Result<BTreeSet<Binding>, QueryError> {
    let query = Query::new(pattern, projection)?;
    Ok(evaluate_query(g, &query))
}
