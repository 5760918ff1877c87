//! Terms, triples, graphs and the Turtle subset used to store them.

mod graph;
mod term;
mod turtle;

pub use graph::Graph;
pub use term::{Iri, Literal, Term, Triple, RDF_NS, RDF_TYPE};
pub use turtle::{parse_turtle, parse_turtle_str, serialize_turtle, serialize_turtle_string};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KgError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: undefined prefix '{prefix}:'")]
    UndefinedPrefix {
        line: usize,
        column: usize,
        prefix: String,
    },
    #[error("{line}:{column}: a literal cannot appear in {position} position")]
    LiteralPosition {
        line: usize,
        column: usize,
        position: &'static str,
    },
    #[error("invalid IRI {iri:?}: {reason}")]
    InvalidIri { iri: String, reason: &'static str },
    #[error("input is not UTF-8 (valid up to byte {0})")]
    Utf8(usize),
}
