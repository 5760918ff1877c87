//! The Lycoming O-320 ignition model, embedded so tests and benches do not
//! depend on the working directory.

use crate::kg::Iri;
use crate::ontology::Vocabulary;
use crate::pipeline::Model;

pub const LYCOMING_TTL: &str = include_str!("../examples/lycoming_o320.ttl");

/// Namespace of the fixture's instance IRIs.
pub const LYCOMING_NS: &str = "http://ftsynth.example/lycoming#";

pub fn lycoming() -> Model {
    Model::from_turtle(LYCOMING_TTL.as_bytes(), Vocabulary::default()).expect("fixture parses")
}

/// An instance IRI of the fixture by local name.
pub fn lycoming_iri(local: &str) -> Iri {
    Iri::new(format!("{LYCOMING_NS}{local}")).expect("fixture local names are valid")
}
