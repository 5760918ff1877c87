//! Fault tree synthesis from knowledge graphs of cyber-physical systems.
//!
//! A model is a set of RDF triples describing components, the functions
//! they have, the resources those functions produce and consume, and the
//! IO links between components. From it the crate derives a functional
//! dependency graph, spots redundant suppliers, and builds a fault tree of
//! OR/AND gates over per-component internal faults. The `analysis` module
//! checks the tree against a direct failure propagation over the
//! dependency graph.
//!
//! ```
//! use ftsynth::{fixtures, pipeline, synthesis::SynthesisOptions, analysis};
//!
//! let model = fixtures::lycoming();
//! let s = pipeline::run(&model, None, SynthesisOptions::default()).unwrap();
//! let mcs = analysis::minimal_cut_sets(&s.tree).unwrap();
//! assert_eq!(mcs.len(), 7);
//! ```

pub mod analysis;
pub mod depgraph;
pub mod fixtures;
pub mod kg;
pub mod naming;
pub mod ontology;
pub mod par;
pub mod pipeline;
pub mod query;
pub mod random;
pub mod synthesis;
