//! Load, close, validate, extract and synthesize in one place, so the CLI
//! and tests run the same sequence.

use std::collections::BTreeSet;

use crate::depgraph::{extract_dependencies, extract_redundancy, DependencyGraph, RedundancyGroup};
use crate::kg::{parse_turtle, Graph, Iri, KgError};
use crate::ontology::{find_system, infer, validate, OntologyError, ValidationReport, Vocabulary};
use crate::synthesis::{synthesize, FaultTree, SynthesisError, SynthesisOptions};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] KgError),
    #[error("knowledge graph has {} validation error(s)", .0.errors.len())]
    Invalid(ValidationReport),
    #[error(transparent)]
    System(#[from] OntologyError),
    #[error("unknown top component '{0}'")]
    UnknownTop(String),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

/// An inference-closed knowledge graph and its validation report.
#[derive(Debug, Clone)]
pub struct Model {
    pub vocabulary: Vocabulary,
    pub graph: Graph,
    pub report: ValidationReport,
}

impl Model {
    /// Parses Turtle, adds the vocabulary's subclass axioms and closes the
    /// result under inference.
    pub fn from_turtle(document: &[u8], vocabulary: Vocabulary) -> Result<Model, KgError> {
        let parsed = parse_turtle(document)?;
        Ok(Model::from_graph(&parsed, vocabulary))
    }

    pub fn from_graph(g: &Graph, vocabulary: Vocabulary) -> Model {
        let mut g = g.clone();
        g.extend_from(&vocabulary.axioms());
        let graph = infer(&g, &vocabulary);
        let report = validate(&graph, &vocabulary);
        Model {
            vocabulary,
            graph,
            report,
        }
    }

    pub fn dependencies(&self) -> DependencyGraph {
        extract_dependencies(&self.graph, &self.vocabulary)
    }

    pub fn redundancy(&self, d: &DependencyGraph) -> BTreeSet<RedundancyGroup> {
        extract_redundancy(&self.graph, &self.vocabulary, d)
    }

    /// Resolves a component given as a full IRI, a prefixed name from the
    /// input document, or an unambiguous local name.
    pub fn resolve_component(&self, name: &str) -> Option<Iri> {
        let components: Vec<&Iri> = self
            .vocabulary
            .instances(&self.graph, &self.vocabulary.component)
            .collect();
        if let Some(c) = components.iter().find(|c| c.as_str() == name) {
            return Some((*c).clone());
        }
        if let Some(iri) = self.graph.expand(name) {
            if components.contains(&&iri) {
                return Some(iri);
            }
        }
        let mut by_local = components.iter().filter(|c| c.local_name() == name);
        match (by_local.next(), by_local.next()) {
            (Some(c), None) => Some((*c).clone()),
            _ => None,
        }
    }

    /// The explicit top if given, otherwise the unique system component.
    pub fn top(&self, explicit: Option<&str>) -> Result<Iri, PipelineError> {
        match explicit {
            Some(name) => self
                .resolve_component(name)
                .ok_or_else(|| PipelineError::UnknownTop(name.to_owned())),
            None => Ok(find_system(&self.graph, &self.vocabulary)?),
        }
    }
}

/// Everything produced on the way to a fault tree.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub dependencies: DependencyGraph,
    pub redundancy: BTreeSet<RedundancyGroup>,
    pub top: Iri,
    pub tree: FaultTree,
}

impl Synthesis {
    /// Dependency warnings followed by synthesis warnings.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = self.dependencies.warnings().to_vec();
        out.extend(self.tree.warnings().iter().cloned());
        out
    }
}

/// Refuses models with validation errors, then extracts and synthesizes.
pub fn run(
    model: &Model,
    top: Option<&str>,
    options: SynthesisOptions,
) -> Result<Synthesis, PipelineError> {
    if !model.report.is_ok() {
        return Err(PipelineError::Invalid(model.report.clone()));
    }
    let top = model.top(top)?;
    let dependencies = model.dependencies();
    let redundancy = model.redundancy(&dependencies);
    let tree = synthesize(&dependencies, &redundancy, &top, options)?;
    Ok(Synthesis {
        dependencies,
        redundancy,
        top,
        tree,
    })
}
