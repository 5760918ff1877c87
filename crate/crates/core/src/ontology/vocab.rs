use crate::kg::{Graph, Iri, KgError, Term, Triple};

pub const DEFAULT_NAMESPACE: &str = "http://ftsynth.example/vocab#";

/// Environment variable that overrides the vocabulary namespace.
pub const NAMESPACE_ENV: &str = "FTSYNTH_NS";

/// Class and relation IRIs of the component/function/resource ontology,
/// all under one configurable namespace (plus `rdf:type`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    pub namespace: Iri,
    pub component: Iri,
    pub function: Iri,
    pub production: Iri,
    pub consumption: Iri,
    pub resource: Iri,
    pub part_of: Iri,
    pub has: Iri,
    pub produces: Iri,
    pub consumes: Iri,
    pub input_from: Iri,
    pub outputs_to: Iri,
    pub subclass_of: Iri,
    pub rdf_type: Iri,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary::new(DEFAULT_NAMESPACE).expect("default namespace is a valid IRI")
    }
}

impl Vocabulary {
    pub fn new(namespace: &str) -> Result<Self, KgError> {
        let term = |local: &str| Iri::new(format!("{namespace}{local}"));
        Ok(Vocabulary {
            namespace: Iri::new(namespace)?,
            component: term("Component")?,
            function: term("Function")?,
            production: term("Production")?,
            consumption: term("Consumption")?,
            resource: term("Resource")?,
            part_of: term("partOf")?,
            has: term("has")?,
            produces: term("produces")?,
            consumes: term("consumes")?,
            input_from: term("inputFrom")?,
            outputs_to: term("outputsTo")?,
            subclass_of: term("subclassOf")?,
            rdf_type: Iri::rdf_type(),
        })
    }

    /// The namespace from `FTSYNTH_NS` if set, else the default.
    pub fn from_env() -> Result<Self, KgError> {
        match std::env::var(NAMESPACE_ENV) {
            Ok(ns) if !ns.is_empty() => Vocabulary::new(&ns),
            _ => Ok(Vocabulary::default()),
        }
    }

    pub fn all(&self) -> [&Iri; 13] {
        [
            &self.component,
            &self.function,
            &self.production,
            &self.consumption,
            &self.resource,
            &self.part_of,
            &self.has,
            &self.produces,
            &self.consumes,
            &self.input_from,
            &self.outputs_to,
            &self.subclass_of,
            &self.rdf_type,
        ]
    }

    pub fn io_relations(&self) -> Vec<Iri> {
        vec![self.input_from.clone(), self.outputs_to.clone()]
    }

    /// The ontology layer: Production and Consumption as subclasses of Function.
    pub fn axioms(&self) -> Graph {
        [
            Triple::new(
                self.production.clone(),
                self.subclass_of.clone(),
                self.function.clone(),
            ),
            Triple::new(
                self.consumption.clone(),
                self.subclass_of.clone(),
                self.function.clone(),
            ),
        ]
        .into_iter()
        .collect()
    }

    pub fn has_type(&self, g: &Graph, node: &Iri, class: &Iri) -> bool {
        g.contains(&Triple::new(
            node.clone(),
            self.rdf_type.clone(),
            class.clone(),
        ))
    }

    /// All subjects typed `class`, sorted.
    pub fn instances<'g>(&self, g: &'g Graph, class: &Iri) -> impl Iterator<Item = &'g Iri> + 'g {
        g.subjects(&self.rdf_type, &Term::Iri(class.clone()))
    }
}
