use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::kg::{Graph, Iri, Term, Triple};

use super::{OntologyError, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    NotComponent,
    HasDomain,
    HasRange,
    FunctionDomain,
    ResourceRange,
    PartofCycle,
    NoComponents,
    NoSystem,
    MultipleSystems,
    UnsatisfiedConsumption,
    NoFunctions,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::NotComponent => "NOT_COMPONENT",
            IssueCode::HasDomain => "HAS_DOMAIN",
            IssueCode::HasRange => "HAS_RANGE",
            IssueCode::FunctionDomain => "FUNCTION_DOMAIN",
            IssueCode::ResourceRange => "RESOURCE_RANGE",
            IssueCode::PartofCycle => "PARTOF_CYCLE",
            IssueCode::NoComponents => "NO_COMPONENTS",
            IssueCode::NoSystem => "NO_SYSTEM",
            IssueCode::MultipleSystems => "MULTIPLE_SYSTEMS",
            IssueCode::UnsatisfiedConsumption => "UNSATISFIED_CONSUMPTION",
            IssueCode::NoFunctions => "NO_FUNCTIONS",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub code: IssueCode,
    pub message: String,
    #[serde(serialize_with = "triples_as_strings")]
    pub triples: Vec<Triple>,
}

fn triples_as_strings<S: serde::Serializer>(ts: &[Triple], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ts.iter().map(|t| t.to_string()))
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn has(&self, code: IssueCode) -> bool {
        self.errors
            .iter()
            .chain(&self.warnings)
            .any(|i| i.code == code)
    }

    fn error(&mut self, code: IssueCode, message: String, triples: Vec<Triple>) {
        self.errors.push(Issue {
            code,
            message,
            triples,
        });
    }

    fn warn(&mut self, code: IssueCode, message: String, triples: Vec<Triple>) {
        self.warnings.push(Issue {
            code,
            message,
            triples,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        write!(
            f,
            "{} error(s), {} warning(s)",
            self.errors.len(),
            self.warnings.len()
        )
    }
}

/// Checks an inference-closed graph against the ontology's domain and
/// range constraints.
pub fn validate(g: &Graph, voc: &Vocabulary) -> ValidationReport {
    let mut report = ValidationReport::default();
    let is = |node: &Term, class: &Iri| match node {
        Term::Iri(iri) => voc.has_type(g, iri, class),
        Term::Literal(_) => false,
    };

    let components: BTreeSet<&Iri> = voc.instances(g, &voc.component).collect();
    if components.is_empty() {
        report.error(IssueCode::NoComponents, "no components".into(), vec![]);
    }

    for rel in [&voc.part_of, &voc.input_from, &voc.outputs_to] {
        for t in g.matching(None, Some(rel), None) {
            for (role, node) in [
                ("subject", Term::Iri(t.subject.clone())),
                ("object", t.object.clone()),
            ] {
                if !is(&node, &voc.component) {
                    report.error(
                        IssueCode::NotComponent,
                        format!("{role} {node} of {} is not a Component", rel.local_name()),
                        vec![t.clone()],
                    );
                }
            }
        }
    }

    for t in g.matching(None, Some(&voc.has), None) {
        if !is(&Term::Iri(t.subject.clone()), &voc.component) {
            report.error(
                IssueCode::HasDomain,
                format!("<{}> has a function but is not a Component", t.subject),
                vec![t.clone()],
            );
        }
        if !is(&t.object, &voc.function) {
            report.error(
                IssueCode::HasRange,
                format!("{} is the object of has but is not a Function", t.object),
                vec![t.clone()],
            );
        }
    }

    for rel in [&voc.produces, &voc.consumes] {
        for t in g.matching(None, Some(rel), None) {
            if !is(&Term::Iri(t.subject.clone()), &voc.function) {
                report.error(
                    IssueCode::FunctionDomain,
                    format!(
                        "<{}> {} a resource but is not a Function",
                        t.subject,
                        rel.local_name()
                    ),
                    vec![t.clone()],
                );
            }
            if !is(&t.object, &voc.resource) {
                report.error(
                    IssueCode::ResourceRange,
                    format!(
                        "{} is the object of {} but is not a Resource",
                        t.object,
                        rel.local_name()
                    ),
                    vec![t.clone()],
                );
            }
        }
    }

    for t in g.matching(None, Some(&voc.part_of), None) {
        if t.object == Term::Iri(t.subject.clone()) {
            report.error(
                IssueCode::PartofCycle,
                format!("<{}> is (transitively) part of itself", t.subject),
                vec![t.clone()],
            );
        }
    }

    let systems = system_candidates(g, voc);
    match systems.len() {
        0 if !components.is_empty() => report.warn(
            IssueCode::NoSystem,
            "every component is part of another; no system component".into(),
            vec![],
        ),
        0 | 1 => {}
        _ => report.warn(
            IssueCode::MultipleSystems,
            format!(
                "{} components are not part of anything: {}",
                systems.len(),
                systems
                    .iter()
                    .map(|s| format!("<{s}>"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            vec![],
        ),
    }

    for c in &components {
        let has_function = g.objects(c, &voc.has).next().is_some();
        let has_constituents = g
            .subjects(&voc.part_of, &Term::Iri((*c).clone()))
            .next()
            .is_some();
        if !has_function && !has_constituents {
            report.warn(
                IssueCode::NoFunctions,
                format!("atomic component <{c}> has no functions"),
                vec![],
            );
        }
    }

    unsatisfied_consumption(g, voc, &mut report);
    report
}

fn io_neighbours<'g>(g: &'g Graph, voc: &Vocabulary, c: &Iri) -> BTreeSet<&'g Iri> {
    let mut out = BTreeSet::new();
    let node = Term::Iri(c.clone());
    for rel in [&voc.input_from, &voc.outputs_to] {
        out.extend(g.objects(c, rel).filter_map(Term::as_iri));
        out.extend(g.subjects(rel, &node));
    }
    out
}

fn produces(g: &Graph, voc: &Vocabulary, c: &Iri, resource: &Term) -> bool {
    g.objects(c, &voc.has).filter_map(Term::as_iri).any(|f| {
        voc.has_type(g, f, &voc.production)
            && g.contains(&Triple::new(
                f.clone(),
                voc.produces.clone(),
                resource.clone(),
            ))
    })
}

fn unsatisfied_consumption(g: &Graph, voc: &Vocabulary, report: &mut ValidationReport) {
    for t in g.matching(None, Some(&voc.consumes), None) {
        let f = &t.subject;
        if !voc.has_type(g, f, &voc.consumption) {
            continue;
        }
        for owner in g.subjects(&voc.has, &Term::Iri(f.clone())) {
            let supplied = io_neighbours(g, voc, owner)
                .into_iter()
                .filter(|n| *n != owner && voc.has_type(g, n, &voc.component))
                .any(|n| produces(g, voc, n, &t.object));
            if !supplied {
                report.warn(
                    IssueCode::UnsatisfiedConsumption,
                    format!(
                        "<{owner}> consumes {} but no connected component produces it",
                        t.object
                    ),
                    vec![t.clone()],
                );
            }
        }
    }
}

/// Components with no outgoing `partOf`, sorted.
pub fn system_candidates(g: &Graph, voc: &Vocabulary) -> Vec<Iri> {
    voc.instances(g, &voc.component)
        .filter(|c| g.objects(c, &voc.part_of).next().is_none())
        .cloned()
        .collect()
}

/// The unique component that is not part of any other.
pub fn find_system(g: &Graph, voc: &Vocabulary) -> Result<Iri, OntologyError> {
    let mut candidates = system_candidates(g, voc);
    match candidates.len() {
        0 => Err(OntologyError::NoSystem),
        1 => Ok(candidates.pop().expect("one candidate")),
        _ => Err(OntologyError::AmbiguousSystem(candidates)),
    }
}
