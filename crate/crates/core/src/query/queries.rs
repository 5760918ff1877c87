//! The two fixed queries that drive extraction, written as structured
//! patterns rather than SPARQL text.
//!
//! Both read the listings' `rdfs:type` as `rdf:type`. The dependency query
//! additionally projects `?resource` (the edge label) and filters
//! `?c1 != ?c2` so a component never depends on itself.

use crate::kg::Iri;
use crate::ontology::Vocabulary;

use super::{Condition, GraphPattern, PatternTerm, Query, TriplePattern, Var};

fn tp(
    s: impl Into<PatternTerm>,
    p: impl Into<PatternTerm>,
    o: impl Into<PatternTerm>,
) -> TriplePattern {
    TriplePattern::new(s, p, o)
        .expect("fixed query patterns never put literals in subject/predicate")
}

fn v(name: &str) -> Var {
    Var::new(name)
}

fn io_union(a: &str, io: &str, b: &str) -> GraphPattern {
    GraphPattern::union(
        GraphPattern::Bgp(vec![tp(v(a), v(io), v(b))]),
        GraphPattern::Bgp(vec![tp(v(b), v(io), v(a))]),
    )
}

fn typed(var: &str, class: &Iri, voc: &Vocabulary) -> TriplePattern {
    tp(v(var), voc.rdf_type.clone(), class.clone())
}

/// `component has function; function a Production; function produces ?resource`
fn production(c: &str, f: &str, voc: &Vocabulary) -> [TriplePattern; 3] {
    [
        tp(v(c), voc.has.clone(), v(f)),
        typed(f, &voc.production, voc),
        tp(v(f), voc.produces.clone(), v("resource")),
    ]
}

fn consumption(c: &str, f: &str, voc: &Vocabulary) -> [TriplePattern; 3] {
    [
        tp(v(c), voc.has.clone(), v(f)),
        typed(f, &voc.consumption, voc),
        tp(v(f), voc.consumes.clone(), v("resource")),
    ]
}

fn dependency_pattern(voc: &Vocabulary, exclude_self: bool) -> GraphPattern {
    let mut bgp = vec![
        typed("c1", &voc.component, voc),
        typed("c2", &voc.component, voc),
    ];
    bgp.extend(production("c1", "f1", voc));
    bgp.extend(consumption("c2", "f2", voc));
    let body = GraphPattern::Join(vec![GraphPattern::Bgp(bgp), io_union("c1", "io", "c2")]);
    let filtered = GraphPattern::filter(Condition::In(v("io"), voc.io_relations()), body);
    if exclude_self {
        GraphPattern::filter(Condition::NotEquals(v("c1"), v("c2")), filtered)
    } else {
        filtered
    }
}

fn dependency_projection() -> Vec<Var> {
    vec![v("c1"), v("io"), v("c2"), v("resource")]
}

/// Producer `?c1` supplies `?resource` to consumer `?c2` over an IO link `?io`.
pub fn dependency_query(voc: &Vocabulary) -> Query {
    Query::new(dependency_pattern(voc, true), dependency_projection())
        .expect("dependency query is well-formed")
}

/// The dependency query without the self-dependency filter, used to warn
/// about components that would supply themselves.
pub fn dependency_query_unfiltered(voc: &Vocabulary) -> Query {
    Query::new(dependency_pattern(voc, false), dependency_projection())
        .expect("dependency query is well-formed")
}

/// Two distinct producers `?c1`, `?c3` of the same `?resource`, both
/// IO-linked to consumer `?c2`.
pub fn redundancy_query(voc: &Vocabulary) -> Query {
    let types = vec![
        typed("c1", &voc.component, voc),
        typed("c3", &voc.component, voc),
        typed("c2", &voc.component, voc),
    ];
    let mut functions = Vec::new();
    functions.extend(production("c1", "f1", voc));
    functions.extend(production("c3", "f2", voc));
    functions.extend(consumption("c2", "f3", voc));
    let body = GraphPattern::Join(vec![
        GraphPattern::Bgp(types),
        io_union("c1", "io1", "c2"),
        io_union("c3", "io2", "c2"),
        GraphPattern::Bgp(functions),
    ]);
    let pattern = GraphPattern::filter(
        Condition::NotEquals(v("c1"), v("c3")),
        GraphPattern::filter(
            Condition::In(v("io2"), voc.io_relations()),
            GraphPattern::filter(Condition::In(v("io1"), voc.io_relations()), body),
        ),
    );
    Query::new(pattern, vec![v("c1"), v("c3"), v("resource"), v("c2")])
        .expect("redundancy query is well-formed")
}
