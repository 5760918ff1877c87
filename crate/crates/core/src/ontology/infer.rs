use crate::kg::{Graph, Term, Triple};

use super::Vocabulary;

/// Closes `g` under the four materialization rules:
///
/// * `partOf` is transitive;
/// * whatever produces a resource is a `Production`;
/// * whatever consumes a resource is a `Consumption`;
/// * `rdf:type` propagates along `subclassOf`.
///
/// Applied until nothing new is derived.
pub fn infer(g: &Graph, voc: &Vocabulary) -> Graph {
    let mut out = g.clone();
    loop {
        let derived = derive_once(&out, voc);
        let mut changed = false;
        for t in derived {
            changed |= out.insert(t);
        }
        if !changed {
            return out;
        }
    }
}

fn derive_once(g: &Graph, voc: &Vocabulary) -> Vec<Triple> {
    let mut out = Vec::new();

    for (a, b) in g.pairs(&voc.part_of) {
        let Term::Iri(b) = b else { continue };
        for c in g.objects(b, &voc.part_of) {
            out.push(Triple::new(a.clone(), voc.part_of.clone(), c.clone()));
        }
    }

    for (relation, class) in [
        (&voc.produces, &voc.production),
        (&voc.consumes, &voc.consumption),
    ] {
        for (f, _) in g.pairs(relation) {
            out.push(Triple::new(f.clone(), voc.rdf_type.clone(), class.clone()));
        }
    }

    for (sub, sup) in g.pairs(&voc.subclass_of) {
        for x in g.subjects(&voc.rdf_type, &Term::Iri(sub.clone())) {
            out.push(Triple::new(x.clone(), voc.rdf_type.clone(), sup.clone()));
        }
    }

    out.retain(|t| !g.contains(t));
    out
}
