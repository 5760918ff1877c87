use std::collections::BTreeSet;

use crate::kg::{Graph, Iri, Term};

use super::{Binding, GraphPattern, PatternTerm, Query, TriplePattern};

/// Evaluates `query` over `g` with set semantics.
pub fn evaluate_query(g: &Graph, query: &Query) -> BTreeSet<Binding> {
    eval(g, query.pattern(), vec![Binding::new()])
        .into_iter()
        .map(|b| b.project(query.projection()))
        .collect()
}

/// Solutions are extended left to right: every pattern receives the
/// partial solutions produced so far and returns their compatible
/// extensions. Without OPTIONAL or negation this equals the usual
/// bottom-up join.
fn eval(g: &Graph, pattern: &GraphPattern, input: Vec<Binding>) -> Vec<Binding> {
    match pattern {
        GraphPattern::Bgp(tps) => {
            let mut out = Vec::new();
            for b in input {
                let mut pending: Vec<&TriplePattern> = tps.iter().collect();
                extend_bgp(g, &mut pending, b, &mut out);
            }
            out
        }
        GraphPattern::Union(l, r) => {
            let mut out = eval(g, l, input.clone());
            out.extend(eval(g, r, input));
            out
        }
        GraphPattern::Join(ps) => {
            ps.iter().fold(
                input,
                |acc, p| {
                    if acc.is_empty() {
                        acc
                    } else {
                        eval(g, p, acc)
                    }
                },
            )
        }
        GraphPattern::Filter(cond, inner) => eval(g, inner, input)
            .into_iter()
            .filter(|b| cond.holds(b))
            .collect(),
    }
}

fn resolve<'a>(pt: &'a PatternTerm, b: &'a Binding) -> Option<&'a Term> {
    match pt {
        PatternTerm::Term(t) => Some(t),
        PatternTerm::Var(v) => b.get(v),
    }
}

fn bound_positions(tp: &TriplePattern, b: &Binding) -> usize {
    [&tp.subject, &tp.predicate, &tp.object]
        .into_iter()
        .filter(|pt| resolve(pt, b).is_some())
        .count()
}

fn extend_bgp(g: &Graph, pending: &mut Vec<&TriplePattern>, b: Binding, out: &mut Vec<Binding>) {
    if pending.is_empty() {
        out.push(b);
        return;
    }
    // Most-bound pattern first; ties keep written order.
    let (idx, _) = pending
        .iter()
        .enumerate()
        .max_by_key(|(i, tp)| (bound_positions(tp, &b), std::cmp::Reverse(*i)))
        .expect("non-empty");
    let tp = pending.remove(idx);

    let s = resolve(&tp.subject, &b).cloned();
    let p = resolve(&tp.predicate, &b).cloned();
    let o = resolve(&tp.object, &b).cloned();
    // A literal bound into subject/predicate position can never match.
    let s_iri: Option<Iri> = match &s {
        Some(Term::Iri(i)) => Some(i.clone()),
        Some(Term::Literal(_)) => {
            pending.insert(idx, tp);
            return;
        }
        None => None,
    };
    let p_iri: Option<Iri> = match &p {
        Some(Term::Iri(i)) => Some(i.clone()),
        Some(Term::Literal(_)) => {
            pending.insert(idx, tp);
            return;
        }
        None => None,
    };

    for t in g.matching(s_iri.as_ref(), p_iri.as_ref(), o.as_ref()) {
        let mut next = b.clone();
        let ok = bind(&mut next, &tp.subject, Term::Iri(t.subject))
            && bind(&mut next, &tp.predicate, Term::Iri(t.predicate))
            && bind(&mut next, &tp.object, t.object);
        if ok {
            extend_bgp(g, pending, next, out);
        }
    }
    pending.insert(idx, tp);
}

/// Binds a variable, or checks consistency if it is already bound
/// (the same variable may occur twice in one triple pattern).
fn bind(b: &mut Binding, pt: &PatternTerm, value: Term) -> bool {
    match pt {
        PatternTerm::Term(_) => true,
        PatternTerm::Var(v) => match b.get(v) {
            Some(existing) => *existing == value,
            None => {
                b.insert(v.clone(), value);
                true
            }
        },
    }
}
