//! Reference implementations that share no code with the library's query
//! engine, inference or cycle search. Everything here is deliberately
//! slow and literal.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use ftsynth::kg::{Graph, Iri, Term, Triple};
use ftsynth::query::{Binding, Condition, GraphPattern, PatternTerm, TriplePattern, Var};

/// One branch of a pattern after distributing unions: a conjunction of
/// triple patterns plus the filters that apply to it.
#[derive(Clone, Debug, Default)]
pub struct Conjunct {
    pub triples: Vec<TriplePattern>,
    pub conditions: Vec<Condition>,
}

pub fn dnf(p: &GraphPattern) -> Vec<Conjunct> {
    match p {
        GraphPattern::Bgp(ts) => vec![Conjunct {
            triples: ts.clone(),
            conditions: vec![],
        }],
        GraphPattern::Union(a, b) => {
            let mut out = dnf(a);
            out.extend(dnf(b));
            out
        }
        GraphPattern::Join(parts) => {
            let mut acc = vec![Conjunct::default()];
            for part in parts {
                let branches = dnf(part);
                let mut next = Vec::new();
                for a in &acc {
                    for b in &branches {
                        let mut c = a.clone();
                        c.triples.extend(b.triples.iter().cloned());
                        c.conditions.extend(b.conditions.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        GraphPattern::Filter(cond, inner) => dnf(inner)
            .into_iter()
            .map(|mut c| {
                c.conditions.push(cond.clone());
                c
            })
            .collect(),
    }
}

fn conjunct_vars(c: &Conjunct) -> Vec<Var> {
    let mut vars = BTreeSet::new();
    for t in &c.triples {
        for pt in [&t.subject, &t.predicate, &t.object] {
            if let PatternTerm::Var(v) = pt {
                vars.insert(v.clone());
            }
        }
    }
    vars.into_iter().collect()
}

fn resolve(pt: &PatternTerm, a: &BTreeMap<Var, Term>) -> Option<Term> {
    match pt {
        PatternTerm::Var(v) => a.get(v).cloned(),
        PatternTerm::Term(t) => Some(t.clone()),
    }
}

fn ground(t: &TriplePattern, a: &BTreeMap<Var, Term>) -> Option<Triple> {
    let s = resolve(&t.subject, a)?;
    let p = resolve(&t.predicate, a)?;
    let o = resolve(&t.object, a)?;
    match (s, p) {
        (Term::Iri(s), Term::Iri(p)) => Some(Triple::new(s, p, o)),
        _ => None,
    }
}

fn condition_holds(c: &Condition, a: &BTreeMap<Var, Term>) -> bool {
    match c {
        Condition::In(v, allowed) => match a.get(v) {
            Some(Term::Iri(i)) => allowed.contains(i),
            _ => false,
        },
        Condition::NotEquals(x, y) => match (a.get(x), a.get(y)) {
            (Some(x), Some(y)) => x != y,
            _ => false,
        },
    }
}

fn project(a: &BTreeMap<Var, Term>, projection: &[Var]) -> Binding {
    projection
        .iter()
        .filter_map(|v| a.get(v).map(|t| (v.clone(), t.clone())))
        .collect()
}

/// Tries every assignment of every variable to every term of `g`.
/// Exponential in the number of variables; keep queries small.
pub fn naive_evaluate(g: &Graph, p: &GraphPattern, projection: &[Var]) -> BTreeSet<Binding> {
    let terms: Vec<Term> = g.terms().into_iter().collect();
    let triples: BTreeSet<Triple> = g.iter().collect();
    let mut out = BTreeSet::new();
    for c in dnf(p) {
        let vars = conjunct_vars(&c);
        if !vars.is_empty() && terms.is_empty() {
            continue;
        }
        let mut digits = vec![0usize; vars.len()];
        loop {
            let a: BTreeMap<Var, Term> = vars
                .iter()
                .cloned()
                .zip(digits.iter().map(|&d| terms[d].clone()))
                .collect();
            let matches = c
                .triples
                .iter()
                .all(|t| ground(t, &a).is_some_and(|t| triples.contains(&t)));
            if matches && c.conditions.iter().all(|cond| condition_holds(cond, &a)) {
                out.insert(project(&a, projection));
            }
            // odometer step
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < terms.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
    out
}

/// Backtracking over the triple patterns of each union branch in written
/// order, scanning the full triple list at every step.
pub fn backtrack_evaluate(g: &Graph, p: &GraphPattern, projection: &[Var]) -> BTreeSet<Binding> {
    let triples: Vec<Triple> = g.iter().collect();
    let mut out = BTreeSet::new();
    for c in dnf(p) {
        let mut a = BTreeMap::new();
        backtrack(&triples, &c, 0, &mut a, projection, &mut out);
    }
    out
}

fn unify(
    pt: &PatternTerm,
    value: &Term,
    a: &mut BTreeMap<Var, Term>,
    bound: &mut Vec<Var>,
) -> bool {
    match pt {
        PatternTerm::Term(t) => t == value,
        PatternTerm::Var(v) => match a.get(v) {
            Some(existing) => existing == value,
            None => {
                a.insert(v.clone(), value.clone());
                bound.push(v.clone());
                true
            }
        },
    }
}

fn backtrack(
    triples: &[Triple],
    c: &Conjunct,
    i: usize,
    a: &mut BTreeMap<Var, Term>,
    projection: &[Var],
    out: &mut BTreeSet<Binding>,
) {
    if i == c.triples.len() {
        if c.conditions.iter().all(|cond| condition_holds(cond, a)) {
            out.insert(project(a, projection));
        }
        return;
    }
    let pat = &c.triples[i];
    for t in triples {
        let mut bound = Vec::new();
        let ok = unify(&pat.subject, &Term::Iri(t.subject.clone()), a, &mut bound)
            && unify(
                &pat.predicate,
                &Term::Iri(t.predicate.clone()),
                a,
                &mut bound,
            )
            && unify(&pat.object, &t.object, a, &mut bound);
        if ok {
            backtrack(triples, c, i + 1, a, projection, out);
        }
        for v in bound {
            a.remove(&v);
        }
    }
}

/// Reachability by BFS from every node; pairs (i, j) with a path of
/// length at least one.
pub fn transitive_closure(n: usize, edges: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut out = BTreeSet::new();
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = adj[start].iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            if seen[x] {
                continue;
            }
            seen[x] = true;
            out.insert((start, x));
            queue.extend(adj[x].iter().copied());
        }
    }
    out
}

/// Whether a directed graph given as IRI pairs has a cycle, by repeatedly
/// removing nodes without outgoing edges.
pub fn has_cycle(edges: &[(Iri, Iri)]) -> bool {
    let mut edges: Vec<(Iri, Iri)> = edges.to_vec();
    loop {
        let sources: BTreeSet<&Iri> = edges.iter().map(|(a, _)| a).collect();
        let sinks: BTreeSet<Iri> = edges
            .iter()
            .map(|(_, b)| b)
            .filter(|b| !sources.contains(b))
            .cloned()
            .collect();
        if sinks.is_empty() {
            return !edges.is_empty();
        }
        edges.retain(|(_, b)| !sinks.contains(b));
    }
}
