mod oracle;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ftsynth::depgraph::{extract_dependencies, extract_redundancy};
use ftsynth::kg::{Graph, Iri, Term, Triple};
use ftsynth::ontology::{infer, Vocabulary};
use ftsynth::query::{
    dependency_query, dependency_query_unfiltered, evaluate_query, redundancy_query, Condition,
    GraphPattern, PatternTerm, Query, TriplePattern, Var,
};
use ftsynth::random::random_query_graph;

const VARS: [&str; 4] = ["x", "y", "z", "w"];

fn random_term(rng: &mut ChaCha8Rng, pool: &[Term]) -> PatternTerm {
    if rng.gen_bool(0.6) {
        PatternTerm::var(VARS.choose(rng).unwrap())
    } else {
        PatternTerm::Term(pool.choose(rng).unwrap().clone())
    }
}

/// One or two triple patterns, each usually lifted from a triple of the
/// graph with some positions turned into variables, so answers are common.
fn random_bgp(rng: &mut ChaCha8Rng, pool: &[Term], triples: &[Triple]) -> GraphPattern {
    let iris: Vec<Term> = pool
        .iter()
        .filter(|t| matches!(t, Term::Iri(_)))
        .cloned()
        .collect();
    let n = rng.gen_range(1..=2);
    let mut ts = Vec::new();
    while ts.len() < n {
        let (s, p, o) = match triples.choose(rng) {
            Some(t) if rng.gen_bool(0.8) => {
                let mut lift = |term: Term| {
                    if rng.gen_bool(0.5) {
                        PatternTerm::var(VARS.choose(rng).unwrap())
                    } else {
                        PatternTerm::Term(term)
                    }
                };
                (
                    lift(Term::Iri(t.subject.clone())),
                    lift(Term::Iri(t.predicate.clone())),
                    lift(t.object.clone()),
                )
            }
            _ => (
                random_term(rng, &iris),
                random_term(rng, &iris),
                random_term(rng, pool),
            ),
        };
        if let Ok(t) = TriplePattern::new(s, p, o) {
            ts.push(t);
        }
    }
    GraphPattern::Bgp(ts)
}

fn random_filter(rng: &mut ChaCha8Rng, inner: GraphPattern, pool: &[Term]) -> GraphPattern {
    let vars: Vec<Var> = inner.certain_vars().into_iter().collect();
    if vars.is_empty() {
        return inner;
    }
    let cond = if vars.len() >= 2 && rng.gen_bool(0.5) {
        let mut pick = vars.choose_multiple(rng, 2);
        Condition::NotEquals(pick.next().unwrap().clone(), pick.next().unwrap().clone())
    } else {
        let allowed: Vec<Iri> = pool
            .iter()
            .filter_map(Term::as_iri)
            .filter(|_| rng.gen_bool(0.3))
            .cloned()
            .collect();
        Condition::In(vars.choose(rng).unwrap().clone(), allowed)
    };
    GraphPattern::filter(cond, inner)
}

/// A small query over at most four variables, mixing every pattern form.
fn random_small_query(rng: &mut ChaCha8Rng, g: &Graph) -> Option<Query> {
    let mut pool: Vec<Term> = g.terms().into_iter().collect();
    pool.push(Term::Iri(Iri::new("http://absent.example/x").unwrap()));
    let triples: Vec<Triple> = g.iter().collect();
    let t = &triples;
    let pattern = match rng.gen_range(0..5) {
        0 => random_bgp(rng, &pool, t),
        1 => GraphPattern::union(random_bgp(rng, &pool, t), random_bgp(rng, &pool, t)),
        2 => GraphPattern::Join(vec![
            random_bgp(rng, &pool, t),
            GraphPattern::union(random_bgp(rng, &pool, t), random_bgp(rng, &pool, t)),
        ]),
        3 => {
            let b = random_bgp(rng, &pool, t);
            random_filter(rng, b, &pool)
        }
        _ => {
            let u = GraphPattern::union(random_bgp(rng, &pool, t), random_bgp(rng, &pool, t));
            let j = GraphPattern::Join(vec![random_bgp(rng, &pool, t), u]);
            random_filter(rng, j, &pool)
        }
    };
    let projection: Vec<Var> = pattern
        .certain_vars()
        .into_iter()
        .filter(|_| rng.gen_bool(0.7))
        .collect();
    Query::new(pattern, projection).ok()
}

fn small_graph(seed: u64, max: usize) -> Graph {
    random_query_graph(
        &mut ChaCha8Rng::seed_from_u64(seed),
        max,
        &Vocabulary::default(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn small_queries_match_exhaustive_assignment(seed in any::<u64>()) {
        let g = small_graph(seed, 30);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        if let Some(q) = random_small_query(&mut rng, &g) {
            let want = oracle::naive_evaluate(&g, q.pattern(), q.projection());
            prop_assert_eq!(evaluate_query(&g, &q), want);
        }
    }

    #[test]
    fn embedded_queries_match_backtracking(seed in any::<u64>()) {
        let voc = Vocabulary::default();
        let g = small_graph(seed, 50);
        for q in [dependency_query(&voc), dependency_query_unfiltered(&voc), redundancy_query(&voc)] {
            let want = oracle::backtrack_evaluate(&g, q.pattern(), q.projection());
            prop_assert_eq!(evaluate_query(&g, &q), want);
        }
    }

    #[test]
    fn union_commutes(seed in any::<u64>()) {
        let g = small_graph(seed, 40);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool: Vec<Term> = g.terms().into_iter().collect();
        if pool.is_empty() {
            return Ok(());
        }
        let triples: Vec<Triple> = g.iter().collect();
        let a = random_bgp(&mut rng, &pool, &triples);
        let b = random_bgp(&mut rng, &pool, &triples);
        let ab = GraphPattern::union(a.clone(), b.clone());
        let ba = GraphPattern::union(b, a);
        let projection: Vec<Var> = ab.certain_vars().into_iter().collect();
        let left = evaluate_query(&g, &Query::new(ab, projection.clone()).unwrap());
        let right = evaluate_query(&g, &Query::new(ba, projection).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn adding_triples_keeps_bindings(seed in any::<u64>(), extra in 1usize..10) {
        let voc = Vocabulary::default();
        let g = small_graph(seed, 40);
        let more = small_graph(seed.wrapping_add(1), extra);
        let mut h = g.clone();
        h.extend_from(&more);
        for q in [dependency_query(&voc), redundancy_query(&voc)] {
            let before = evaluate_query(&g, &q);
            let after = evaluate_query(&h, &q);
            prop_assert!(before.is_subset(&after));
        }
    }
}

#[test]
fn oracles_agree_with_each_other() {
    // The two reference evaluators must coincide where both are feasible.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nonempty = 0;
    for seed in 0..40 {
        let g = small_graph(seed, 20);
        if let Some(q) = random_small_query(&mut rng, &g) {
            let naive = oracle::naive_evaluate(&g, q.pattern(), q.projection());
            assert_eq!(
                naive,
                oracle::backtrack_evaluate(&g, q.pattern(), q.projection())
            );
            nonempty += usize::from(!naive.is_empty());
        }
    }
    assert!(nonempty >= 5, "only {nonempty} random queries had answers");
}

#[test]
fn random_graphs_exercise_the_embedded_queries() {
    let voc = Vocabulary::default();
    let hits = (0..200)
        .filter(|seed| !evaluate_query(&small_graph(*seed, 50), &dependency_query(&voc)).is_empty())
        .count();
    assert!(
        hits >= 20,
        "only {hits} of 200 random graphs produce a dependency row"
    );
}

#[test]
fn query_shapes() {
    let voc = Vocabulary::default();
    let dep = dependency_query(&voc);
    // eight plain patterns plus the two directions of the IO union
    assert_eq!(dep.pattern().triple_pattern_count(), 10);
    assert_eq!(dep.pattern().union_count(), 1);
    assert_eq!(dep.pattern().filter_count(), 2);
    let names: Vec<&str> = dep.projection().iter().map(Var::name).collect();
    assert_eq!(names, ["c1", "io", "c2", "resource"]);

    let red = redundancy_query(&voc);
    assert_eq!(red.pattern().triple_pattern_count(), 16);
    assert_eq!(red.pattern().union_count(), 2);
    assert_eq!(red.pattern().filter_count(), 3);
    let names: Vec<&str> = red.projection().iter().map(Var::name).collect();
    assert_eq!(names, ["c1", "c3", "resource", "c2"]);
}

#[test]
fn empty_graph_yields_nothing() {
    let voc = Vocabulary::default();
    let g = Graph::new();
    assert!(evaluate_query(&g, &dependency_query(&voc)).is_empty());
    assert!(evaluate_query(&g, &redundancy_query(&voc)).is_empty());
}

fn ex(s: &str) -> Iri {
    Iri::new(format!("http://ex/{s}")).unwrap()
}

/// One consumer wired to `k` producers of the same resource.
fn cluster(k: usize, voc: &Vocabulary) -> Graph {
    let mut g = voc.axioms();
    let mut add = |s: Iri, p: &Iri, o: Iri| {
        g.insert(Triple::new(s, p.clone(), o));
    };
    add(ex("c"), &voc.rdf_type, voc.component.clone());
    add(ex("c"), &voc.has, ex("use"));
    add(ex("use"), &voc.consumes, ex("r"));
    add(ex("r"), &voc.rdf_type, voc.resource.clone());
    for i in 0..k {
        let p = ex(&format!("p{i}"));
        let f = ex(&format!("make{i}"));
        add(p.clone(), &voc.rdf_type, voc.component.clone());
        add(p.clone(), &voc.has, f.clone());
        add(f, &voc.produces, ex("r"));
        // alternate link direction and relation
        if i % 2 == 0 {
            add(p, &voc.outputs_to, ex("c"));
        } else {
            add(ex("c"), &voc.input_from, p);
        }
    }
    infer(&g, voc)
}

#[test]
fn k_producers_give_k_times_k_minus_one_rows() {
    let voc = Vocabulary::default();
    for k in 1..=4 {
        let g = cluster(k, &voc);
        let rows = evaluate_query(&g, &redundancy_query(&voc));
        assert_eq!(rows.len(), k * (k - 1), "k = {k}");
        let want = oracle::backtrack_evaluate(
            &g,
            redundancy_query(&voc).pattern(),
            redundancy_query(&voc).projection(),
        );
        assert_eq!(rows, want);

        let d = extract_dependencies(&g, &voc);
        let groups = extract_redundancy(&g, &voc, &d);
        if k >= 2 {
            assert_eq!(groups.len(), 1);
            let producers: BTreeSet<Iri> = (0..k).map(|i| ex(&format!("p{i}"))).collect();
            assert_eq!(groups.iter().next().unwrap().producers, producers);
        } else {
            assert!(groups.is_empty());
        }
    }
}

#[test]
fn both_orders_of_a_pair_are_reported() {
    let voc = Vocabulary::default();
    let rows = evaluate_query(&cluster(2, &voc), &redundancy_query(&voc));
    let pairs: BTreeSet<(Iri, Iri)> = rows
        .iter()
        .map(|b| (b.iri("c1").unwrap().clone(), b.iri("c3").unwrap().clone()))
        .collect();
    let want: BTreeSet<(Iri, Iri)> = [(ex("p0"), ex("p1")), (ex("p1"), ex("p0"))]
        .into_iter()
        .collect();
    assert_eq!(pairs, want);
}
