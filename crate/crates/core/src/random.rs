//! Seeded generators of knowledge graphs for property tests and benches.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::depgraph::extract_dependencies;
use crate::kg::{Graph, Iri, Literal, Term, Triple};
use crate::ontology::{infer, Vocabulary};

pub const RANDOM_NS: &str = "http://ftsynth.example/random#";

fn node(prefix: &str, i: usize) -> Iri {
    Iri::new(format!("{RANDOM_NS}{prefix}{i}")).expect("generated names are valid IRIs")
}

pub fn component(i: usize) -> Iri {
    node("C", i)
}

pub fn resource(i: usize) -> Iri {
    node("R", i)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgParams {
    pub max_components: usize,
    pub max_resources: usize,
    /// Chance that a supplier backs up an existing demand of its consumer
    /// instead of opening a new one.
    pub redundancy: f64,
    /// Chance that a component also supplies a second consumer.
    pub sharing: f64,
    /// Chance of an unwired component, an extra unlinked producer or a
    /// link carrying nothing.
    pub noise: f64,
}

impl Default for KgParams {
    fn default() -> Self {
        KgParams {
            max_components: 10,
            max_resources: 3,
            redundancy: 0.3,
            sharing: 0.3,
            noise: 0.2,
        }
    }
}

/// A generated model whose system component is `C0`.
#[derive(Debug, Clone)]
pub struct RandomKg {
    pub graph: Graph,
    pub system: Iri,
    pub components: usize,
    pub resources: usize,
}

/// A valid knowledge graph whose dependency graph is acyclic.
///
/// Suppliers always have a higher index than their consumers. IO links are
/// symmetric, so a link can still induce a backwards dependency when the
/// consumer also produces what the supplier consumes; such draws are
/// rejected and redrawn.
pub fn random_acyclic_kg<R: Rng>(rng: &mut R, params: &KgParams) -> RandomKg {
    let voc = Vocabulary::default();
    loop {
        let kg = random_kg(rng, params);
        let closed = infer(&kg.graph, &voc);
        if extract_dependencies(&closed, &voc)
            .find_cycle_from(&kg.system)
            .is_none()
        {
            return kg;
        }
    }
}

/// Like [`random_acyclic_kg`] without the rejection step, so dependency
/// cycles can occur.
pub fn random_kg<R: Rng>(rng: &mut R, params: &KgParams) -> RandomKg {
    let voc = &Vocabulary::default();
    let n = rng.gen_range(1..=params.max_components);
    let m = rng.gen_range(1..=params.max_resources);
    let mut g = voc.axioms();
    let mut add = |s: &Iri, p: &Iri, o: &Iri| {
        g.insert(Triple::new(s.clone(), p.clone(), o.clone()));
    };

    for r in 0..m {
        add(&resource(r), &voc.rdf_type, &voc.resource);
    }
    for c in 0..n {
        add(&component(c), &voc.rdf_type, &voc.component);
        if c > 0 {
            let parent = rng.gen_range(0..c);
            add(&component(c), &voc.part_of, &component(parent));
        }
    }

    let mut produces = vec![vec![false; m]; n];
    let mut consumes = vec![vec![false; m]; n];
    let mut links: Vec<(usize, usize)> = Vec::new();
    // Every later component supplies some earlier one, so the dependency
    // graph spans the model.
    for c in 1..n {
        if rng.gen_bool(params.noise / 2.0) {
            continue;
        }
        let first = rng.gen_range(0..c);
        let mut consumers = vec![first];
        if c >= 2 && rng.gen_bool(params.sharing) {
            let second = rng.gen_range(0..c);
            if second != first {
                consumers.push(second);
            }
        }
        for u in consumers {
            let r = pick_demand(rng, params, u, &links, &consumes, &produces);
            consumes[u][r] = true;
            produces[c][r] = true;
            links.push((u, c));
        }
    }
    // Producers nobody is wired to, and wires that carry nothing.
    for (c, row) in produces.iter_mut().enumerate() {
        if rng.gen_bool(params.noise / 2.0) {
            row[rng.gen_range(0..m)] = true;
        }
        if n > 1 && rng.gen_bool(params.noise / 2.0) {
            let other = rng.gen_range(0..n);
            if other != c {
                links.push((c, other));
            }
        }
    }

    for c in 0..n {
        let cons: Vec<usize> = (0..m).filter(|r| consumes[c][*r]).collect();
        let prods: Vec<usize> = (0..m).filter(|r| produces[c][*r]).collect();
        // Sometimes one function does both, sometimes one function each.
        let merged = rng.gen_bool(0.5);
        let f_in = node("F", c);
        let f_out = if merged { f_in.clone() } else { node("G", c) };
        if !cons.is_empty() {
            add(&component(c), &voc.has, &f_in);
            for r in cons {
                add(&f_in, &voc.consumes, &resource(r));
            }
        }
        if !prods.is_empty() {
            add(&component(c), &voc.has, &f_out);
            for r in prods {
                add(&f_out, &voc.produces, &resource(r));
            }
        }
    }

    links.sort_unstable();
    links.dedup();
    for (consumer, producer) in links {
        let (rel, s, o) = match rng.gen_range(0..3) {
            0 => (&voc.input_from, consumer, producer),
            1 => (&voc.outputs_to, producer, consumer),
            _ => (
                if rng.gen_bool(0.5) {
                    &voc.input_from
                } else {
                    &voc.outputs_to
                },
                consumer,
                producer,
            ),
        };
        add(&component(s), rel, &component(o));
    }

    RandomKg {
        graph: g,
        system: component(0),
        components: n,
        resources: m,
    }
}

/// `partOf` edges `Ni partOf Nj` for `i > j`, each present with
/// probability `density`. Returns the graph and the edge list.
pub fn random_part_of_dag<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
    density: f64,
    voc: &Vocabulary,
) -> (Graph, usize, Vec<(usize, usize)>) {
    let n = rng.gen_range(1..=max_nodes);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    let g = edges
        .iter()
        .map(|&(i, j)| Triple::new(node("N", i), voc.part_of.clone(), node("N", j)))
        .collect();
    (g, n, edges)
}

/// Up to `max_triples` triples over a small pool of nodes and the
/// vocabulary, biased towards the shapes the extraction queries look for.
pub fn random_query_graph<R: Rng>(rng: &mut R, max_triples: usize, voc: &Vocabulary) -> Graph {
    let comps: Vec<Iri> = (0..4).map(component).collect();
    let funcs: Vec<Iri> = (0..4).map(|i| node("F", i)).collect();
    let res: Vec<Iri> = (0..2).map(resource).collect();
    let classes = [
        &voc.component,
        &voc.production,
        &voc.consumption,
        &voc.resource,
    ];
    let target = rng.gen_range(0..=max_triples);
    let mut g = Graph::new();
    let mut attempts = 0;
    while g.len() < target && attempts < max_triples * 20 {
        attempts += 1;
        let t = match rng.gen_range(0..8) {
            0 | 1 => {
                let c = comps.choose(rng).unwrap();
                Triple::new(c.clone(), voc.rdf_type.clone(), voc.component.clone())
            }
            2 => {
                let f = funcs.choose(rng).unwrap();
                let class = if rng.gen_bool(0.5) {
                    &voc.production
                } else {
                    &voc.consumption
                };
                Triple::new(f.clone(), voc.rdf_type.clone(), class.clone())
            }
            3 => Triple::new(
                comps.choose(rng).unwrap().clone(),
                voc.has.clone(),
                funcs.choose(rng).unwrap().clone(),
            ),
            4 => {
                let rel = if rng.gen_bool(0.5) {
                    &voc.produces
                } else {
                    &voc.consumes
                };
                Triple::new(
                    funcs.choose(rng).unwrap().clone(),
                    rel.clone(),
                    res.choose(rng).unwrap().clone(),
                )
            }
            5 => {
                let rel = if rng.gen_bool(0.5) {
                    &voc.input_from
                } else {
                    &voc.outputs_to
                };
                Triple::new(
                    comps.choose(rng).unwrap().clone(),
                    rel.clone(),
                    comps.choose(rng).unwrap().clone(),
                )
            }
            6 => {
                // a relation outside the IO filter
                Triple::new(
                    comps.choose(rng).unwrap().clone(),
                    voc.part_of.clone(),
                    comps.choose(rng).unwrap().clone(),
                )
            }
            _ => {
                let s = comps.choose(rng).unwrap().clone();
                if rng.gen_bool(0.5) {
                    Triple::new(
                        s,
                        node("label", 0),
                        Term::Literal(Literal::plain(format!("c{}", rng.gen_range(0..3)))),
                    )
                } else {
                    Triple::new(
                        s,
                        voc.rdf_type.clone(),
                        (*classes.choose(rng).unwrap()).clone(),
                    )
                }
            }
        };
        g.insert(t);
    }
    g
}

/// The resource `consumer` will take from a new supplier: either one it
/// already consumes, making the supplier an alternative, or a fresh one.
/// Fresh picks avoid what the consumer's own consumers produce, since the
/// symmetric IO link would otherwise make them depend on it.
fn pick_demand<R: Rng>(
    rng: &mut R,
    params: &KgParams,
    consumer: usize,
    links: &[(usize, usize)],
    consumes: &[Vec<bool>],
    produces: &[Vec<bool>],
) -> usize {
    let m = consumes[consumer].len();
    let open: Vec<usize> = (0..m).filter(|&r| consumes[consumer][r]).collect();
    if !open.is_empty() && rng.gen_bool(params.redundancy) {
        return *open.choose(rng).unwrap();
    }
    let risky = |r: usize| links.iter().any(|&(u, p)| p == consumer && produces[u][r]);
    let fresh: Vec<usize> = (0..m).filter(|&r| !consumes[consumer][r]).collect();
    let safe: Vec<usize> = fresh.iter().copied().filter(|&r| !risky(r)).collect();
    safe.choose(rng)
        .or_else(|| open.choose(rng))
        .or_else(|| fresh.choose(rng))
        .copied()
        .expect("at least one resource")
}
