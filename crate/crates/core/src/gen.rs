//! Seeded random instances for property tests, verification and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::matroid::{enumerate_bases, GroundSet, MatroidHandle};
use crate::rational::{self, Rational};
use crate::weights::WeightVector;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random multigraph without self-loops; `connected` forces a spanning tree first.
pub fn random_graph(rng: &mut TestRng, vertices: usize, edges: usize, connected: bool) -> Graph {
    assert!(vertices >= 2);
    let mut list = Vec::with_capacity(edges);
    if connected {
        let mut order: Vec<usize> = (0..vertices).collect();
        order.shuffle(rng);
        for i in 1..vertices {
            let j = rng.gen_range(0..i);
            list.push((order[j], order[i]));
        }
    }
    while list.len() < edges.max(1) {
        let u = rng.gen_range(0..vertices);
        let v = rng.gen_range(0..vertices);
        if u != v {
            list.push((u.min(v), u.max(v)));
        }
    }
    list.shuffle(rng);
    Graph::new(vertices, list).expect("valid endpoints")
}

/// Random simple graph on `vertices` vertices with edge probability `p`, made connected.
pub fn random_simple_connected(rng: &mut TestRng, vertices: usize, p: f64) -> Graph {
    let mut list = Vec::new();
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(rng);
    let mut present = std::collections::HashSet::new();
    for i in 1..vertices {
        let j = rng.gen_range(0..i);
        let (u, v) = (order[j].min(order[i]), order[j].max(order[i]));
        present.insert((u, v));
        list.push((u, v));
    }
    for u in 0..vertices {
        for v in u + 1..vertices {
            if !present.contains(&(u, v)) && rng.gen_bool(p) {
                list.push((u, v));
            }
        }
    }
    list.shuffle(rng);
    Graph::new(vertices, list).expect("valid endpoints")
}

pub fn random_graphic(rng: &mut TestRng, max_vertices: usize, max_edges: usize) -> MatroidHandle {
    let v = rng.gen_range(2..=max_vertices.max(2));
    let e = rng.gen_range(1..=max_edges.max(1));
    let connected = rng.gen_bool(0.7);
    let g = random_graph(rng, v, e, connected);
    g.matroid().expect("loopless graph")
}

pub fn random_uniform(rng: &mut TestRng, max_n: usize) -> MatroidHandle {
    let n = rng.gen_range(1..=max_n.max(1));
    let r = rng.gen_range(1..=n);
    MatroidHandle::uniform(n, r).expect("valid uniform")
}

/// A matroid drawn from graphic, uniform, truncation, dual and direct-sum
/// constructions, with at most `max_elements` elements and `max_bases` bases.
pub fn random_matroid(rng: &mut TestRng, max_elements: usize, max_bases: usize) -> MatroidHandle {
    loop {
        if let Some(m) = try_random_matroid(rng, max_elements) {
            if m.len() <= max_elements && m.ensure_loopless().is_ok() && enumerate_bases(&m, max_bases).is_ok() {
                return m;
            }
        }
    }
}

fn try_random_matroid(rng: &mut TestRng, max_elements: usize) -> Option<MatroidHandle> {
    let kind = rng.gen_range(0..6);
    let m = match kind {
        0 | 1 => random_graphic(rng, 7, max_elements),
        2 => random_uniform(rng, max_elements.min(9)),
        3 => {
            let m = random_graphic(rng, 7, max_elements);
            let t = rng.gen_range(1..=m.len());
            m.truncation(t).ok()?
        }
        4 => {
            let m = random_graphic(rng, 7, max_elements);
            let d = m.dual();
            d.ensure_loopless().ok()?;
            d
        }
        _ => {
            let a = random_graphic(rng, 5, max_elements / 2).prefixed("a").ok()?;
            let b = if rng.gen_bool(0.5) {
                random_uniform(rng, (max_elements / 2).max(1))
            } else {
                random_graphic(rng, 4, max_elements / 2)
            };
            let b = b.prefixed("b").ok()?;
            MatroidHandle::direct_sum(&[a, b]).ok()?
        }
    };
    Some(m)
}

/// Positive rational weights `p/q` with `p <= max_num`, `q <= max_den`.
pub fn random_weights(rng: &mut TestRng, n: usize, max_num: i64, max_den: i64) -> WeightVector {
    let vals: Vec<Rational> =
        (0..n).map(|_| rational::frac(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))).collect();
    WeightVector::new(vals).expect("positive")
}

/// Random explicit matroid as a relabelled copy of a random small matroid.
pub fn relabel_numbered(m: &MatroidHandle, prefix: &str) -> MatroidHandle {
    m.relabeled(GroundSet::numbered(prefix, m.len()).expect("nonempty")).expect("same size")
}

/// Random connected loopless multigraph with at most `max_edges` edges and arboricity exactly `k`.
pub fn random_multigraph_with_arboricity(rng: &mut TestRng, max_edges: usize, k: usize) -> Graph {
    loop {
        let v = rng.gen_range(2..=7);
        if v - 1 > max_edges {
            continue;
        }
        let e = rng.gen_range(v - 1..=max_edges);
        let g = random_graph(rng, v, e, true);
        let m = g.matroid().expect("loopless graph");
        let d = crate::sfm::fractional_arboricity(&m, &WeightVector::ones(m.len())).expect("loopless").0;
        if rational::ceil_int(&d) == (k as i64).into() {
            return g;
        }
    }
}
