//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use hybridgraph::graph::{EdgeTag, ExclusivityGraph};
use hybridgraph::polytope::{qstab_h, vertex_enumeration};
use hybridgraph::rational::{int, zero, Rational};
use hybridgraph::HybridScenario;
use rand::seq::SliceRandom;
use rand::Rng;

pub const TAGS: [EdgeTag; 3] = [EdgeTag::AOnly, EdgeTag::BOnly, EdgeTag::Both];

pub fn random_tagged_graph(rng: &mut impl Rng, n: usize, density: f64) -> ExclusivityGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v, TAGS[rng.gen_range(0..3)]));
            }
        }
    }
    ExclusivityGraph::from_tagged_edges(n, &edges, hybridgraph::Side::B).expect("valid edges")
}

pub fn random_bipartite(rng: &mut impl Rng, n: usize) -> ExclusivityGraph {
    let side: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if side[u] != side[v] && rng.gen_bool(0.35) {
                edges.push((u, v, TAGS[rng.gen_range(0..3)]));
            }
        }
    }
    ExclusivityGraph::from_tagged_edges(n, &edges, hybridgraph::Side::B).expect("valid edges")
}

/// Induced subgraph of a scenario exclusivity graph on `k` random events.
pub fn random_scenario_subgraph(rng: &mut impl Rng, scenario: &HybridScenario, k: usize) -> ExclusivityGraph {
    let full = ExclusivityGraph::from_scenario(scenario, None).expect("scenario graph");
    let mut idx: Vec<usize> = (0..full.n()).collect();
    idx.shuffle(rng);
    idx.truncate(k);
    idx.sort_unstable();
    full.induced_subgraph(&idx).expect("in range")
}

pub fn random_weights(rng: &mut impl Rng, n: usize, max: i64) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(1..=max))).collect()
}

fn is_stable_mask(g: &ExclusivityGraph, mask: u32) -> bool {
    let n = g.n();
    (0..n).all(|u| mask >> u & 1 == 0 || (u + 1..n).all(|v| mask >> v & 1 == 0 || !g.has_edge(u, v)))
}

/// Stable sets of `g` as bitmasks, by brute force.
pub fn stable_masks(g: &ExclusivityGraph) -> Vec<u32> {
    assert!(g.n() <= 20);
    (0u32..1 << g.n()).filter(|&m| is_stable_mask(g, m)).collect()
}

pub fn mask_weight(mask: u32, w: &[Rational]) -> Rational {
    w.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(zero(), |acc, (_, x)| acc + x)
}

pub fn brute_alpha(g: &ExclusivityGraph, w: &[Rational]) -> Rational {
    stable_masks(g).into_iter().map(|m| mask_weight(m, w)).max().unwrap_or_else(zero)
}

/// `alpha*` as the best vertex of `QSTAB`, enumerated by double description.
pub fn vertex_alpha_star(g: &ExclusivityGraph, w: &[Rational]) -> Rational {
    let q = vertex_enumeration(&qstab_h(g)).expect("bounded");
    q.vertices()
        .iter()
        .map(|v| v.iter().zip(w).fold(zero(), |acc, (x, y)| acc + x * y))
        .max()
        .unwrap_or_else(zero)
}

/// `alpha_hat` by brute force over stable sets of `G_A` and vertices of
/// `QSTAB(G_B[S])`.
pub fn brute_alpha_hat(g: &ExclusivityGraph, w: &[Rational]) -> Rational {
    let ga = g.side_graph(hybridgraph::Side::A);
    let gb = g.side_graph(hybridgraph::Side::B);
    let mut best = zero();
    for m in stable_masks(&ga) {
        let s: Vec<usize> = (0..g.n()).filter(|i| m >> i & 1 == 1).collect();
        if s.is_empty() {
            continue;
        }
        let sub = gb.induced_subgraph(&s).expect("in range");
        let ws: Vec<Rational> = s.iter().map(|&i| w[i].clone()).collect();
        best = best.max(vertex_alpha_star(&sub, &ws));
    }
    best
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x * y)
}
