use std::collections::BTreeSet;

use super::{ExclusivityGraph, Side};
use crate::error::{Error, Result};

/// Textbook graph families. All are abstract graphs tagged for the B-side
/// unless re-tagged by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    Cycle(usize),
    /// `Ci_{offsets}(n)`: edges `(i, i + d mod n)` for every offset `d`.
    Circulant { n: usize, offsets: Vec<usize> },
    Complete(usize),
    Edgeless(usize),
    /// `M_{2q}`: the cycle `C_{2q}` plus the `q` diameters `(i, i + q)`.
    MobiusLadder(usize),
}

impl GraphKind {
    pub fn build(&self) -> Result<ExclusivityGraph> {
        self.build_on(Side::B)
    }

    pub fn build_on(&self, side: Side) -> Result<ExclusivityGraph> {
        let edges = self.edge_list()?;
        let n = self.vertex_count();
        ExclusivityGraph::abstract_graph(n, &edges, side)
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            GraphKind::Cycle(n) | GraphKind::Complete(n) | GraphKind::Edgeless(n) => n,
            GraphKind::Circulant { n, .. } => n,
            GraphKind::MobiusLadder(q) => 2 * q,
        }
    }

    fn edge_list(&self) -> Result<Vec<(usize, usize)>> {
        match self {
            GraphKind::Cycle(n) => {
                if *n < 3 {
                    return Err(Error::InvalidParameters(format!("cycle needs n >= 3, got {n}")));
                }
                circulant_edges(*n, &[1])
            }
            GraphKind::Circulant { n, offsets } => {
                if *n < 3 {
                    return Err(Error::InvalidParameters(format!(
                        "circulant needs n >= 3, got {n}"
                    )));
                }
                circulant_edges(*n, offsets)
            }
            GraphKind::Complete(n) => Ok((0..*n)
                .flat_map(|u| (u + 1..*n).map(move |v| (u, v)))
                .collect()),
            GraphKind::Edgeless(_) => Ok(Vec::new()),
            GraphKind::MobiusLadder(q) => {
                if *q < 2 {
                    return Err(Error::InvalidParameters(format!(
                        "Mobius ladder needs q >= 2, got {q}"
                    )));
                }
                let n = 2 * q;
                let mut edges = circulant_edges(n, &[1])?;
                edges.extend((0..*q).map(|i| (i, i + q)));
                Ok(edges)
            }
        }
    }
}

fn circulant_edges(n: usize, offsets: &[usize]) -> Result<Vec<(usize, usize)>> {
    let mut set = BTreeSet::new();
    for &d in offsets {
        if d == 0 || d > n / 2 {
            return Err(Error::InvalidParameters(format!(
                "circulant offset {d} must lie in 1..={}",
                n / 2
            )));
        }
        for i in 0..n {
            let j = (i + d) % n;
            set.insert((i.min(j), i.max(j)));
        }
    }
    Ok(set.into_iter().collect())
}

/// Finds a vertex ordering under which `g` has exactly the edges of
/// `Ci_{offsets}(n)`; `None` if no such ordering exists. Backtracking, meant
/// for the small graphs in tests and fixtures.
pub fn circulant_order(g: &ExclusivityGraph, offsets: &[usize]) -> Option<Vec<usize>> {
    let n = g.n();
    let target = GraphKind::Circulant {
        n,
        offsets: offsets.to_vec(),
    }
    .build()
    .ok()?;
    if target.edge_count() != g.edge_count() {
        return None;
    }
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn extend(
        g: &ExclusivityGraph,
        target: &ExclusivityGraph,
        order: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let pos = order.len();
        if pos == g.n() {
            return true;
        }
        for v in 0..g.n() {
            if used[v] || g.degree(v) != target.degree(pos) {
                continue;
            }
            let consistent = order
                .iter()
                .enumerate()
                .all(|(i, &u)| g.has_edge(u, v) == target.has_edge(i, pos));
            if !consistent {
                continue;
            }
            used[v] = true;
            order.push(v);
            if extend(g, target, order, used) {
                return true;
            }
            order.pop();
            used[v] = false;
        }
        false
    }
    extend(g, &target, &mut order, &mut used).then_some(order)
}
