use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::ExclusivityGraph;

/// Maximal cliques by Bron-Kerbosch with Tomita pivoting. Each clique is
/// sorted; the list is sorted lexicographically.
pub fn maximal_cliques(g: &ExclusivityGraph) -> Vec<Vec<usize>> {
    let adj: Vec<FixedBitSet> = (0..g.n()).map(|v| g.neighbors(v).clone()).collect();
    cliques_of(&adj, usize::MAX).expect("no cap")
}

/// Maximal stable sets, i.e. maximal cliques of the complement.
pub fn maximal_stable_sets(g: &ExclusivityGraph) -> Vec<Vec<usize>> {
    cliques_of(&non_adjacency(g), usize::MAX).expect("no cap")
}

/// Like [`maximal_stable_sets`] but fails once more than `cap` sets are found.
pub fn maximal_stable_sets_capped(g: &ExclusivityGraph, cap: usize) -> Result<Vec<Vec<usize>>> {
    cliques_of(&non_adjacency(g), cap)
}

fn non_adjacency(g: &ExclusivityGraph) -> Vec<FixedBitSet> {
    let n = g.n();
    (0..n)
        .map(|v| {
            let mut s = g.neighbors(v).clone();
            s.toggle_range(..);
            s.set(v, false);
            s
        })
        .collect()
}

fn cliques_of(adj: &[FixedBitSet], cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = adj.len();
    let mut out = Vec::new();
    let mut r = Vec::new();
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    let x = FixedBitSet::with_capacity(n);
    expand(adj, &mut r, p, x, &mut out, cap)?;
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    Ok(out)
}

fn expand(
    adj: &[FixedBitSet],
    r: &mut Vec<usize>,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if p.is_clear() {
        if x.is_clear() {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "maximal stable sets",
                    size: out.len() + 1,
                    cap,
                });
            }
            out.push(r.clone());
        }
        return Ok(());
    }
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| p.intersection(&adj[u]).count())
        .expect("p is nonempty");
    let mut candidates = p.clone();
    candidates.difference_with(&adj[pivot]);
    for v in candidates.ones() {
        let mut np = p.clone();
        np.intersect_with(&adj[v]);
        let mut nx = x.clone();
        nx.intersect_with(&adj[v]);
        r.push(v);
        expand(adj, r, np, nx, out, cap)?;
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
    Ok(())
}
