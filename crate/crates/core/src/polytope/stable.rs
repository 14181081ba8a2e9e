use super::{vertex_enumeration, HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::graph::{ExclusivityGraph, VertexSet};
use crate::polytope::maximal_cliques;
use crate::rational::{int, one, zero};

/// Largest graph for which stable sets are enumerated exhaustively.
pub const STAB_CAP: usize = 30;
const STABLE_SET_LIMIT: usize = 1 << 22;

/// Every stable set (including the empty set), in lexicographic order of
/// sorted vertex lists.
pub fn enumerate_stable_sets(g: &ExclusivityGraph) -> Result<Vec<VertexSet>> {
    let n = g.n();
    if n > STAB_CAP {
        return Err(Error::CapExceeded {
            what: "stable-set enumeration vertices",
            size: n,
            cap: STAB_CAP,
        });
    }
    let mut out = Vec::new();
    let mut current = VertexSet::with_capacity(n);
    let mut blocked = vec![0u32; n];
    fn rec(
        g: &ExclusivityGraph,
        from: usize,
        current: &mut VertexSet,
        blocked: &mut [u32],
        out: &mut Vec<VertexSet>,
    ) -> Result<()> {
        if out.len() >= STABLE_SET_LIMIT {
            return Err(Error::CapExceeded {
                what: "stable sets",
                size: out.len() + 1,
                cap: STABLE_SET_LIMIT,
            });
        }
        out.push(current.clone());
        for v in from..g.n() {
            if blocked[v] > 0 {
                continue;
            }
            current.insert(v);
            for u in g.neighbors(v).ones() {
                blocked[u] += 1;
            }
            rec(g, v + 1, current, blocked, out)?;
            for u in g.neighbors(v).ones() {
                blocked[u] -= 1;
            }
            current.set(v, false);
        }
        Ok(())
    }
    rec(g, 0, &mut current, &mut blocked, &mut out)?;
    Ok(out)
}

/// `STAB(G)`: characteristic vectors of all stable sets. Every one of them
/// is a vertex of the hull.
pub fn stab_vertices(g: &ExclusivityGraph) -> Result<VPolytope> {
    let sets = enumerate_stable_sets(g)?;
    let n = g.n();
    let points = sets
        .iter()
        .map(|s| (0..n).map(|v| if s.contains(v) { one() } else { zero() }).collect())
        .collect();
    VPolytope::new(n, points)
}

/// `QSTAB(G)`: one row `sum_{v in K} x_v <= 1` per maximal clique `K`.
pub fn qstab_h(g: &ExclusivityGraph) -> HPolytope {
    let n = g.n();
    let rows = maximal_cliques(g)
        .into_iter()
        .filter(|k| !k.is_empty())
        .map(|k| {
            let mut coeffs = vec![zero(); n];
            for v in k {
                coeffs[v] = int(1);
            }
            (coeffs, one())
        })
        .collect();
    HPolytope::new(n, rows).expect("rows have dimension n")
}

pub fn qstab_vertices(g: &ExclusivityGraph) -> Result<VPolytope> {
    vertex_enumeration(&qstab_h(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use crate::rational::frac;

    #[test]
    fn stable_sets_of_c5() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        // empty + 5 singletons + 5 non-adjacent pairs
        assert_eq!(enumerate_stable_sets(&c5).unwrap().len(), 11);
        assert_eq!(stab_vertices(&c5).unwrap().len(), 11);
    }

    #[test]
    fn qstab_of_c5_has_the_half_point() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        let q = qstab_vertices(&c5).unwrap();
        assert_eq!(q.len(), 12);
        assert!(q.contains_vertex(&vec![frac(1, 2); 5]));
    }

    #[test]
    fn cap() {
        let g = GraphKind::Cycle(31).build().unwrap();
        assert!(matches!(enumerate_stable_sets(&g), Err(Error::CapExceeded { .. })));
    }
}
