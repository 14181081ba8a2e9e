//! Exact alpha, alpha-hat and alpha-star.

use std::cmp::Ordering;
use std::ops::Add;

use fixedbitset::FixedBitSet;
use num::{BigInt, Integer, One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{ExclusivityGraph, Side};
use crate::polytope::{enumerate_stable_sets, maximal_stable_sets_capped, qstab_h, Labeling};
use crate::rational::Rational;
use crate::solvers::{maximize_by_row_generation, LinearConstraint, Relation};

/// Upper limit on maximal stable sets of `G_A` visited by [`alpha_hat`].
pub const MAXIMAL_STABLE_SET_CAP: usize = 500_000;

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSolution {
    pub value: Rational,
    /// Sorted vertices of an optimal stable set.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaHatSolution {
    pub value: Rational,
    /// Maximal stable set of `G_A` achieving the optimum.
    pub stable_set: Vec<usize>,
    /// Optimal point of `QSTAB(G_B)`, zero outside `stable_set`.
    pub omega: Labeling,
}

fn check_weights(g: &ExclusivityGraph, w: &[Rational]) -> Result<()> {
    if w.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: w.len(),
        });
    }
    Ok(())
}

/// Maximum-weight stable set by branch and bound. Weights are scaled to
/// integers; negative weights are treated as zero.
pub fn alpha(g: &ExclusivityGraph, w: &[Rational]) -> Result<AlphaSolution> {
    check_weights(g, w)?;
    let n = g.n();
    let w: Vec<Rational> = w.iter().map(|x| x.clone().max(Rational::zero())).collect();
    let lcm = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = w.iter().map(|x| (x * &lcm).to_integer()).collect();
    // Order by descending weight/degree, ties by index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (da, db) = (g.degree(a), g.degree(b));
        // w_a/d_a > w_b/d_b  <=>  w_a d_b > w_b d_a, with d = 0 as infinity
        let ord = match (da, db) {
            (0, 0) => w[b].cmp(&w[a]),
            (0, _) => Ordering::Less,
            (_, 0) => Ordering::Greater,
            _ => (&w[b] * Rational::from_integer(da.into())).cmp(&(&w[a] * Rational::from_integer(db.into()))),
        };
        ord.then(a.cmp(&b))
    });
    let total: BigInt = scaled.iter().sum();
    let (value, witness) = if let Some(small) = scaled
        .iter()
        .map(|x| x.to_u128())
        .collect::<Option<Vec<u128>>>()
        .filter(|_| total.to_u128().is_some())
    {
        let (v, wit) = BranchAndBound::new(g, &order, &small).solve();
        (BigInt::from(v), wit)
    } else {
        BranchAndBound::new(g, &order, &scaled).solve()
    };
    Ok(AlphaSolution {
        value: Rational::new(value, lcm),
        witness,
    })
}

struct BranchAndBound<T> {
    /// Non-neighbors in relabeled positions, excluding the vertex itself.
    compatible: Vec<FixedBitSet>,
    adjacent: Vec<FixedBitSet>,
    weight: Vec<T>,
    order: Vec<usize>,
    best: T,
    best_set: Vec<usize>,
}

impl<T> BranchAndBound<T>
where
    T: Clone + Ord + Zero + for<'a> Add<&'a T, Output = T>,
{
    fn new(g: &ExclusivityGraph, order: &[usize], w: &[T]) -> Self {
        let n = g.n();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut adjacent = vec![FixedBitSet::with_capacity(n); n];
        for (i, &v) in order.iter().enumerate() {
            for u in g.neighbors(v).ones() {
                adjacent[i].insert(pos[u]);
            }
        }
        let compatible = (0..n)
            .map(|i| {
                let mut s = adjacent[i].clone();
                s.toggle_range(..);
                s.set(i, false);
                s
            })
            .collect();
        BranchAndBound {
            compatible,
            adjacent,
            weight: order.iter().map(|&v| w[v].clone()).collect(),
            order: order.to_vec(),
            best: T::zero(),
            best_set: Vec::new(),
        }
    }

    fn solve(mut self) -> (T, Vec<usize>) {
        let n = self.order.len();
        // Greedy start in branching order.
        let mut cand = FixedBitSet::with_capacity(n);
        cand.insert_range(..);
        let mut greedy = Vec::new();
        let mut value = T::zero();
        while let Some(v) = cand.ones().next() {
            greedy.push(v);
            value = value + &self.weight[v];
            cand.intersect_with(&self.compatible[v]);
        }
        self.best = value;
        self.best_set = greedy;
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        let mut chosen = Vec::new();
        self.expand(all, T::zero(), &mut chosen);
        let mut witness: Vec<usize> = self.best_set.iter().map(|&i| self.order[i]).collect();
        witness.sort_unstable();
        (self.best, witness)
    }

    fn expand(&mut self, mut cand: FixedBitSet, current: T, chosen: &mut Vec<usize>) {
        loop {
            let Some(v) = cand.ones().next() else {
                if current > self.best {
                    self.best = current;
                    self.best_set = chosen.clone();
                }
                return;
            };
            if current.clone() + &self.clique_cover_bound(&cand) <= self.best {
                return;
            }
            let mut next = cand.clone();
            next.intersect_with(&self.compatible[v]);
            chosen.push(v);
            let with_v = current.clone() + &self.weight[v];
            self.expand(next, with_v, chosen);
            chosen.pop();
            cand.set(v, false);
        }
    }

    /// Sum over a greedy clique partition of `cand` of each clique's
    /// heaviest vertex.
    fn clique_cover_bound(&self, cand: &FixedBitSet) -> T {
        let mut cliques: Vec<(FixedBitSet, T)> = Vec::new();
        for v in cand.ones() {
            let slot = cliques.iter_mut().find(|(members, _)| members.is_subset(&self.adjacent[v]));
            match slot {
                Some((members, top)) => {
                    members.insert(v);
                    if self.weight[v] > *top {
                        *top = self.weight[v].clone();
                    }
                }
                None => {
                    let mut members = FixedBitSet::with_capacity(cand.len());
                    members.insert(v);
                    cliques.push((members, self.weight[v].clone()));
                }
            }
        }
        cliques.iter().fold(T::zero(), |acc, (_, top)| acc + top)
    }
}

/// Oracle: maximum of `w . chi_S` over every stable set (n <= 30).
pub fn alpha_exhaustive(g: &ExclusivityGraph, w: &[Rational]) -> Result<Rational> {
    check_weights(g, w)?;
    let sets = enumerate_stable_sets(g)?;
    Ok(sets
        .iter()
        .map(|s| s.ones().map(|v| w[v].clone()).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero))
}

/// `max { w . x : x in QSTAB(G) }` by exact LP.
pub fn alpha_star(g: &ExclusivityGraph, w: &[Rational]) -> Result<Rational> {
    check_weights(g, w)?;
    Ok(alpha_star_point(g, w)?.0)
}

fn alpha_star_point(g: &ExclusivityGraph, w: &[Rational]) -> Result<(Rational, Labeling)> {
    if g.n() == 0 {
        return Ok((Rational::zero(), Vec::new()));
    }
    let h = qstab_h(g);
    let rows: Vec<LinearConstraint> = h
        .rows()
        .iter()
        .map(|r| LinearConstraint::new(r.coeffs.clone(), Relation::Le, r.bound.clone()))
        .collect();
    // one clique row per vertex keeps every working LP bounded
    let mut cover = Vec::new();
    let mut covered = vec![false; g.n()];
    for (i, r) in rows.iter().enumerate() {
        if r.coeffs.iter().zip(&covered).any(|(c, &done)| !done && !c.is_zero()) {
            cover.push(i);
            for (v, c) in r.coeffs.iter().enumerate() {
                covered[v] |= !c.is_zero();
            }
        }
    }
    let sol = maximize_by_row_generation(w, &rows, &cover)?;
    Ok((sol.value, sol.point))
}

/// `max over S maximal stable in G_A` of the LP `max sum_{v in S} w_v x_v`
/// over `QSTAB(G_B[S])`. Restricting to maximal `S` is exact for positive
/// weights since `QSTAB` is down-closed.
pub fn alpha_hat(g: &ExclusivityGraph, w: &[Rational]) -> Result<AlphaHatSolution> {
    check_weights(g, w)?;
    let sets = maximal_stable_sets_capped(&g.side_graph(Side::A), MAXIMAL_STABLE_SET_CAP)?;
    alpha_hat_over(g, w, sets)
}

/// Oracle: same optimum taken over every stable set of `G_A` (n <= 30).
pub fn alpha_hat_exhaustive(g: &ExclusivityGraph, w: &[Rational]) -> Result<Rational> {
    check_weights(g, w)?;
    let sets: Vec<Vec<usize>> = enumerate_stable_sets(&g.side_graph(Side::A))?
        .iter()
        .map(|s| s.ones().collect())
        .collect();
    Ok(alpha_hat_over(g, w, sets)?.value)
}

/// Oracle: `max { w . v : v a vertex of HSTAB(G) }` (n <= 20).
pub fn alpha_hat_by_vertices(g: &ExclusivityGraph, w: &[Rational]) -> Result<Rational> {
    check_weights(g, w)?;
    let verts = crate::polytope::hstab_vertices(g)?;
    Ok(verts
        .vertices()
        .iter()
        .map(|v| v.iter().zip(w).map(|(x, y)| x * y).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero))
}

fn alpha_hat_over(g: &ExclusivityGraph, w: &[Rational], mut sets: Vec<Vec<usize>>) -> Result<AlphaHatSolution> {
    let gb = g.side_graph(Side::B);
    // Heaviest sets first so the plain weight-sum bound prunes early.
    let mass = |s: &[usize]| s.iter().map(|&v| w[v].clone()).sum::<Rational>();
    sets.sort_by_cached_key(|s| std::cmp::Reverse(mass(s)));
    let mut best: Option<(Rational, usize, Labeling)> = None;
    let indices: Vec<usize> = (0..sets.len()).collect();
    for chunk in indices.chunks(64) {
        // An LP over S never exceeds the weight of S.
        let live: Vec<usize> = chunk
            .iter()
            .copied()
            .filter(|&i| best.as_ref().map_or(true, |(bv, _, _)| mass(&sets[i]) >= *bv))
            .collect();
        let results: Vec<Result<(Rational, usize, Labeling)>> = live
            .par_iter()
            .map(|&i| {
                let s = &sets[i];
                if s.is_empty() {
                    return Ok((Rational::zero(), i, Vec::new()));
                }
                let sub = gb.induced_subgraph(s)?;
                let ws: Vec<Rational> = s.iter().map(|&v| w[v].clone()).collect();
                let (value, point) = if sub.edge_count() == 0 {
                    (ws.iter().sum(), vec![Rational::one(); s.len()])
                } else {
                    alpha_star_point(&sub, &ws)?
                };
                Ok((value, i, point))
            })
            .collect();
        for r in results {
            let (value, i, point) = r?;
            let better = match &best {
                None => true,
                Some((bv, bi, _)) => value > *bv || (value == *bv && sets[i] < sets[*bi]),
            };
            if better {
                best = Some((value, i, point));
            }
        }
    }
    let Some((value, i, point)) = best else {
        return Ok(AlphaHatSolution {
            value: Rational::zero(),
            stable_set: Vec::new(),
            omega: vec![Rational::zero(); g.n()],
        });
    };
    let mut omega = vec![Rational::zero(); g.n()];
    for (&v, x) in sets[i].iter().zip(point) {
        omega[v] = x;
    }
    Ok(AlphaHatSolution {
        value,
        stable_set: sets[i].clone(),
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeTag, GraphKind};
    use crate::rational::{frac, int};

    fn unit(n: usize) -> Vec<Rational> {
        vec![int(1); n]
    }

    #[test]
    fn alpha_of_small_graphs() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        let a = alpha(&c5, &unit(5)).unwrap();
        assert_eq!(a.value, int(2));
        assert_eq!(a.witness.len(), 2);
        assert!(!c5.has_edge(a.witness[0], a.witness[1]));
        let k4 = GraphKind::Complete(4).build().unwrap();
        assert_eq!(alpha(&k4, &[int(1), int(3), frac(7, 2), int(2)]).unwrap().value, frac(7, 2));
        let e = GraphKind::Edgeless(0).build().unwrap();
        assert_eq!(alpha(&e, &[]).unwrap().value, int(0));
    }

    #[test]
    fn alpha_matches_exhaustive_on_circulants() {
        for (n, offs) in [(9, vec![1, 3]), (11, vec![1, 2]), (12, vec![1, 5])] {
            let g = GraphKind::Circulant { n, offsets: offs }.build().unwrap();
            let w: Vec<Rational> = (0..n).map(|i| frac(1 + (i as i64 * 7) % 5, 3)).collect();
            assert_eq!(alpha(&g, &w).unwrap().value, alpha_exhaustive(&g, &w).unwrap());
        }
    }

    #[test]
    fn huge_weights_fall_back_to_big_integers() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        let big = Rational::from_integer(BigInt::from(u128::MAX) * 4);
        let w = vec![big.clone(), int(1), int(1), int(1), int(1)];
        assert_eq!(alpha(&c5, &w).unwrap().value, big + int(1));
    }

    #[test]
    fn alpha_star_examples() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        assert_eq!(alpha_star(&c5, &unit(5)).unwrap(), frac(5, 2));
        let k3 = GraphKind::Complete(3).build().unwrap();
        assert_eq!(alpha_star(&k3, &unit(3)).unwrap(), int(1));
        let c6 = GraphKind::Cycle(6).build().unwrap();
        assert_eq!(alpha_star(&c6, &unit(6)).unwrap(), int(3));
    }

    #[test]
    fn alpha_hat_extremes() {
        let b5 = GraphKind::Cycle(5).build_on(Side::B).unwrap();
        assert_eq!(alpha_hat(&b5, &unit(5)).unwrap().value, frac(5, 2));
        let a5 = GraphKind::Cycle(5).build_on(Side::A).unwrap();
        assert_eq!(alpha_hat(&a5, &unit(5)).unwrap().value, int(2));
    }

    #[test]
    fn alpha_hat_oracles_agree() {
        let g = ExclusivityGraph::from_tagged_edges(
            6,
            &[
                (0, 1, EdgeTag::BOnly),
                (1, 2, EdgeTag::BOnly),
                (2, 3, EdgeTag::BOnly),
                (3, 4, EdgeTag::BOnly),
                (0, 4, EdgeTag::BOnly),
                (4, 5, EdgeTag::AOnly),
                (0, 5, EdgeTag::Both),
            ],
            Side::B,
        )
        .unwrap();
        let w = vec![int(1), int(2), int(1), int(1), int(2), int(1)];
        let fast = alpha_hat(&g, &w).unwrap();
        assert_eq!(fast.value, alpha_hat_exhaustive(&g, &w).unwrap());
        assert_eq!(fast.value, alpha_hat_by_vertices(&g, &w).unwrap());
        let achieved: Rational = fast.omega.iter().zip(&w).map(|(x, y)| x * y).sum();
        assert_eq!(achieved, fast.value);
    }
}
