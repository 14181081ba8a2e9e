use num::{One, Signed, Zero};

use super::hull::convex_combination;
use super::{extreme_points, maximal_stable_sets, qstab_vertices, Labeling, VPolytope};
use crate::error::{Error, Result};
use crate::graph::{ExclusivityGraph, Side};
use crate::rational::Rational;
use crate::solvers::{maximize, LinearConstraint, Relation};

/// Largest graph for which `HSTAB` vertices are enumerated.
pub const HSTAB_CAP: usize = 20;

fn check_cap(g: &ExclusivityGraph) -> Result<()> {
    if g.n() > HSTAB_CAP {
        return Err(Error::CapExceeded {
            what: "HSTAB vertices",
            size: g.n(),
            cap: HSTAB_CAP,
        });
    }
    Ok(())
}

/// The points `chi_S o w` for `S` a maximal stable set of `G_A` and `w` a
/// vertex of `QSTAB(G_B)`. Their hull is `HSTAB(G)`: a product with a
/// smaller stable set equals a product with a maximal one and a point of
/// `QSTAB(G_B)` zeroed outside it, which `QSTAB` contains since it is
/// down-closed.
pub fn hstab_candidates(g: &ExclusivityGraph) -> Result<Vec<Labeling>> {
    check_cap(g)?;
    let ga = g.side_graph(Side::A);
    let gb = g.side_graph(Side::B);
    let omegas = qstab_vertices(&gb)?;
    let mut out = Vec::new();
    for s in maximal_stable_sets(&ga) {
        let mut mask = vec![false; g.n()];
        for v in s {
            mask[v] = true;
        }
        for w in omegas.vertices() {
            out.push(
                w.iter()
                    .zip(&mask)
                    .map(|(x, &m)| if m { x.clone() } else { Rational::zero() })
                    .collect(),
            );
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn hstab_vertices(g: &ExclusivityGraph) -> Result<VPolytope> {
    VPolytope::new(g.n(), extreme_points(hstab_candidates(g)?)?)
}

/// Outcome of a membership query against `HSTAB(G)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    /// Convex weights over the listed vertices reproduce the point.
    Inside { decomposition: Vec<(Rational, Labeling)> },
    /// `c . x <= beta` holds on `HSTAB(G)` but `c . point > beta`.
    Outside { c: Vec<Rational>, beta: Rational },
}

pub fn membership_hstab(g: &ExclusivityGraph, point: &[Rational]) -> Result<Membership> {
    if point.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: point.len(),
        });
    }
    let vertices = hstab_vertices(g)?;
    let refs: Vec<&Labeling> = vertices.vertices().iter().collect();
    if let Some(lambda) = convex_combination(point, &refs)? {
        let decomposition = lambda
            .into_iter()
            .zip(vertices.vertices())
            .filter(|(l, _)| !l.is_zero())
            .map(|(l, v)| (l, v.clone()))
            .collect();
        return Ok(Membership::Inside { decomposition });
    }
    // maximize c.p - beta over c = c+ - c- in [-1, 1]^d, beta >= 0,
    // subject to c.v <= beta for every vertex v.
    let d = g.n();
    let nv = 2 * d + 1;
    let mut rows = Vec::with_capacity(vertices.len() + 2 * d);
    for v in vertices.vertices() {
        let mut coeffs = Vec::with_capacity(nv);
        coeffs.extend(v.iter().cloned());
        coeffs.extend(v.iter().map(|x| -x));
        coeffs.push(-Rational::one());
        rows.push(LinearConstraint::new(coeffs, Relation::Le, Rational::zero()));
    }
    for i in 0..2 * d {
        let mut coeffs = vec![Rational::zero(); nv];
        coeffs[i] = Rational::one();
        rows.push(LinearConstraint::new(coeffs, Relation::Le, Rational::one()));
    }
    let mut objective = Vec::with_capacity(nv);
    objective.extend(point.iter().cloned());
    objective.extend(point.iter().map(|x| -x));
    objective.push(-Rational::one());
    let sol = maximize(&objective, &rows)?;
    debug_assert!(sol.value.is_positive());
    let c = (0..d).map(|i| &sol.point[i] - &sol.point[d + i]).collect();
    Ok(Membership::Outside {
        c,
        beta: sol.point[2 * d].clone(),
    })
}
