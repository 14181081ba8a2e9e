use num::{One, Signed, Zero};
use rayon::prelude::*;

use super::{Labeling, VPolytope};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::solvers::{feasible_point, LinearConstraint, Relation};

/// `conv{ p o q : p in P, q in Q }` with `o` the entrywise product.
pub fn hadamard_hull(p: &VPolytope, q: &VPolytope) -> Result<VPolytope> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    let products: Vec<Labeling> = p
        .vertices()
        .iter()
        .flat_map(|a| {
            q.vertices()
                .iter()
                .map(move |b| a.iter().zip(b).map(|(x, y)| x * y).collect())
        })
        .collect();
    VPolytope::new(p.dim(), extreme_points(products)?)
}

/// The extreme points among `points`, sorted and deduplicated.
///
/// When every point lies in `[0, 1]^d`, 0/1 points are extreme without
/// further checks; any other point is tested by an exact LP against the
/// candidates it could be a combination of.
pub fn extreme_points(mut points: Vec<Labeling>) -> Result<Vec<Labeling>> {
    points.sort();
    points.dedup();
    let Some(d) = points.first().map(|p| p.len()) else {
        return Ok(points);
    };
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.len(),
        });
    }
    let zero = Rational::zero();
    let one = Rational::one();
    let in_cube = points.iter().flatten().all(|v| *v >= zero && *v <= one);
    let nonnegative = points.iter().flatten().all(|v| !v.is_negative());
    let keep: Vec<bool> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            if in_cube && p.iter().all(|v| v.is_zero() || v.is_one()) {
                return Ok(true);
            }
            // For nonnegative points, p = sum lambda_k q_k forces
            // supp(q_k) within supp(p).
            let others: Vec<&Labeling> = points
                .iter()
                .enumerate()
                .filter(|&(j, q)| {
                    j != i
                        && (!nonnegative || q.iter().zip(p).all(|(qv, pv)| qv.is_zero() || !pv.is_zero()))
                })
                .map(|(_, q)| q)
                .collect();
            Ok(!in_convex_hull(p, &others)?)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(points
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect())
}

/// Exact test of `p in conv(others)`; returns the weights when it is.
pub(crate) fn convex_combination(p: &[Rational], others: &[&Labeling]) -> Result<Option<Vec<Rational>>> {
    if others.is_empty() {
        return Ok(None);
    }
    let m = others.len();
    let mut rows = Vec::with_capacity(p.len() + 1);
    for (k, pk) in p.iter().enumerate() {
        let coeffs: Vec<Rational> = others.iter().map(|q| q[k].clone()).collect();
        if coeffs.iter().all(|c| c.is_zero()) {
            if !pk.is_zero() {
                return Ok(None);
            }
            continue;
        }
        rows.push(LinearConstraint::new(coeffs, Relation::Eq, pk.clone()));
    }
    rows.push(LinearConstraint::new(vec![Rational::one(); m], Relation::Eq, Rational::one()));
    feasible_point(m, &rows)
}

fn in_convex_hull(p: &[Rational], others: &[&Labeling]) -> Result<bool> {
    Ok(convex_combination(p, others)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn drops_interior_and_edge_points() {
        let pts = vec![
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![frac(1, 2), frac(1, 2)],
            vec![frac(1, 4), frac(1, 4)],
        ];
        let ext = extreme_points(pts).unwrap();
        assert_eq!(ext.len(), 3);
    }

    #[test]
    fn fractional_vertex_survives() {
        let pts = vec![
            vec![int(0), int(0)],
            vec![frac(1, 2), int(0)],
            vec![int(0), frac(1, 2)],
            vec![frac(1, 3), frac(1, 3)],
        ];
        assert_eq!(extreme_points(pts).unwrap().len(), 4);
    }

    #[test]
    fn points_outside_the_cube() {
        let pts = vec![vec![int(-1)], vec![int(0)], vec![int(3)]];
        assert_eq!(extreme_points(pts).unwrap(), vec![vec![int(-1)], vec![int(3)]]);
    }

    #[test]
    fn dimension_mismatch() {
        let p = VPolytope::new(1, vec![vec![int(1)]]).unwrap();
        let q = VPolytope::new(2, vec![vec![int(1), int(0)]]).unwrap();
        assert!(matches!(hadamard_hull(&p, &q), Err(Error::DimensionMismatch { .. })));
    }
}
