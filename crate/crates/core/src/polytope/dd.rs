//! Vertex enumeration by the double description method on the homogenized
//! cone `{(x, t) >= 0 : b t - A x >= 0}`.

use fixedbitset::FixedBitSet;
use num::{BigInt, Integer, One, Signed, Zero};

use super::{HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone)]
struct Ray {
    coords: Vec<BigInt>,
    /// Indices of processed constraints that are tight on this ray.
    zeros: FixedBitSet,
}

/// Vertices of a bounded `HPolytope`. An empty polytope yields an empty
/// vertex list; an unbounded one is an error.
pub fn vertex_enumeration(h: &HPolytope) -> Result<VPolytope> {
    let d = h.dim();
    let dim = d + 1;
    // Constraints 0..dim are the orthant; the rest are the rows, as integer
    // vectors over (x, t).
    let rows: Vec<Vec<BigInt>> = h.rows().iter().map(|r| integer_row(&r.coeffs, &r.bound)).collect();
    let total = dim + rows.len();
    let mut rays: Vec<Ray> = (0..dim)
        .map(|i| {
            let mut coords = vec![BigInt::zero(); dim];
            coords[i] = BigInt::one();
            let mut zeros = FixedBitSet::with_capacity(total);
            zeros.insert_range(0..dim);
            zeros.set(i, false);
            Ray { coords, zeros }
        })
        .collect();
    for (k, row) in rows.iter().enumerate() {
        let idx = dim + k;
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.coords)).collect();
        let mut next = Vec::with_capacity(rays.len());
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, val) in values.iter().enumerate() {
            if val.is_positive() {
                pos.push(i);
                next.push(rays[i].clone());
            } else if val.is_zero() {
                let mut r = rays[i].clone();
                r.zeros.insert(idx);
                next.push(r);
            } else {
                neg.push(i);
            }
        }
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let vp = &values[p];
                let vq = -&values[q];
                let coords: Vec<BigInt> = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(cq, cp)| vp * cq + &vq * cp)
                    .collect();
                let mut zeros = common;
                zeros.insert(idx);
                next.push(Ray {
                    coords: normalize(coords),
                    zeros,
                });
            }
        }
        rays = next;
    }
    let t = d;
    let mut vertices = Vec::new();
    let mut unbounded = false;
    for r in &rays {
        if r.coords[t].is_zero() {
            unbounded |= r.coords.iter().any(|c| !c.is_zero());
        } else {
            let den = &r.coords[t];
            vertices.push(
                r.coords[..d]
                    .iter()
                    .map(|c| Rational::new(c.clone(), den.clone()))
                    .collect(),
            );
        }
    }
    if vertices.is_empty() {
        return VPolytope::new(d, Vec::new());
    }
    if unbounded {
        return Err(Error::UnboundedPolytope);
    }
    VPolytope::new(d, vertices)
}

/// `(-a, b)` scaled to coprime integers, so that the constraint reads
/// `row . (x, t) >= 0`.
fn integer_row(coeffs: &[Rational], bound: &Rational) -> Vec<BigInt> {
    let lcm = coeffs
        .iter()
        .chain(std::iter::once(bound))
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut row: Vec<BigInt> = coeffs.iter().map(|c| -(c * &lcm).to_integer()).collect();
    row.push((bound * &lcm).to_integer());
    normalize(row)
}

fn normalize(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn unit_square() {
        let h = HPolytope::new(
            2,
            vec![(vec![int(1), int(0)], int(1)), (vec![int(0), int(1)], int(1))],
        )
        .unwrap();
        let v = vertex_enumeration(&h).unwrap();
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn triangle_with_rational_bound() {
        let h = HPolytope::new(2, vec![(vec![int(2), int(3)], int(1))]).unwrap();
        let v = vertex_enumeration(&h).unwrap();
        assert_eq!(
            v.vertices(),
            &[vec![int(0), int(0)], vec![int(0), frac(1, 3)], vec![frac(1, 2), int(0)]]
        );
    }

    #[test]
    fn unbounded_and_empty() {
        let h = HPolytope::new(2, vec![(vec![int(1), int(0)], int(1))]).unwrap();
        assert!(matches!(vertex_enumeration(&h), Err(Error::UnboundedPolytope)));
        let e = HPolytope::new(1, vec![(vec![int(1)], int(-1))]).unwrap();
        assert!(vertex_enumeration(&e).unwrap().is_empty());
    }

    #[test]
    fn redundant_rows_do_not_add_vertices() {
        let h = HPolytope::new(
            2,
            vec![
                (vec![int(1), int(1)], int(1)),
                (vec![int(1), int(1)], int(1)),
                (vec![int(1), int(0)], int(5)),
            ],
        )
        .unwrap();
        assert_eq!(vertex_enumeration(&h).unwrap().len(), 3);
    }
}
