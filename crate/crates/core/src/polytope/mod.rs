//! Stable-set, clique-constrained and hybrid polytopes over exact rationals.

mod cliques;
mod dd;
mod hstab;
mod hull;
mod stable;

pub use cliques::{maximal_cliques, maximal_stable_sets, maximal_stable_sets_capped};
pub use dd::vertex_enumeration;
pub use hstab::{hstab_candidates, hstab_vertices, membership_hstab, Membership, HSTAB_CAP};
pub use hull::{extreme_points, hadamard_hull};
pub use stable::{enumerate_stable_sets, qstab_h, qstab_vertices, stab_vertices, STAB_CAP};

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point of `[0, 1]^V`, one coordinate per event.
pub type Labeling = Vec<Rational>;

/// Writes a labeling as `[1, 1/2, 0]`.
pub fn format_labeling(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Convex hull of finitely many points, stored as its sorted vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Labeling>,
}

impl VPolytope {
    /// Sorts and deduplicates `vertices`; does not check extremality.
    pub fn new(dim: usize, mut vertices: Vec<Labeling>) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        vertices.sort();
        vertices.dedup();
        Ok(VPolytope { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Labeling] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, x: &[Rational]) -> bool {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(x)).is_ok()
    }
}

impl fmt::Display for VPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "{}", format_labeling(v))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRow {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
}

/// `{ x >= 0 : a_i . x <= b_i }`; nonnegativity is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<HRow>,
}

impl HPolytope {
    pub fn new(dim: usize, rows: Vec<(Vec<Rational>, Rational)>) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (coeffs, bound) in rows {
            if coeffs.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: coeffs.len(),
                });
            }
            out.push(HRow { coeffs, bound });
        }
        Ok(HPolytope { dim, rows: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[HRow] {
        &self.rows
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && x.iter().all(|v| *v >= Rational::from_integer(0.into()))
            && self.rows.iter().all(|r| {
                let lhs: Rational = r.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
                lhs <= r.bound
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn vpolytope_sorts_and_dedups() {
        let p = VPolytope::new(2, vec![vec![int(1), int(0)], vec![int(0), int(0)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.contains_vertex(&[int(1), int(0)]));
        assert!(VPolytope::new(2, vec![vec![int(1)]]).is_err());
        assert_eq!(format_labeling(&[int(1), frac(1, 2)]), "[1, 1/2]");
    }

    #[test]
    fn hpolytope_membership() {
        let h = HPolytope::new(2, vec![(vec![int(1), int(1)], int(1))]).unwrap();
        assert!(h.contains(&[frac(1, 2), frac(1, 2)]));
        assert!(!h.contains(&[int(1), frac(1, 2)]));
        assert!(!h.contains(&[int(-1), int(0)]));
    }
}
