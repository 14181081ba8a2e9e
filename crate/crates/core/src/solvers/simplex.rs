//! Exact two-phase simplex over `BigRational` with Bland's pivoting rule.
//!
//! Variables are implicitly nonnegative. Problems whose rows are all `<=`
//! with nonnegative right-hand side start feasible at the origin and run on
//! a compact dictionary (rows x original columns), which keeps LPs with
//! thousands of clique rows cheap. Everything else goes through a dense
//! two-phase tableau.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polytope::HPolytope;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        LinearConstraint { coeffs, relation, rhs }
    }
}

/// maximize `objective · x` subject to the rows of `constraints` and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub constraints: HPolytope,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub point: Vec<Rational>,
    pub pivots: usize,
}

/// Hard stop far above anything Bland's rule needs on the problems solved
/// here; reaching it means a bug, not a hard instance.
pub const PIVOT_LIMIT: usize = 200_000;

pub fn simplex_max(problem: &LpProblem) -> Result<LpSolution> {
    let dim = problem.constraints.dim();
    if problem.objective.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: problem.objective.len(),
        });
    }
    let rows: Vec<LinearConstraint> = problem
        .constraints
        .rows()
        .iter()
        .map(|r| LinearConstraint::new(r.coeffs.clone(), Relation::Le, r.bound.clone()))
        .collect();
    maximize(&problem.objective, &rows)
}

/// General form: maximize `objective · x`, `x >= 0`.
pub fn maximize(objective: &[Rational], constraints: &[LinearConstraint]) -> Result<LpSolution> {
    let n = objective.len();
    for c in constraints {
        if c.coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.coeffs.len(),
            });
        }
    }
    if constraints.iter().all(|c| c.relation == Relation::Le && !c.rhs.is_negative()) {
        return Dictionary::build(n, constraints).solve(objective);
    }
    maximize_two_phase(objective, constraints)
}

fn maximize_two_phase(objective: &[Rational], constraints: &[LinearConstraint]) -> Result<LpSolution> {
    let n = objective.len();
    let mut t = Tableau::build(n, constraints);
    t.phase_one()?;
    t.phase_two(objective)?;
    Ok(t.solution(objective))
}

/// Rows added per round of [`maximize_by_row_generation`].
const ROWS_PER_ROUND: usize = 32;

/// Same optimum as [`maximize`] over `constraints`, found by solving over
/// the rows in `initial` and repeatedly adding the most violated remaining
/// rows. Highly degenerate problems with many redundant rows (clique
/// constraints of dense graphs) stall Bland's rule; the working LPs here
/// stay small. `initial` must make the problem bounded.
pub fn maximize_by_row_generation(
    objective: &[Rational],
    constraints: &[LinearConstraint],
    initial: &[usize],
) -> Result<LpSolution> {
    let mut active: Vec<bool> = vec![false; constraints.len()];
    for &i in initial {
        active[i] = true;
    }
    let mut pivots = 0;
    loop {
        let rows: Vec<LinearConstraint> = constraints
            .iter()
            .zip(&active)
            .filter(|(_, &a)| a)
            .map(|(c, _)| c.clone())
            .collect();
        let sol = maximize(objective, &rows)?;
        pivots += sol.pivots;
        let mut violated: Vec<(Rational, usize)> = constraints
            .iter()
            .enumerate()
            .filter(|(i, _)| !active[*i])
            .filter_map(|(i, c)| {
                let lhs = c.coeffs.iter().zip(&sol.point).fold(Rational::zero(), |acc, (a, x)| acc + a * x);
                let excess = match c.relation {
                    Relation::Le => &lhs - &c.rhs,
                    Relation::Ge => &c.rhs - &lhs,
                    Relation::Eq => (&lhs - &c.rhs).abs(),
                };
                excess.is_positive().then_some((excess, i))
            })
            .collect();
        if violated.is_empty() {
            return Ok(LpSolution { pivots, ..sol });
        }
        violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, i) in violated.into_iter().take(ROWS_PER_ROUND) {
            active[i] = true;
        }
    }
}

/// A point satisfying the constraints, or `None` if there is none.
pub fn feasible_point(num_vars: usize, constraints: &[LinearConstraint]) -> Result<Option<Vec<Rational>>> {
    let zero = vec![Rational::zero(); num_vars];
    match maximize(&zero, constraints) {
        Ok(sol) => Ok(Some(sol.point)),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Ties in the perturbed ratio test before falling back to Bland's rule.
const DEGENERATE_STREAK: usize = 8;

/// Compact tableau for `Ax <= b`, `b >= 0`. Row `i` reads
/// `x_{basic[i]} + sum_j t[i][j] x_{nonbasic[j]} = rhs[i]`; variables
/// `0..n` are original, `n..n+m` are slacks. `pert` is an infinitesimal
/// positive perturbation of `rhs`, pivoted alongside it and used only to
/// break ratio ties, which keeps degenerate vertices from stalling.
struct Dictionary {
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    pert: Vec<Rational>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    n: usize,
    pivots: usize,
}

impl Dictionary {
    fn build(n: usize, constraints: &[LinearConstraint]) -> Dictionary {
        let m = constraints.len();
        // fixed pseudo-random positive integers
        let pert = (0..m as u64)
            .map(|i| Rational::from_integer((i.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 44).wrapping_add(1).into()))
            .collect();
        Dictionary {
            t: constraints.iter().map(|c| c.coeffs.clone()).collect(),
            rhs: constraints.iter().map(|c| c.rhs.clone()).collect(),
            pert,
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            n,
            pivots: 0,
        }
    }

    fn solve(mut self, objective: &[Rational]) -> Result<LpSolution> {
        // cost row: z + sum_j d[j] x_{nonbasic[j]} = z0
        let mut d: Vec<Rational> = objective.iter().map(|c| -c.clone()).collect();
        let mut streak = 0;
        loop {
            let bland = streak >= DEGENERATE_STREAK;
            let entering = if bland {
                (0..d.len()).filter(|&j| d[j].is_negative()).min_by_key(|&j| self.nonbasic[j])
            } else {
                (0..d.len()).filter(|&j| d[j].is_negative()).min_by(|&a, &b| d[a].cmp(&d[b]))
            };
            let Some(s) = entering else { break };
            let mut best: Option<(usize, Rational, Rational)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][s].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.t[i][s];
                let tie = &self.pert[i] / &self.t[i][s];
                let better = match &best {
                    None => true,
                    Some((bi, br, bt)) => {
                        ratio < *br || (ratio == *br && (tie < *bt || (tie == *bt && self.basic[i] < self.basic[*bi])))
                    }
                };
                if better {
                    best = Some((i, ratio, tie));
                }
            }
            let Some((r, ratio, tie)) = best else { return Err(Error::Unbounded) };
            streak = if ratio.is_zero() && tie.is_zero() { streak + 1 } else { 0 };
            self.pivot(r, s, &mut d)?;
        }
        let mut point = vec![Rational::zero(); self.n];
        for (i, &b) in self.basic.iter().enumerate() {
            if b < self.n {
                point[b] = self.rhs[i].clone();
            }
        }
        let value = objective.iter().zip(&point).fold(Rational::zero(), |acc, (c, x)| acc + c * x);
        Ok(LpSolution {
            value,
            point,
            pivots: self.pivots,
        })
    }

    fn pivot(&mut self, r: usize, s: usize, d: &mut [Rational]) -> Result<()> {
        self.pivots += 1;
        if self.pivots > PIVOT_LIMIT {
            return Err(Error::IterationLimit(PIVOT_LIMIT));
        }
        let inv = self.t[r][s].recip();
        let width = self.nonbasic.len();
        for j in 0..width {
            if j != s && !self.t[r][j].is_zero() {
                self.t[r][j] *= &inv;
            }
        }
        self.t[r][s] = inv.clone();
        self.rhs[r] *= &inv;
        self.pert[r] *= &inv;
        let nonzero: Vec<usize> = (0..width).filter(|&j| j != s && !self.t[r][j].is_zero()).collect();
        let pivot_row = self.t[r].clone();
        let (pivot_rhs, pivot_pert) = (self.rhs[r].clone(), self.pert[r].clone());
        let eliminate = |row: &mut [Rational]| -> Rational {
            let f = row[s].clone();
            for &j in &nonzero {
                row[j] -= &f * &pivot_row[j];
            }
            row[s] = -&f * &inv;
            f
        };
        for i in 0..self.t.len() {
            if i != r && !self.t[i][s].is_zero() {
                let f = eliminate(&mut self.t[i]);
                self.rhs[i] -= &f * &pivot_rhs;
                self.pert[i] -= &f * &pivot_pert;
            }
        }
        if !d[s].is_zero() {
            eliminate(d);
        }
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
        Ok(())
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs `z_j - c_j`; the last entry is the objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    num_original: usize,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
    num_columns: usize,
    pivots: usize,
}

impl Tableau {
    fn build(n: usize, constraints: &[LinearConstraint]) -> Tableau {
        let m = constraints.len();
        let mut normalized: Vec<(Vec<Rational>, Relation, Rational)> = constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flip = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), flip, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let num_slack = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
        let num_artificial = normalized.iter().filter(|c| c.1 != Relation::Le).count();
        let first_artificial = n + num_slack;
        let num_columns = first_artificial + num_artificial;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        let mut art = first_artificial;
        for (coeffs, rel, rhs) in normalized.drain(..) {
            let mut row = coeffs;
            row.resize(num_columns + 1, Rational::zero());
            match rel {
                Relation::Le => {
                    row[slack] = Rational::from_integer(1.into());
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                    row[art] = Rational::from_integer(1.into());
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Rational::from_integer(1.into());
                    basis.push(art);
                    art += 1;
                }
            }
            row[num_columns] = rhs;
            rows.push(row);
        }
        Tableau {
            rows,
            cost: vec![Rational::zero(); num_columns + 1],
            basis,
            num_original: n,
            first_artificial,
            num_columns,
            pivots: 0,
        }
    }

    /// Recomputes reduced costs for the cost vector `c` (length `num_columns`).
    fn price(&mut self, c: &[Rational]) {
        let width = self.num_columns + 1;
        let mut cost = vec![Rational::zero(); width];
        for (j, cj) in c.iter().enumerate() {
            if !cj.is_zero() {
                cost[j] = -cj.clone();
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &c[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    cost[j] += cb * v;
                }
            }
        }
        self.cost = cost;
    }

    fn pivot(&mut self, r: usize, col: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > PIVOT_LIMIT {
            return Err(Error::IterationLimit(PIVOT_LIMIT));
        }
        let inv = self.rows[r][col].recip();
        let width = self.num_columns + 1;
        let nonzero: Vec<usize> = (0..width).filter(|&j| !self.rows[r][j].is_zero()).collect();
        for &j in &nonzero {
            self.rows[r][j] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &j in &nonzero {
                row[j] -= &factor * &pivot_row[j];
            }
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for &j in &nonzero {
                self.cost[j] -= &factor * &pivot_row[j];
            }
        }
        self.basis[r] = col;
        Ok(())
    }

    /// Runs simplex iterations over columns `< limit`. Returns `Err(Unbounded)`
    /// when an improving column has no positive entry.
    fn iterate(&mut self, limit: usize) -> Result<()> {
        let rhs = self.num_columns;
        loop {
            let entering = (0..limit).find(|&j| self.cost[j].is_negative());
            let Some(col) = entering else { return Ok(()) };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col)?,
                None => return Err(Error::Unbounded),
            }
        }
    }

    fn phase_one(&mut self) -> Result<()> {
        if self.first_artificial == self.num_columns {
            return Ok(());
        }
        let mut c = vec![Rational::zero(); self.num_columns];
        for v in c.iter_mut().skip(self.first_artificial) {
            *v = Rational::from_integer((-1).into());
        }
        self.price(&c);
        match self.iterate(self.num_columns) {
            Ok(()) => {}
            Err(Error::Unbounded) => unreachable!("phase one objective is bounded by zero"),
            Err(e) => return Err(e),
        }
        if !self.cost[self.num_columns].is_zero() {
            return Err(Error::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                let col = (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero());
                match col {
                    Some(j) => {
                        self.pivot(i, j)?;
                        i += 1;
                    }
                    None => {
                        self.rows.swap_remove(i);
                        self.basis.swap_remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        Ok(())
    }

    fn phase_two(&mut self, objective: &[Rational]) -> Result<()> {
        let mut c = vec![Rational::zero(); self.num_columns];
        c[..self.num_original].clone_from_slice(objective);
        self.price(&c);
        self.iterate(self.first_artificial)
    }

    fn solution(&self, objective: &[Rational]) -> LpSolution {
        let mut point = vec![Rational::zero(); self.num_original];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_original {
                point[b] = self.rows[i][self.num_columns].clone();
            }
        }
        let value = objective
            .iter()
            .zip(&point)
            .fold(Rational::zero(), |acc, (c, x)| acc + c * x);
        LpSolution {
            value,
            point,
            pivots: self.pivots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use crate::polytope::qstab_h;
    use crate::rational::{frac, int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn single_row() {
        let p = LpProblem {
            objective: ints(&[1, 1]),
            constraints: HPolytope::new(2, vec![(ints(&[1, 1]), int(1))]).unwrap(),
        };
        assert_eq!(simplex_max(&p).unwrap().value, int(1));
    }

    #[test]
    fn fractional_qstab_of_c5() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        let p = LpProblem {
            objective: ints(&[1; 5]),
            constraints: qstab_h(&c5),
        };
        let sol = simplex_max(&p).unwrap();
        assert_eq!(sol.value, frac(5, 2));
    }

    #[test]
    fn triangle_clique_row() {
        let k3 = GraphKind::Complete(3).build().unwrap();
        let p = LpProblem {
            objective: ints(&[1; 3]),
            constraints: qstab_h(&k3),
        };
        assert_eq!(simplex_max(&p).unwrap().value, int(1));
    }

    #[test]
    fn infeasible_and_unbounded_are_distinct() {
        let infeasible = [
            LinearConstraint::new(ints(&[1]), Relation::Le, int(1)),
            LinearConstraint::new(ints(&[1]), Relation::Ge, int(2)),
        ];
        assert!(matches!(maximize(&ints(&[1]), &infeasible), Err(Error::Infeasible)));
        let unbounded = [LinearConstraint::new(ints(&[1, -1]), Relation::Le, int(1))];
        assert!(matches!(maximize(&ints(&[1, 0]), &unbounded), Err(Error::Unbounded)));
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 2, 2x + 2y = 4 (redundant), x <= 3/2; maximize x - y
        let rows = [
            LinearConstraint::new(ints(&[1, 1]), Relation::Eq, int(2)),
            LinearConstraint::new(ints(&[2, 2]), Relation::Eq, int(4)),
            LinearConstraint::new(ints(&[1, 0]), Relation::Le, frac(3, 2)),
        ];
        let sol = maximize(&ints(&[1, -1]), &rows).unwrap();
        assert_eq!(sol.value, int(1));
        assert_eq!(sol.point, vec![frac(3, 2), frac(1, 2)]);
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        // -x <= -1  (x >= 1), x <= 4; minimize x == maximize -x
        let rows = [
            LinearConstraint::new(ints(&[-1]), Relation::Le, int(-1)),
            LinearConstraint::new(ints(&[1]), Relation::Le, int(4)),
        ];
        assert_eq!(maximize(&ints(&[-1]), &rows).unwrap().value, int(-1));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Classic cycling example (Beale) under Dantzig's rule.
        let rows = [
            LinearConstraint::new(vec![frac(1, 4), int(-60), frac(-1, 25), int(9)], Relation::Le, int(0)),
            LinearConstraint::new(vec![frac(1, 2), int(-90), frac(-1, 50), int(3)], Relation::Le, int(0)),
            LinearConstraint::new(ints(&[0, 0, 1, 0]), Relation::Le, int(1)),
        ];
        let obj = vec![frac(3, 4), int(-150), frac(1, 50), int(-6)];
        let sol = maximize(&obj, &rows).unwrap();
        assert_eq!(sol.value, frac(1, 20));
        assert!(sol.pivots < 100);
    }

    #[test]
    fn row_generation_matches_the_full_lp() {
        let g = GraphKind::Circulant { n: 13, offsets: vec![1, 3, 4] }.build().unwrap();
        let rows: Vec<LinearConstraint> = qstab_h(&g)
            .rows()
            .iter()
            .map(|r| LinearConstraint::new(r.coeffs.clone(), Relation::Le, r.bound.clone()))
            .collect();
        let obj: Vec<Rational> = (1..=13).map(|i| int(i % 4 + 1)).collect();
        let full = maximize(&obj, &rows).unwrap();
        // the first row alone leaves most variables unbounded; cover them
        let cover: Vec<usize> = (0..13)
            .map(|v| rows.iter().position(|r| !r.coeffs[v].is_zero()).unwrap())
            .collect();
        let lazy = maximize_by_row_generation(&obj, &rows, &cover).unwrap();
        assert_eq!(lazy.value, full.value);
    }

    #[test]
    fn dictionary_agrees_with_two_phase() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..6);
            let m = rng.gen_range(1..8);
            let rows: Vec<LinearConstraint> = (0..m)
                .map(|_| {
                    let coeffs = (0..n).map(|_| int(rng.gen_range(-2..4))).collect();
                    LinearConstraint::new(coeffs, Relation::Le, int(rng.gen_range(0..4)))
                })
                .collect();
            let obj: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-2..4))).collect();
            let fast = maximize(&obj, &rows);
            let slow = maximize_two_phase(&obj, &rows);
            match (fast, slow) {
                (Ok(a), Ok(b)) => assert_eq!(a.value, b.value),
                (Err(Error::Unbounded), Err(Error::Unbounded)) => {}
                (a, b) => panic!("{a:?} vs {b:?}"),
            }
        }
    }
}
