//! The bound chain `alpha <= alpha_hat <= alpha_star`, `alpha <= theta`, and
//! the classification of weighted inequalities.

mod alpha;

pub use alpha::{
    alpha, alpha_exhaustive, alpha_hat, alpha_hat_by_vertices, alpha_hat_exhaustive, alpha_star, AlphaHatSolution,
    AlphaSolution, MAXIMAL_STABLE_SET_CAP,
};

use num::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ExclusivityGraph, Side};
use crate::rational::{self, Rational};
use crate::scenario::{Event, HybridScenario};
use crate::solvers::{lovasz_theta_with, ThetaOptions, ThetaResult};

/// Slack allowed between float theta values and exact bounds.
pub const THETA_SLACK: f64 = 1e-5;
/// `GENUINE` verdicts with `theta.dual - alpha_hat` below this are marked
/// as candidates only.
pub const CANDIDATE_MARGIN: f64 = 1e-4;

/// `sum_v w_v p(v) <= bound` over the events of an exclusivity graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedInequality {
    graph: ExclusivityGraph,
    weights: Vec<Rational>,
    scenario: Option<HybridScenario>,
}

impl WeightedInequality {
    pub fn new(graph: ExclusivityGraph, weights: Vec<Rational>) -> Result<Self> {
        if graph.n() == 0 {
            return Err(Error::InvalidParameters("inequality has no events".into()));
        }
        if weights.len() != graph.n() {
            return Err(Error::DimensionMismatch {
                expected: graph.n(),
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidParameters(format!("weights must be positive, got {w}")));
        }
        Ok(WeightedInequality {
            graph,
            weights,
            scenario: None,
        })
    }

    pub fn unit(graph: ExclusivityGraph) -> Result<Self> {
        let n = graph.n();
        Self::new(graph, vec![rational::one(); n])
    }

    /// Builds the exclusivity graph of `events` in `scenario`.
    pub fn from_events(scenario: &HybridScenario, events: &[Event], weights: Vec<Rational>) -> Result<Self> {
        let graph = ExclusivityGraph::from_scenario(scenario, Some(events))?;
        let mut ineq = Self::new(graph, weights)?;
        ineq.scenario = Some(scenario.clone());
        Ok(ineq)
    }

    pub fn graph(&self) -> &ExclusivityGraph {
        &self.graph
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn float_weights(&self) -> Vec<f64> {
        self.weights.iter().map(rational::to_f64).collect()
    }

    pub fn scenario(&self) -> Option<&HybridScenario> {
        self.scenario.as_ref()
    }

    pub fn events(&self) -> Option<&[Event]> {
        self.graph.labels()
    }

    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<Self> {
        let mut out = Self::new(self.graph.clone(), weights)?;
        out.scenario = self.scenario.clone();
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Genuine,
    NonGenuine,
    NoQuantumGap,
    EpTrivial,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Genuine => "GENUINE",
            Classification::NonGenuine => "NON_GENUINE",
            Classification::NoQuantumGap => "NO_QUANTUM_GAP",
            Classification::EpTrivial => "EP_TRIVIAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(serialize_with = "rational::as_string::serialize")]
    pub alpha: Rational,
    #[serde(serialize_with = "rational::as_string::serialize")]
    pub alpha_hat: Rational,
    pub theta: ThetaResult,
    #[serde(serialize_with = "rational::as_string::serialize")]
    pub alpha_star: Rational,
    pub classification: Classification,
    /// Set when a `GENUINE` verdict rests on a theta margin below
    /// [`CANDIDATE_MARGIN`]. The gap certified is between `alpha_hat` and
    /// theta, not a quantum violation.
    pub candidate: bool,
    pub alpha_witness: Vec<usize>,
    pub alpha_hat_stable_set: Vec<usize>,
    #[serde(serialize_with = "rational::as_string::seq")]
    pub alpha_hat_omega: Vec<Rational>,
}

impl BoundReport {
    /// Checks the exact chain and the float comparisons against theta.
    pub fn chain_holds(&self) -> bool {
        let a = rational::to_f64(&self.alpha);
        let s = rational::to_f64(&self.alpha_star);
        self.alpha <= self.alpha_hat
            && self.alpha_hat <= self.alpha_star
            && a <= self.theta.dual_value + THETA_SLACK
            && self.theta.primal_value <= s + THETA_SLACK
    }
}

/// Verdict from the bounds and whether `G` has any A-side edge.
pub fn classify(report: &BoundReport, g: &ExclusivityGraph) -> (Classification, bool) {
    classify_values(&report.alpha, &report.alpha_hat, &report.theta, g.has_side_edges(Side::A))
}

fn classify_values(alpha: &Rational, alpha_hat: &Rational, theta: &ThetaResult, has_a_edges: bool) -> (Classification, bool) {
    if !has_a_edges {
        return (Classification::EpTrivial, false);
    }
    let ah = rational::to_f64(alpha_hat);
    if theta.dual_value <= ah + THETA_SLACK {
        return (Classification::NoQuantumGap, false);
    }
    if alpha < alpha_hat {
        (Classification::Genuine, theta.dual_value - ah < CANDIDATE_MARGIN)
    } else {
        (Classification::NonGenuine, false)
    }
}

pub fn compute_bounds(ineq: &WeightedInequality) -> Result<BoundReport> {
    compute_bounds_with(ineq, ThetaOptions::default())
}

/// Runs the four bound computations and asserts the chain. Theta failing to
/// converge is reported as `Error::NonConvergence` carrying the best
/// bracket found.
pub fn compute_bounds_with(ineq: &WeightedInequality, opts: ThetaOptions) -> Result<BoundReport> {
    let g = ineq.graph();
    let w = ineq.weights();
    let fw = ineq.float_weights();
    let ((a, ah), (astar, theta)) = rayon::join(
        || (alpha(g, w), alpha_hat(g, w)),
        || (alpha_star(g, w), lovasz_theta_with(g, &fw, opts)),
    );
    let (a, ah, astar, theta) = (a?, ah?, astar?, theta?);
    let (classification, candidate) = classify_values(&a.value, &ah.value, &theta, g.has_side_edges(Side::A));
    let report = BoundReport {
        alpha: a.value,
        alpha_hat: ah.value,
        theta,
        alpha_star: astar,
        classification,
        candidate,
        alpha_witness: a.witness,
        alpha_hat_stable_set: ah.stable_set,
        alpha_hat_omega: ah.omega,
    };
    assert!(report.chain_holds(), "bound chain violated: {report:?}");
    Ok(report)
}

/// For unit weights, `alpha_hat(G) <= alpha(G_A)`. Returns whether the
/// comparison holds.
pub fn unit_weight_bound_check(g: &ExclusivityGraph) -> Result<bool> {
    let w = vec![rational::one(); g.n()];
    let ah = alpha_hat(g, &w)?.value;
    let aa = alpha(&g.side_graph(Side::A), &w)?.value;
    Ok(ah <= aa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use crate::rational::{frac, int};

    #[test]
    fn weights_must_be_positive() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        assert!(WeightedInequality::new(c5.clone(), vec![int(1), int(0), int(1), int(1), int(1)]).is_err());
        assert!(WeightedInequality::new(c5, vec![int(1); 4]).is_err());
        let empty = GraphKind::Edgeless(0).build().unwrap();
        assert!(WeightedInequality::unit(empty).is_err());
    }

    #[test]
    fn b_only_five_cycle_is_ep_trivial() {
        let c5 = GraphKind::Cycle(5).build_on(Side::B).unwrap();
        let r = compute_bounds(&WeightedInequality::unit(c5).unwrap()).unwrap();
        assert_eq!(r.alpha, int(2));
        assert_eq!(r.alpha_hat, frac(5, 2));
        assert_eq!(r.alpha_star, frac(5, 2));
        assert_eq!(r.classification, Classification::EpTrivial);
    }

    #[test]
    fn a_only_five_cycle_is_non_genuine() {
        let c5 = GraphKind::Cycle(5).build_on(Side::A).unwrap();
        let r = compute_bounds(&WeightedInequality::unit(c5).unwrap()).unwrap();
        assert_eq!(r.alpha_hat, int(2));
        assert_eq!(r.classification, Classification::NonGenuine);
    }

    #[test]
    fn perfect_graph_has_no_quantum_gap() {
        let c6 = GraphKind::Cycle(6).build_on(Side::A).unwrap();
        let r = compute_bounds(&WeightedInequality::unit(c6).unwrap()).unwrap();
        assert_eq!(r.classification, Classification::NoQuantumGap);
    }

    #[test]
    fn unit_weight_check() {
        let c5 = GraphKind::Cycle(5).build_on(Side::B).unwrap();
        assert!(unit_weight_bound_check(&c5).unwrap());
    }

    #[test]
    fn json_uses_exact_strings() {
        let c5 = GraphKind::Cycle(5).build_on(Side::B).unwrap();
        let r = compute_bounds(&WeightedInequality::unit(c5).unwrap()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["alpha_hat"], "5/2");
        assert_eq!(v["classification"], "EP_TRIVIAL");
        assert!(v["theta"]["dual"].is_number());
    }
}
