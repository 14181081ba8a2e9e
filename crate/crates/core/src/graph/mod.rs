//! Exclusivity graphs with per-edge side tags.
//!
//! Each edge records whether the A-side, the B-side, or both made its two
//! events exclusive. `G_A` keeps the edges tagged `AOnly` or `Both`, `G_B`
//! the edges tagged `BOnly` or `Both`; induced subgraphs inherit the split.

mod dot;
mod generate;
mod holes;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{Event, HybridScenario};

pub use dot::to_dot;
pub use generate::{circulant_order, GraphKind};
pub use holes::{find_odd_holes_and_antiholes, has_odd_hole, is_perfect, is_perfect_with_cap, HoleKind, OddHole, PERFECTNESS_CAP};

pub type VertexSet = FixedBitSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeTag {
    AOnly,
    BOnly,
    Both,
}

impl EdgeTag {
    pub fn from_sides(a: bool, b: bool) -> Option<EdgeTag> {
        match (a, b) {
            (true, true) => Some(EdgeTag::Both),
            (true, false) => Some(EdgeTag::AOnly),
            (false, true) => Some(EdgeTag::BOnly),
            (false, false) => None,
        }
    }

    pub fn for_side(side: Side) -> EdgeTag {
        match side {
            Side::A => EdgeTag::AOnly,
            Side::B => EdgeTag::BOnly,
        }
    }

    pub fn includes(self, side: Side) -> bool {
        matches!(
            (self, side),
            (EdgeTag::Both, _) | (EdgeTag::AOnly, Side::A) | (EdgeTag::BOnly, Side::B)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusivityGraph {
    n: usize,
    labels: Option<Vec<Event>>,
    adjacency: Vec<VertexSet>,
    tags: Vec<Option<EdgeTag>>,
    default_side: Side,
}

impl ExclusivityGraph {
    /// Graph without event labels; every edge is tagged for `default_side`.
    pub fn abstract_graph(n: usize, edges: &[(usize, usize)], default_side: Side) -> Result<Self> {
        let tag = EdgeTag::for_side(default_side);
        let tagged: Vec<_> = edges.iter().map(|&(u, v)| (u, v, tag)).collect();
        ExclusivityGraph::from_tagged_edges(n, &tagged, default_side)
    }

    pub fn from_tagged_edges(
        n: usize,
        edges: &[(usize, usize, EdgeTag)],
        default_side: Side,
    ) -> Result<Self> {
        let mut g = ExclusivityGraph::empty(n, default_side);
        for &(u, v, tag) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidParameters(format!("self-loop at vertex {u}")));
            }
            g.set_edge(u, v, tag);
        }
        Ok(g)
    }

    fn empty(n: usize, default_side: Side) -> Self {
        ExclusivityGraph {
            n,
            labels: None,
            adjacency: vec![VertexSet::with_capacity(n); n],
            tags: vec![None; n * n],
            default_side,
        }
    }

    fn set_edge(&mut self, u: usize, v: usize, tag: EdgeTag) {
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        self.tags[u * self.n + v] = Some(tag);
        self.tags[v * self.n + u] = Some(tag);
    }

    /// Exclusivity graph on the given events (all events when `None`).
    pub fn from_scenario(scenario: &HybridScenario, events: Option<&[Event]>) -> Result<Self> {
        let events: Vec<Event> = match events {
            Some(list) => list.to_vec(),
            None => scenario.enumerate_events(),
        };
        if events.is_empty() {
            return Err(Error::InvalidParameters("no events".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for e in &events {
            let checked = scenario.event(e.outcomes.clone(), e.settings.clone())?;
            if checked.canonical_index != e.canonical_index {
                return Err(Error::MismatchedScenario(format!("event {e} has a stale index")));
            }
            if !seen.insert(e.canonical_index) {
                return Err(Error::DuplicateEvent(e.to_string()));
            }
        }
        let n = events.len();
        let mut g = ExclusivityGraph::empty(n, Side::B);
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = scenario.exclusivity_sides(&events[u], &events[v]);
                if let Some(tag) = EdgeTag::from_sides(a, b) {
                    g.set_edge(u, v, tag);
                }
            }
        }
        g.labels = Some(events);
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[Event]> {
        self.labels.as_deref()
    }

    pub fn default_side(&self) -> Side {
        self.default_side
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn tag(&self, u: usize, v: usize) -> Option<EdgeTag> {
        self.tags[u * self.n + v]
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones(..)
    }

    /// Edges `(u, v, tag)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, EdgeTag)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adjacency[u].ones().filter(|&v| v > u) {
                out.push((u, v, self.tag(u, v).expect("adjacent pair carries a tag")));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|s| s.count_ones(..)).sum::<usize>() / 2
    }

    pub fn full_set(&self) -> VertexSet {
        let mut s = VertexSet::with_capacity(self.n);
        s.insert_range(..);
        s
    }

    /// `G_A` or `G_B`: same vertices, only the edges that side triggers.
    pub fn side_graph(&self, side: Side) -> ExclusivityGraph {
        let mut g = ExclusivityGraph::empty(self.n, side);
        let tag = EdgeTag::for_side(side);
        for (u, v, t) in self.edges() {
            if t.includes(side) {
                g.set_edge(u, v, tag);
            }
        }
        g.labels = self.labels.clone();
        g
    }

    pub fn has_side_edges(&self, side: Side) -> bool {
        self.edges().iter().any(|&(_, _, t)| t.includes(side))
    }

    /// Induced subgraph on `vertices`, relabeled `0..k` in ascending order of
    /// the original indices. Tags and labels are inherited.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<ExclusivityGraph> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameters("empty vertex subset".into()));
        }
        if let Some(&bad) = vertices.iter().find(|&&v| v >= self.n) {
            return Err(Error::IndexOutOfRange { index: bad, n: self.n });
        }
        let mut keep = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let k = keep.len();
        let mut g = ExclusivityGraph::empty(k, self.default_side);
        for i in 0..k {
            for j in i + 1..k {
                if let Some(t) = self.tag(keep[i], keep[j]) {
                    g.set_edge(i, j, t);
                }
            }
        }
        g.labels = self
            .labels
            .as_ref()
            .map(|l| keep.iter().map(|&v| l[v].clone()).collect());
        Ok(g)
    }

    /// Complement graph; new edges are tagged for the default side and
    /// labels are dropped.
    pub fn complement(&self) -> ExclusivityGraph {
        let mut g = ExclusivityGraph::empty(self.n, self.default_side);
        let tag = EdgeTag::for_side(self.default_side);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.set_edge(u, v, tag);
                }
            }
        }
        g
    }

    /// Same edge set, ignoring tags and labels.
    pub fn same_edges(&self, other: &ExclusivityGraph) -> bool {
        self.n == other.n && self.adjacency == other.adjacency
    }

    pub fn is_stable(&self, set: &VertexSet) -> bool {
        set.ones().all(|v| self.adjacency[v].is_disjoint(set))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Two-coloring check, used by tests and the search pre-filter.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for v in self.adjacency[u].ones() {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        stack.push(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Party;

    fn two_by_one() -> HybridScenario {
        HybridScenario::new(vec![Party::new("A", 1, 2), Party::new("B", 1, 2)], vec![0], vec![1])
            .unwrap()
    }

    /// Brute-force tags for the 4-event scenario, computed by hand from the
    /// rule: events are (a b | 0 0) for a, b in {0, 1}.
    #[test]
    fn four_event_graph_tags() {
        let s = two_by_one();
        let g = ExclusivityGraph::from_scenario(&s, None).unwrap();
        assert_eq!(g.n(), 4);
        // indices: 0 = 00, 1 = 01, 2 = 10, 3 = 11
        let expected = [
            (0, 1, EdgeTag::BOnly),
            (0, 2, EdgeTag::AOnly),
            (0, 3, EdgeTag::Both),
            (1, 2, EdgeTag::Both),
            (1, 3, EdgeTag::AOnly),
            (2, 3, EdgeTag::BOnly),
        ];
        assert_eq!(g.edges(), expected.to_vec());
    }

    #[test]
    fn scenario_edges_follow_full_party_rule() {
        let s = HybridScenario::broadcasting(2, 2, 2).unwrap();
        let g = ExclusivityGraph::from_scenario(&s, None).unwrap();
        let ev = s.enumerate_events();
        let all = s.all_parties();
        for u in 0..g.n() {
            for v in 0..g.n() {
                if u == v {
                    assert!(!g.has_edge(u, v));
                    continue;
                }
                let full = s.are_exclusive(&ev[u], &ev[v], &all).unwrap();
                assert_eq!(g.has_edge(u, v), full);
                let a = s.are_exclusive(&ev[u], &ev[v], s.a_side()).unwrap();
                let b = s.are_exclusive(&ev[u], &ev[v], s.b_side()).unwrap();
                assert_eq!(full, a || b);
                assert_eq!(g.tag(u, v), EdgeTag::from_sides(a, b));
            }
        }
        let ga = g.side_graph(Side::A);
        let gb = g.side_graph(Side::B);
        for (u, v, _) in g.edges() {
            assert!(ga.has_edge(u, v) || gb.has_edge(u, v));
        }
        assert_eq!(
            ga.edge_count() + gb.edge_count(),
            g.edge_count() + g.edges().iter().filter(|e| e.2 == EdgeTag::Both).count()
        );
    }

    #[test]
    fn duplicate_events_rejected() {
        let s = two_by_one();
        let e = s.event_from_index(1).unwrap();
        let err = ExclusivityGraph::from_scenario(&s, Some(&[e.clone(), e])).unwrap_err();
        assert!(matches!(err, Error::DuplicateEvent(_)));
    }

    #[test]
    fn induced_subgraph_identity_and_singleton() {
        let s = HybridScenario::broadcasting(2, 2, 2).unwrap();
        let g = ExclusivityGraph::from_scenario(&s, None).unwrap();
        let all: Vec<usize> = (0..g.n()).collect();
        assert_eq!(g.induced_subgraph(&all).unwrap(), g);
        let one = g.induced_subgraph(&[17]).unwrap();
        assert_eq!(one.n(), 1);
        assert_eq!(one.edge_count(), 0);
        assert!(matches!(
            g.induced_subgraph(&[0, 99]),
            Err(Error::IndexOutOfRange { index: 99, .. })
        ));
    }

    #[test]
    fn induced_five_cycle_inherits_tags() {
        // A 5-cycle inside a 7-vertex graph with mixed tags.
        let tagged = [
            (0, 2, EdgeTag::AOnly),
            (2, 4, EdgeTag::BOnly),
            (4, 6, EdgeTag::Both),
            (6, 5, EdgeTag::AOnly),
            (5, 0, EdgeTag::BOnly),
            (1, 0, EdgeTag::AOnly),
            (3, 4, EdgeTag::BOnly),
        ];
        let g = ExclusivityGraph::from_tagged_edges(7, &tagged, Side::B).unwrap();
        let c = g.induced_subgraph(&[0, 2, 4, 5, 6]).unwrap();
        assert_eq!(c.edge_count(), 5);
        assert!((0..5).all(|v| c.degree(v) == 2));
        // relabeled: 0->0, 2->1, 4->2, 5->3, 6->4
        assert_eq!(c.tag(0, 1), Some(EdgeTag::AOnly));
        assert_eq!(c.tag(1, 2), Some(EdgeTag::BOnly));
        assert_eq!(c.tag(2, 4), Some(EdgeTag::Both));
        assert_eq!(c.tag(4, 3), Some(EdgeTag::AOnly));
        assert_eq!(c.tag(3, 0), Some(EdgeTag::BOnly));
    }

    #[test]
    fn complement_is_an_involution() {
        let g = GraphKind::Cycle(7).build().unwrap();
        assert_eq!(g.complement().complement(), g);
    }
}
