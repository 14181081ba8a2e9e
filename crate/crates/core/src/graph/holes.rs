//! Odd holes and odd antiholes, for perfectness screening.

use rayon::prelude::*;
use serde::Serialize;

use super::ExclusivityGraph;
use crate::error::{Error, Result};

/// Largest graph for which `is_perfect` runs the exhaustive search.
pub const PERFECTNESS_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HoleKind {
    Hole,
    Antihole,
}

/// An induced odd cycle of `G` (hole) or of its complement (antihole). The
/// vertex sequence starts at its smallest vertex and has `vertices[1] <
/// vertices[last]`, so each cycle appears once.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OddHole {
    pub kind: HoleKind,
    pub vertices: Vec<usize>,
}

/// All induced odd cycles of length `5..=max_length` in `g`, plus odd
/// antiholes of length `7..=max_length` (an antihole on 5 vertices is itself
/// a 5-hole and is reported once, as a hole).
pub fn find_odd_holes_and_antiholes(g: &ExclusivityGraph, max_length: usize) -> Result<Vec<OddHole>> {
    if max_length < 5 {
        return Err(Error::InvalidParameters(format!(
            "max_length must be at least 5, got {max_length}"
        )));
    }
    let mut out: Vec<OddHole> = induced_odd_cycles(g, max_length, 5)
        .into_iter()
        .map(|vertices| OddHole { kind: HoleKind::Hole, vertices })
        .collect();
    let co = g.complement();
    out.extend(
        induced_odd_cycles(&co, max_length, 7)
            .into_iter()
            .map(|vertices| OddHole { kind: HoleKind::Antihole, vertices }),
    );
    out.sort();
    Ok(out)
}

/// Early-exit search: any induced odd cycle of length `5..=max_length`.
pub fn has_odd_hole(g: &ExclusivityGraph, max_length: usize) -> bool {
    (0..g.n()).any(|s| {
        let mut found = Vec::new();
        let mut path = vec![s];
        search(g, &mut path, max_length, 5, true, &mut found);
        !found.is_empty()
    })
}

/// Perfectness via the strong perfect graph theorem, exhaustive for
/// `n <= PERFECTNESS_CAP`.
pub fn is_perfect(g: &ExclusivityGraph) -> Result<bool> {
    is_perfect_with_cap(g, PERFECTNESS_CAP)
}

pub fn is_perfect_with_cap(g: &ExclusivityGraph, cap: usize) -> Result<bool> {
    if g.n() > cap {
        return Err(Error::Undecided(format!(
            "perfectness of a {}-vertex graph (cap {cap})",
            g.n()
        )));
    }
    let n = g.n();
    if n < 5 {
        return Ok(true);
    }
    Ok(!has_odd_hole(g, n) && !has_odd_hole(&g.complement(), n))
}

fn induced_odd_cycles(g: &ExclusivityGraph, max_length: usize, min_length: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0..g.n())
        .into_par_iter()
        .flat_map_iter(|s| {
            let mut found = Vec::new();
            let mut path = vec![s];
            search(g, &mut path, max_length, min_length, false, &mut found);
            found
        })
        .collect();
    all.sort();
    all
}

/// Extends the chordless path `path` (all vertices greater than `path[0]`).
fn search(
    g: &ExclusivityGraph,
    path: &mut Vec<usize>,
    max_length: usize,
    min_length: usize,
    stop_at_first: bool,
    found: &mut Vec<Vec<usize>>,
) {
    let start = path[0];
    let last = *path.last().expect("nonempty path");
    let candidates: Vec<usize> = g.neighbors(last).ones().filter(|&v| v > start).collect();
    for v in candidates {
        if stop_at_first && !found.is_empty() {
            return;
        }
        if path.contains(&v) {
            continue;
        }
        if path.len() == 1 {
            path.push(v);
            search(g, path, max_length, min_length, stop_at_first, found);
            path.pop();
            continue;
        }
        if path[1..path.len() - 1].iter().any(|&p| g.has_edge(p, v)) {
            continue;
        }
        let len = path.len() + 1;
        if g.has_edge(start, v) {
            if len >= min_length && len % 2 == 1 && len <= max_length && path[1] < v {
                let mut cycle = path.clone();
                cycle.push(v);
                found.push(cycle);
            }
        } else if len + 1 <= max_length {
            path.push(v);
            search(g, path, max_length, min_length, stop_at_first, found);
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphKind, Side};

    #[test]
    fn five_cycle_has_one_hole() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        let holes = find_odd_holes_and_antiholes(&c5, 9).unwrap();
        assert_eq!(holes.len(), 1);
        assert_eq!(holes[0].kind, HoleKind::Hole);
        assert_eq!(holes[0].vertices, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn bipartite_graphs_have_none() {
        let c8 = GraphKind::Cycle(8).build().unwrap();
        assert!(find_odd_holes_and_antiholes(&c8, 8).unwrap().is_empty());
        let edges: Vec<_> = (0..3).flat_map(|u| (3..7).map(move |v| (u, v))).collect();
        let k34 = ExclusivityGraph::abstract_graph(7, &edges, Side::B).unwrap();
        assert!(find_odd_holes_and_antiholes(&k34, 7).unwrap().is_empty());
    }

    #[test]
    fn circulant_seven_has_an_antihole() {
        let ci = GraphKind::Circulant { n: 7, offsets: vec![1, 2] }.build().unwrap();
        let holes = find_odd_holes_and_antiholes(&ci, 7).unwrap();
        assert!(holes.iter().any(|h| h.kind == HoleKind::Antihole && h.vertices.len() == 7));
        assert!(!holes.iter().any(|h| h.kind == HoleKind::Hole));
    }

    #[test]
    fn returned_cycles_are_induced_and_odd() {
        let g = GraphKind::Circulant { n: 11, offsets: vec![1, 3] }.build().unwrap();
        for h in find_odd_holes_and_antiholes(&g, 11).unwrap() {
            let host = match h.kind {
                HoleKind::Hole => g.clone(),
                HoleKind::Antihole => g.complement(),
            };
            let k = h.vertices.len();
            assert!(k % 2 == 1 && k >= 5);
            for i in 0..k {
                for j in i + 1..k {
                    let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                    assert_eq!(host.has_edge(h.vertices[i], h.vertices[j]), consecutive);
                }
            }
        }
    }

    #[test]
    fn perfectness() {
        assert!(is_perfect(&GraphKind::Cycle(8).build().unwrap()).unwrap());
        assert!(!is_perfect(&GraphKind::Cycle(5).build().unwrap()).unwrap());
        let ci = GraphKind::Circulant { n: 7, offsets: vec![1, 2] }.build().unwrap();
        assert!(!is_perfect(&ci).unwrap());
        assert!(is_perfect(&GraphKind::Complete(6).build().unwrap()).unwrap());
        let big = GraphKind::Cycle(30).build().unwrap();
        assert!(matches!(is_perfect(&big), Err(Error::Undecided(_))));
    }

    #[test]
    fn max_length_floor() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        assert!(find_odd_holes_and_antiholes(&c5, 4).is_err());
    }
}
