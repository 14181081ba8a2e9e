//! Backtracking embeddings of abstract graphs into the exclusivity
//! structure of one side of a scenario.

use crate::error::{Error, Result};
use crate::graph::ExclusivityGraph;
use crate::scenario::{count_events, Party};

/// Outcomes and settings of the parties on one side.
pub type SideEvent = (Vec<usize>, Vec<usize>);

/// Ceiling on backtracking nodes before giving up.
pub const EMBED_NODE_BUDGET: usize = 2_000_000;

/// All events over `parties`, outcome-fastest within settings-major order.
pub fn side_events(parties: &[Party]) -> Vec<SideEvent> {
    let k = parties.len();
    let mut out = Vec::with_capacity(count_events(parties));
    let mut settings = vec![0usize; k];
    loop {
        let mut outcomes = vec![0usize; k];
        loop {
            out.push((outcomes.clone(), settings.clone()));
            if !advance(&mut outcomes, parties.iter().map(|p| p.num_outcomes)) {
                break;
            }
        }
        if !advance(&mut settings, parties.iter().map(|p| p.num_settings)) {
            break;
        }
    }
    out
}

fn advance(digits: &mut [usize], radices: impl Iterator<Item = usize>) -> bool {
    let radices: Vec<usize> = radices.collect();
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Exclusive iff some party has the same setting and different outcomes.
pub fn side_exclusive(u: &SideEvent, v: &SideEvent) -> bool {
    u.1.iter()
        .zip(&v.1)
        .zip(u.0.iter().zip(&v.0))
        .any(|((su, sv), (ou, ov))| su == sv && ou != ov)
}

/// A sequence of side events whose exclusivity graph is exactly `pattern`.
/// Non-adjacent pattern vertices may reuse an event; `distinct` rejects
/// assignments where it returns false for a pair of positions. The first
/// vertex is pinned to the first event: relabeling settings and outcomes
/// per party maps any event to any other, so this loses no solutions as
/// long as `distinct` only compares events for equality.
pub fn embed_pattern(
    parties: &[Party],
    pattern: &ExclusivityGraph,
    distinct: &dyn Fn(usize, &SideEvent, usize, &SideEvent) -> bool,
) -> Result<Vec<SideEvent>> {
    let pool = side_events(parties);
    let neighbors: Vec<Vec<usize>> = pool
        .iter()
        .map(|u| (0..pool.len()).filter(|&j| side_exclusive(u, &pool[j])).collect())
        .collect();
    let mut search = Search {
        pool: &pool,
        neighbors: &neighbors,
        pattern,
        distinct,
        chosen: Vec::with_capacity(pattern.n()),
        nodes: 0,
    };
    if pattern.n() == 0 {
        return Ok(Vec::new());
    }
    search.chosen.push(0);
    if search.extend() {
        Ok(search.chosen.into_iter().map(|i| pool[i].clone()).collect())
    } else if search.nodes >= EMBED_NODE_BUDGET {
        Err(Error::InvalidParameters(format!(
            "no embedding found within {EMBED_NODE_BUDGET} search nodes"
        )))
    } else {
        Err(Error::InvalidParameters("pattern does not embed into this side".into()))
    }
}

struct Search<'a> {
    pool: &'a [SideEvent],
    neighbors: &'a [Vec<usize>],
    pattern: &'a ExclusivityGraph,
    distinct: &'a dyn Fn(usize, &SideEvent, usize, &SideEvent) -> bool,
    chosen: Vec<usize>,
    nodes: usize,
}

impl Search<'_> {
    fn extend(&mut self) -> bool {
        let pos = self.chosen.len();
        if pos == self.pattern.n() {
            return true;
        }
        // Candidates must neighbor the latest adjacent position, if any.
        let anchor = (0..pos).rev().find(|&i| self.pattern.has_edge(i, pos));
        let candidates: Vec<usize> = match anchor {
            Some(i) => self.neighbors[self.chosen[i]].clone(),
            None => (0..self.pool.len()).collect(),
        };
        for c in candidates {
            let ev = &self.pool[c];
            let ok = self.chosen.iter().enumerate().all(|(i, &prev)| {
                let u = &self.pool[prev];
                side_exclusive(u, ev) == self.pattern.has_edge(i, pos) && (self.distinct)(i, u, pos, ev)
            });
            if !ok {
                continue;
            }
            self.nodes += 1;
            if self.nodes >= EMBED_NODE_BUDGET {
                return false;
            }
            self.chosen.push(c);
            if self.extend() {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}
