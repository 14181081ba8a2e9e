//! Randomized scan of induced subgraphs for inequalities with
//! `alpha < alpha_hat`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{has_odd_hole, is_perfect, EdgeTag, ExclusivityGraph, Side};
use crate::invariants::{compute_bounds, BoundReport, WeightedInequality};
use crate::rational::Rational;
use crate::scenario::{Event, HybridScenario};

/// Smallest subgraph that can contain an odd hole.
pub const MIN_SUBGRAPH_SIZE: usize = 5;
const BATCH: usize = 32;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub scenario: HybridScenario,
    pub max_subgraph_size: usize,
    pub palette: Vec<Rational>,
    pub seed: u64,
    /// Number of samples to draw.
    pub samples: usize,
    /// Wall-clock limit; when hit, the result is marked partial.
    pub time_budget: Option<Duration>,
}

impl SearchConfig {
    pub fn new(scenario: HybridScenario, max_subgraph_size: usize, palette: Vec<Rational>, seed: u64) -> Result<Self> {
        let c = SearchConfig {
            scenario,
            max_subgraph_size,
            palette,
            seed,
            samples: 2_000,
            time_budget: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_subgraph_size < MIN_SUBGRAPH_SIZE {
            return Err(Error::InvalidParameters(format!(
                "max subgraph size must be at least {MIN_SUBGRAPH_SIZE}, got {}",
                self.max_subgraph_size
            )));
        }
        if self.palette.is_empty() {
            return Err(Error::InvalidParameters("weight palette is empty".into()));
        }
        if let Some(w) = self.palette.iter().find(|w| **w <= Rational::from_integer(0.into())) {
            return Err(Error::InvalidParameters(format!("palette weights must be positive, got {w}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub inequality: WeightedInequality,
    pub report: BoundReport,
    /// SHA-256 of the sorted event indices and weights.
    pub hash: String,
    /// Index of the sample that first produced it.
    pub sample: usize,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub candidates: Vec<Candidate>,
    pub samples_drawn: usize,
    /// Samples that passed all three pre-filters and reached the bounds.
    pub evaluated: usize,
    pub solver_failures: usize,
    /// Sample index and error for each failure, in sample order.
    pub failures: Vec<(usize, String)>,
    /// True when the time budget ran out before all samples were drawn.
    pub partial: bool,
}

enum Outcome {
    Filtered,
    Failed(usize, String),
    Evaluated(Option<Candidate>),
}

/// Draws `config.samples` connected induced subgraphs with random palette
/// weights. Sample `i` uses ChaCha stream `i` of `config.seed`, so results
/// do not depend on scheduling. Candidates with `alpha < alpha_hat` are
/// returned sorted by `(alpha_hat - alpha, theta.dual - alpha_hat)`
/// descending, then by hash.
pub fn scan_for_genuine(config: &SearchConfig) -> Result<ScanResult> {
    config.validate()?;
    let full = ExclusivityGraph::from_scenario(&config.scenario, None)?;
    let start = Instant::now();
    let mut out = ScanResult {
        candidates: Vec::new(),
        samples_drawn: 0,
        evaluated: 0,
        solver_failures: 0,
        failures: Vec::new(),
        partial: false,
    };
    let mut seen = BTreeSet::new();
    let mut next = 0;
    while next < config.samples {
        if let Some(budget) = config.time_budget {
            if start.elapsed() >= budget {
                out.partial = true;
                break;
            }
        }
        let end = (next + BATCH).min(config.samples);
        let outcomes: Vec<Outcome> = (next..end)
            .into_par_iter()
            .map(|i| evaluate_sample(config, &full, i))
            .collect();
        out.samples_drawn += end - next;
        for o in outcomes {
            match o {
                Outcome::Filtered => {}
                Outcome::Failed(i, msg) => {
                    out.evaluated += 1;
                    out.solver_failures += 1;
                    out.failures.push((i, msg));
                }
                Outcome::Evaluated(c) => {
                    out.evaluated += 1;
                    if let Some(c) = c {
                        if seen.insert(c.hash.clone()) {
                            out.candidates.push(c);
                        }
                    }
                }
            }
        }
        next = end;
    }
    out.candidates.sort_by(|x, y| {
        let gx = &x.report.alpha_hat - &x.report.alpha;
        let gy = &y.report.alpha_hat - &y.report.alpha;
        let tx = x.report.theta.dual_value - crate::rational::to_f64(&x.report.alpha_hat);
        let ty = y.report.theta.dual_value - crate::rational::to_f64(&y.report.alpha_hat);
        gy.cmp(&gx).then(ty.total_cmp(&tx)).then(x.hash.cmp(&y.hash))
    });
    Ok(out)
}

/// Random connected growth. Half the samples instead start from a random
/// induced odd cycle of B-only edges that is stable in `G_A`, the shape
/// that lets `alpha_hat` exceed `alpha`, then attach vertices with an
/// A-side edge into the sample and as many edges into it as possible,
/// which keeps `alpha` low.
fn sample_vertices(full: &ExclusivityGraph, rng: &mut ChaCha8Rng, size: usize) -> Vec<usize> {
    let n = full.n();
    let size = size.min(n);
    let mut chosen = vec![rng.gen_range(0..n)];
    if rng.gen_bool(0.5) {
        let lengths: Vec<usize> = [5, 7, 9].into_iter().filter(|&l| l < size).collect();
        if !lengths.is_empty() {
            let len = lengths[rng.gen_range(0..lengths.len())];
            if let Some(hole) = (0..HOLE_ATTEMPTS).find_map(|_| random_b_hole(full, rng, len)) {
                chosen = hole;
            }
        }
        let core = rng.gen_range(MIN_SUBGRAPH_SIZE..size.max(MIN_SUBGRAPH_SIZE + 1)).min(size);
        while chosen.len() < core {
            let frontier: Vec<usize> = chosen
                .iter()
                .flat_map(|&v| full.neighbors(v).ones().filter(move |&u| full.tag(v, u) == Some(EdgeTag::BOnly)))
                .filter(|&u| !chosen.contains(&u) && a_side_free(full, u, &chosen))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if frontier.is_empty() {
                break;
            }
            chosen.push(frontier[rng.gen_range(0..frontier.len())]);
        }
        while chosen.len() < size {
            let scored: Vec<(usize, usize)> = (0..n)
                .filter(|u| !chosen.contains(u))
                .filter(|&u| chosen.iter().any(|&c| full.tag(u, c).is_some_and(|t| t.includes(Side::A))))
                .map(|u| (u, chosen.iter().filter(|&&c| full.has_edge(u, c)).count()))
                .collect();
            let Some(best) = scored.iter().map(|s| s.1).max() else { break };
            let top: Vec<usize> = scored.iter().filter(|s| s.1 == best).map(|s| s.0).collect();
            chosen.push(top[rng.gen_range(0..top.len())]);
        }
        chosen.sort_unstable();
        return chosen;
    }
    while chosen.len() < size {
        let frontier: Vec<usize> = chosen
            .iter()
            .flat_map(|&v| full.neighbors(v).ones())
            .filter(|u| !chosen.contains(u))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pick = if !frontier.is_empty() && rng.gen_bool(0.85) {
            frontier[rng.gen_range(0..frontier.len())]
        } else {
            rng.gen_range(0..n)
        };
        if !chosen.contains(&pick) {
            chosen.push(pick);
        }
    }
    chosen.sort_unstable();
    chosen
}

const HOLE_ATTEMPTS: usize = 20;

fn a_side_free(full: &ExclusivityGraph, u: usize, others: &[usize]) -> bool {
    others.iter().all(|&c| full.tag(u, c).map_or(true, |t| !t.includes(Side::A)))
}

/// A random walk that closes an induced B-only cycle of length `len`.
fn random_b_hole(full: &ExclusivityGraph, rng: &mut ChaCha8Rng, len: usize) -> Option<Vec<usize>> {
    let mut path = vec![rng.gen_range(0..full.n())];
    while path.len() < len {
        let last = *path.last().expect("nonempty");
        let closing = path.len() == len - 1;
        let candidates: Vec<usize> = full
            .neighbors(last)
            .ones()
            .filter(|&u| full.tag(last, u) == Some(EdgeTag::BOnly) && !path.contains(&u))
            .filter(|&u| a_side_free(full, u, &path))
            .filter(|&u| {
                path[..path.len() - 1].iter().enumerate().all(|(i, &p)| {
                    if i == 0 && closing {
                        full.tag(u, p) == Some(EdgeTag::BOnly)
                    } else {
                        !full.has_edge(u, p)
                    }
                })
            })
            .collect();
        if candidates.is_empty() {
            return None;
        }
        path.push(candidates[rng.gen_range(0..candidates.len())]);
    }
    Some(path)
}

fn evaluate_sample(config: &SearchConfig, full: &ExclusivityGraph, index: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let size = rng.gen_range(MIN_SUBGRAPH_SIZE..=config.max_subgraph_size);
    let vertices = sample_vertices(full, &mut rng, size);
    let weights: Vec<Rational> = (0..vertices.len())
        .map(|_| config.palette[rng.gen_range(0..config.palette.len())].clone())
        .collect();
    let labels = full.labels().expect("scenario graph is labeled");
    let events: Vec<Event> = vertices.iter().map(|&v| labels[v].clone()).collect();
    let g = full.induced_subgraph(&vertices).expect("vertices in range");
    let k = g.n();
    // (1) an odd hole or antihole, (2) imperfect G_B, (3) some A-side edge
    if !(has_odd_hole(&g, k) || has_odd_hole(&g.complement(), k)) {
        return Outcome::Filtered;
    }
    if is_perfect(&g.side_graph(Side::B)).unwrap_or(false) {
        return Outcome::Filtered;
    }
    if !g.has_side_edges(Side::A) {
        return Outcome::Filtered;
    }
    let ineq = match WeightedInequality::from_events(&config.scenario, &events, weights) {
        Ok(i) => i,
        Err(e) => return Outcome::Failed(index, e.to_string()),
    };
    let report = match compute_bounds(&ineq) {
        Ok(r) => r,
        Err(e) => return Outcome::Failed(index, e.to_string()),
    };
    if report.alpha >= report.alpha_hat {
        return Outcome::Evaluated(None);
    }
    let hash = candidate_hash(&events, ineq.weights());
    Outcome::Evaluated(Some(Candidate {
        inequality: ineq,
        report,
        hash,
        sample: index,
    }))
}

fn candidate_hash(events: &[Event], weights: &[Rational]) -> String {
    let mut h = Sha256::new();
    for (e, w) in events.iter().zip(weights) {
        h.update(format!("{}:{};", e.canonical_index, w).as_bytes());
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn config_invariants() {
        let s = HybridScenario::broadcasting(2, 2, 2).unwrap();
        assert!(SearchConfig::new(s.clone(), 4, vec![int(1)], 0).is_err());
        assert!(SearchConfig::new(s.clone(), 6, vec![], 0).is_err());
        assert!(SearchConfig::new(s, 6, vec![int(0)], 0).is_err());
    }

    #[test]
    fn same_seed_same_output() {
        let s = HybridScenario::broadcasting(2, 2, 2).unwrap();
        let mut c = SearchConfig::new(s, 8, vec![int(1), int(2)], 5).unwrap();
        c.samples = 64;
        let a = scan_for_genuine(&c).unwrap();
        let b = scan_for_genuine(&c).unwrap();
        assert_eq!(a.samples_drawn, 64);
        assert_eq!(a.evaluated, b.evaluated);
        let ha: Vec<_> = a.candidates.iter().map(|c| c.hash.clone()).collect();
        let hb: Vec<_> = b.candidates.iter().map(|c| c.hash.clone()).collect();
        assert_eq!(ha, hb);
        for c in &a.candidates {
            assert!(c.report.chain_holds());
        }
    }
}
