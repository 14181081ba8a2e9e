//! Constructions of structured inequalities and randomized scans for
//! genuine ones.

mod embed;
mod scan;

pub use embed::{embed_pattern, side_events, side_exclusive, SideEvent, EMBED_NODE_BUDGET};
pub use scan::{scan_for_genuine, Candidate, ScanResult, SearchConfig};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::GraphKind;
use crate::invariants::WeightedInequality;
use crate::rational;
use crate::scenario::{Event, HybridScenario};

/// Largest double-Bell setting count tried by
/// [`construct_double_bell_circulant`].
pub const DOUBLE_BELL_MAX_SETTINGS: usize = 6;

fn assemble(scenario: &HybridScenario, a: &[SideEvent], b: &[SideEvent]) -> Result<Vec<Event>> {
    let k = scenario.num_parties();
    a.iter()
        .zip(b)
        .map(|(ea, eb)| {
            let mut outcomes = vec![0; k];
            let mut settings = vec![0; k];
            for (i, &p) in scenario.a_side().iter().enumerate() {
                outcomes[p] = ea.0[i];
                settings[p] = ea.1[i];
            }
            for (i, &p) in scenario.b_side().iter().enumerate() {
                outcomes[p] = eb.0[i];
                settings[p] = eb.1[i];
            }
            scenario.event(outcomes, settings)
        })
        .collect()
}

/// `M_{2q}` with the even cycle on the B side and the `q` diameters on the
/// A side. Needs one dichotomic A party with at least `q` settings and two
/// dichotomic B parties with `2q <= 3 min(n, m)` settings.
pub fn construct_mobius(q: usize, scenario: &HybridScenario) -> Result<WeightedInequality> {
    if q < 2 {
        return Err(Error::InvalidParameters(format!("Mobius ladder needs q >= 2, got {q}")));
    }
    let parties = scenario.parties();
    if scenario.a_side().len() != 1 || scenario.b_side().len() != 2 || !scenario.is_qubit_scenario() {
        return Err(Error::InvalidParameters(
            "Mobius construction needs a dichotomic 1 | 2 broadcasting scenario".into(),
        ));
    }
    let a = &parties[scenario.a_side()[0]];
    if a.num_settings < q {
        return Err(Error::InvalidParameters(format!(
            "A side needs at least {q} settings, has {}",
            a.num_settings
        )));
    }
    let b_parties = scenario.restricted(scenario.b_side());
    let min_b = b_parties.iter().map(|p| p.num_settings).min().unwrap_or(0);
    if 2 * q > 3 * min_b {
        return Err(Error::InvalidParameters(format!(
            "Mobius ladder M_{} needs 2q <= 3 min(n, m), have min(n, m) = {min_b}",
            2 * q
        )));
    }
    let labels_fit = q == 4 && b_parties.iter().all(|p| p.num_settings >= 3);
    let events = if labels_fit && scenario.a_side() == [0] && scenario.b_side() == [1, 2] {
        fixtures::events(scenario, &fixtures::MOBIUS_M8_EVENTS)?
    } else {
        let a_events: Vec<SideEvent> = (0..2 * q)
            .map(|i| if i < q { (vec![0], vec![i]) } else { (vec![1], vec![i - q]) })
            .collect();
        let cycle = GraphKind::Cycle(2 * q).build()?;
        let b_events = embed_pattern(&b_parties, &cycle, &|_, _, _, _| true)?;
        assemble(scenario, &a_events, &b_events)?
    };
    WeightedInequality::from_events(scenario, &events, vec![rational::one(); 2 * q])
}

/// `C_q(1, 2)` in the double-Bell scenario: A-side exclusivities on the
/// outer cycle `(i, i+1)`, B-side on the chords `(i, i+2)`. Uses the
/// smallest setting count (from 3) that admits an embedding.
pub fn construct_double_bell_circulant(q: usize) -> Result<WeightedInequality> {
    if q < 7 {
        return Err(Error::InvalidParameters(format!("double-Bell circulant needs q >= 7, got {q}")));
    }
    if q == 7 {
        return Ok(fixtures::double_bell_c7());
    }
    let outer = GraphKind::Cycle(q).build()?;
    let inner = GraphKind::Circulant { n: q, offsets: vec![2] }.build()?;
    let mut last = None;
    for settings in 3..=DOUBLE_BELL_MAX_SETTINGS {
        let scenario = HybridScenario::double_bell(settings)?;
        let a_parties = scenario.restricted(scenario.a_side());
        let b_parties = scenario.restricted(scenario.b_side());
        let attempt = embed_pattern(&a_parties, &outer, &|_, u, _, v| u != v).and_then(|a| {
            let b = embed_pattern(&b_parties, &inner, &|_, u, _, v| u != v)?;
            assemble(&scenario, &a, &b)
        });
        match attempt {
            Ok(events) => return WeightedInequality::from_events(&scenario, &events, vec![rational::one(); q]),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circulant_order, Side};

    #[test]
    fn mobius_q4_uses_the_printed_events() {
        let s = fixtures::mobius_scenario();
        let m = construct_mobius(4, &s).unwrap();
        assert_eq!(m, fixtures::mobius_m8());
    }

    #[test]
    fn mobius_embedding_for_larger_q() {
        let s = HybridScenario::broadcasting(6, 4, 4).unwrap();
        let m = construct_mobius(6, &s).unwrap();
        let g = m.graph();
        assert_eq!(g.edge_count(), 18);
        assert!(circulant_order(g, &[1, 6]).is_some());
        assert!(g.side_graph(Side::B).is_bipartite());
        assert_eq!(g.side_graph(Side::A).edge_count(), 6);
    }

    #[test]
    fn mobius_preconditions() {
        let s = HybridScenario::broadcasting(3, 3, 3).unwrap();
        assert!(construct_mobius(4, &s).is_err());
        let s = HybridScenario::broadcasting(6, 3, 3).unwrap();
        assert!(construct_mobius(6, &s).is_err());
    }

    #[test]
    fn double_bell_q8() {
        let d = construct_double_bell_circulant(8).unwrap();
        let g = d.graph();
        assert!(circulant_order(g, &[1, 2]).is_some());
        let ga = g.side_graph(Side::A);
        let gb = g.side_graph(Side::B);
        for i in 0..8 {
            assert!(ga.has_edge(i, (i + 1) % 8));
            assert!(gb.has_edge(i, (i + 2) % 8));
        }
        assert_eq!(ga.edge_count(), 8);
        assert_eq!(gb.edge_count(), 8);
        assert!(construct_double_bell_circulant(6).is_err());
    }
}
