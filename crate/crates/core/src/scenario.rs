//! Hybrid causal scenarios and their event spaces.
//!
//! Events are ranked settings-major, outcomes-minor, with parties in
//! declaration order (party 0 is the most significant digit). That rank is
//! the vertex index of the event in the full exclusivity graph.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Party {
    pub name: String,
    pub num_settings: usize,
    pub num_outcomes: usize,
}

impl Party {
    pub fn new(name: impl Into<String>, num_settings: usize, num_outcomes: usize) -> Self {
        Party {
            name: name.into(),
            num_settings,
            num_outcomes,
        }
    }

    pub fn qubit(name: impl Into<String>, num_settings: usize) -> Self {
        Party::new(name, num_settings, 2)
    }
}

/// Parties split into an A-side (local causality) and a B-side block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HybridScenario {
    parties: Vec<Party>,
    a_side: Vec<usize>,
    b_side: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    pub outcomes: Vec<usize>,
    pub settings: Vec<usize>,
    pub canonical_index: usize,
}

impl fmt::Display for Event {
    /// `"100|000"` when every entry is a single digit, `"1,0,0|0,0,0"` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.outcomes.iter().chain(&self.settings).all(|&v| v < 10);
        let join = |v: &[usize]| {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            parts.join(if compact { "" } else { "," })
        };
        write!(f, "{}|{}", join(&self.outcomes), join(&self.settings))
    }
}

impl HybridScenario {
    pub fn new(parties: Vec<Party>, a_side: Vec<usize>, b_side: Vec<usize>) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::InvalidScenario("no parties".into()));
        }
        for p in &parties {
            if p.num_settings < 1 {
                return Err(Error::InvalidScenario(format!(
                    "party {} needs at least one setting",
                    p.name
                )));
            }
            if p.num_outcomes < 2 {
                return Err(Error::InvalidScenario(format!(
                    "party {} needs at least two outcomes",
                    p.name
                )));
            }
        }
        for (i, p) in parties.iter().enumerate() {
            if parties[..i].iter().any(|q| q.name == p.name) {
                return Err(Error::InvalidScenario(format!(
                    "duplicate party name {}",
                    p.name
                )));
            }
        }
        if a_side.is_empty() || b_side.is_empty() {
            return Err(Error::InvalidScenario(
                "both sides need at least one party".into(),
            ));
        }
        let mut seen = vec![0u8; parties.len()];
        for &i in a_side.iter().chain(&b_side) {
            if i >= parties.len() {
                return Err(Error::InvalidScenario(format!("party index {i} out of range")));
            }
            seen[i] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err(Error::InvalidScenario(
                "a_side and b_side must be disjoint and cover every party".into(),
            ));
        }
        let mut a_side = a_side;
        let mut b_side = b_side;
        a_side.sort_unstable();
        b_side.sort_unstable();
        Ok(HybridScenario {
            parties,
            a_side,
            b_side,
        })
    }

    /// Builds a scenario from party names for each side.
    pub fn with_named_sides(
        parties: Vec<Party>,
        a_names: &[impl AsRef<str>],
        b_names: &[impl AsRef<str>],
    ) -> Result<Self> {
        let lookup = |name: &str| {
            parties
                .iter()
                .position(|p| p.name == name)
                .ok_or_else(|| Error::InvalidScenario(format!("unknown party {name}")))
        };
        let a = a_names
            .iter()
            .map(|n| lookup(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let b = b_names
            .iter()
            .map(|n| lookup(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        HybridScenario::new(parties, a, b)
    }

    /// Tripartite broadcasting scenario with dichotomic outcomes: party `A`
    /// on the A-side, `B1`, `B2` on the B-side.
    pub fn broadcasting(x: usize, y1: usize, y2: usize) -> Result<Self> {
        HybridScenario::new(
            vec![Party::qubit("A", x), Party::qubit("B1", y1), Party::qubit("B2", y2)],
            vec![0],
            vec![1, 2],
        )
    }

    /// Two bipartite Bell blocks: `A1`, `A2` local, `B1`, `B2` no-signaling.
    pub fn double_bell(settings: usize) -> Result<Self> {
        HybridScenario::new(
            vec![
                Party::qubit("A1", settings),
                Party::qubit("A2", settings),
                Party::qubit("B1", settings),
                Party::qubit("B2", settings),
            ],
            vec![0, 1],
            vec![2, 3],
        )
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn num_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn a_side(&self) -> &[usize] {
        &self.a_side
    }

    pub fn b_side(&self) -> &[usize] {
        &self.b_side
    }

    pub fn all_parties(&self) -> Vec<usize> {
        (0..self.parties.len()).collect()
    }

    pub fn num_setting_tuples(&self) -> usize {
        self.parties.iter().map(|p| p.num_settings).product()
    }

    pub fn num_outcome_tuples(&self) -> usize {
        self.parties.iter().map(|p| p.num_outcomes).product()
    }

    pub fn num_events(&self) -> usize {
        count_events(&self.parties)
    }

    pub fn is_qubit_scenario(&self) -> bool {
        self.parties.iter().all(|p| p.num_outcomes == 2)
    }

    fn check(&self, outcomes: &[usize], settings: &[usize]) -> Result<()> {
        let k = self.parties.len();
        if outcomes.len() != k || settings.len() != k {
            return Err(Error::MismatchedScenario(format!(
                "expected {k} outcomes and settings, got {} and {}",
                outcomes.len(),
                settings.len()
            )));
        }
        for (p, party) in self.parties.iter().enumerate() {
            if outcomes[p] >= party.num_outcomes || settings[p] >= party.num_settings {
                return Err(Error::MismatchedScenario(format!(
                    "party {} value out of range (outcome {}, setting {})",
                    party.name, outcomes[p], settings[p]
                )));
            }
        }
        Ok(())
    }

    pub fn setting_rank(&self, settings: &[usize]) -> usize {
        self.parties
            .iter()
            .zip(settings)
            .fold(0, |acc, (p, &s)| acc * p.num_settings + s)
    }

    pub fn outcome_rank(&self, outcomes: &[usize]) -> usize {
        self.parties
            .iter()
            .zip(outcomes)
            .fold(0, |acc, (p, &o)| acc * p.num_outcomes + o)
    }

    /// Validates and ranks an event.
    pub fn event(&self, outcomes: Vec<usize>, settings: Vec<usize>) -> Result<Event> {
        self.check(&outcomes, &settings)?;
        let canonical_index =
            self.setting_rank(&settings) * self.num_outcome_tuples() + self.outcome_rank(&outcomes);
        Ok(Event {
            outcomes,
            settings,
            canonical_index,
        })
    }

    pub fn event_from_index(&self, index: usize) -> Result<Event> {
        if index >= self.num_events() {
            return Err(Error::IndexOutOfRange {
                index,
                n: self.num_events(),
            });
        }
        let per_setting = self.num_outcome_tuples();
        let settings = unrank(index / per_setting, self.parties.iter().map(|p| p.num_settings));
        let outcomes = unrank(index % per_setting, self.parties.iter().map(|p| p.num_outcomes));
        Ok(Event {
            outcomes,
            settings,
            canonical_index: index,
        })
    }

    /// Parses `"100|000"`, or `"1,0,0|0,0,0"` when values need more than
    /// one digit.
    pub fn parse_event(&self, text: &str) -> Result<Event> {
        let t = text.trim();
        let (o, st) = t
            .split_once('|')
            .ok_or_else(|| Error::parse(0, format!("event {t:?} lacks '|'")))?;
        let digits = |part: &str| -> Result<Vec<usize>> {
            let part = part.trim();
            let bad = || Error::parse(0, format!("bad event {t:?}"));
            if part.contains(',') {
                part.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
            } else {
                part.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect()
            }
        };
        self.event(digits(o)?, digits(st)?)
    }

    /// Every event of the scenario, ordered by canonical index.
    pub fn enumerate_events(&self) -> Vec<Event> {
        (0..self.num_events())
            .map(|i| self.event_from_index(i).expect("index within range"))
            .collect()
    }

    /// True iff some party in `party_subset` uses the same setting in both
    /// events but reports different outcomes.
    pub fn are_exclusive(&self, u: &Event, v: &Event, party_subset: &[usize]) -> Result<bool> {
        self.check(&u.outcomes, &u.settings)?;
        self.check(&v.outcomes, &v.settings)?;
        if party_subset.is_empty() {
            return Err(Error::InvalidParameters("empty party subset".into()));
        }
        if let Some(&p) = party_subset.iter().find(|&&p| p >= self.parties.len()) {
            return Err(Error::MismatchedScenario(format!("party index {p} out of range")));
        }
        Ok(exclusive_on(u, v, party_subset))
    }

    /// Which sides make the pair exclusive: `(a_side, b_side)`.
    pub fn exclusivity_sides(&self, u: &Event, v: &Event) -> (bool, bool) {
        (
            exclusive_on(u, v, &self.a_side),
            exclusive_on(u, v, &self.b_side),
        )
    }

    /// Sub-scenario containing only the given parties, in the given order.
    /// Used by constructors that embed patterns one side at a time.
    pub fn restricted(&self, parties: &[usize]) -> Vec<Party> {
        parties.iter().map(|&p| self.parties[p].clone()).collect()
    }
}

/// Size of the event space spanned by a list of parties.
pub fn count_events(parties: &[Party]) -> usize {
    parties.iter().map(|p| p.num_settings * p.num_outcomes).product()
}

pub(crate) fn exclusive_on(u: &Event, v: &Event, parties: &[usize]) -> bool {
    parties
        .iter()
        .any(|&p| u.settings[p] == v.settings[p] && u.outcomes[p] != v.outcomes[p])
}

fn unrank(mut rank: usize, radices: impl DoubleEndedIterator<Item = usize>) -> Vec<usize> {
    let mut digits: Vec<usize> = radices
        .rev()
        .map(|r| {
            let d = rank % r;
            rank /= r;
            d
        })
        .collect();
    digits.reverse();
    digits
}
