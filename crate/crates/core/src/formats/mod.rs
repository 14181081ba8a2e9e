//! File formats read and written by the command-line tool.
//!
//! * scenarios: TOML with `a_side`, `b_side` and a `[[parties]]` table list
//! * inequalities: one `outcomes|settings [: weight]` event per line
//! * strategies: TOML with a `[state]` table and `[[measurements]]`
//! * reports: a JSON envelope around each result

mod inequality;
mod strategy;

pub use inequality::{InequalityEntry, InequalityFile};
pub use strategy::{parse_angle, StateSpec, StrategyFile};

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::invariants::{BoundReport, WeightedInequality};
use crate::rational;
use crate::scenario::{HybridScenario, Party};

pub const TOOL_NAME: &str = "hybridgraph";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioToml {
    a_side: Vec<String>,
    b_side: Vec<String>,
    parties: Vec<PartyToml>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartyToml {
    name: String,
    settings: usize,
    #[serde(default = "two")]
    outcomes: usize,
}

fn two() -> usize {
    2
}

fn toml_error(text: &str, e: toml::de::Error) -> Error {
    let line = e.span().map(|r| text[..r.start.min(text.len())].matches('\n').count() + 1).unwrap_or(0);
    Error::Parse {
        line,
        msg: e.message().to_string(),
    }
}

pub fn parse_scenario(text: &str) -> Result<HybridScenario> {
    let raw: ScenarioToml = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let parties = raw
        .parties
        .into_iter()
        .map(|p| Party::new(p.name, p.settings, p.outcomes))
        .collect();
    HybridScenario::with_named_sides(parties, &raw.a_side, &raw.b_side)
}

pub fn read_scenario(path: &Path) -> Result<HybridScenario> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

pub fn scenario_to_toml(s: &HybridScenario) -> String {
    let names = |side: &[usize]| side.iter().map(|&i| s.parties()[i].name.clone()).collect();
    let raw = ScenarioToml {
        a_side: names(s.a_side()),
        b_side: names(s.b_side()),
        parties: s
            .parties()
            .iter()
            .map(|p| PartyToml {
                name: p.name.clone(),
                settings: p.num_settings,
                outcomes: p.num_outcomes,
            })
            .collect(),
    };
    toml::to_string(&raw).expect("scenario serializes")
}

/// Whitespace-free canonical text of a scenario, used for digests.
pub fn canonical_scenario(s: &HybridScenario) -> String {
    let party = |i: &usize| {
        let p = &s.parties()[*i];
        format!("{}:{}:{}", p.name, p.num_settings, p.num_outcomes)
    };
    let side = |v: &[usize]| v.iter().map(party).collect::<Vec<_>>().join(",");
    let all: Vec<usize> = (0..s.num_parties()).collect();
    format!("parties={};a={};b={}", side(&all), side(s.a_side()), side(s.b_side()))
}

/// Canonical text of an inequality: its scenario, then `event:weight`
/// per vertex in file order.
pub fn canonical_inequality(ineq: &WeightedInequality) -> String {
    let mut out = String::new();
    if let Some(s) = ineq.scenario() {
        out.push_str(&canonical_scenario(s));
    }
    out.push('\n');
    let labels: Vec<String> = match ineq.events() {
        Some(ev) => ev.iter().map(|e| e.to_string()).collect(),
        None => (0..ineq.graph().n()).map(|i| i.to_string()).collect(),
    };
    for (l, w) in labels.iter().zip(ineq.weights()) {
        out.push_str(&format!("{l}:{}\n", rational::format(w)));
    }
    out
}

pub fn sha256_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

pub fn inequality_digest(ineq: &WeightedInequality) -> String {
    sha256_hex(&[&canonical_inequality(ineq)])
}

/// Wrapper written around every report.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub report: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: impl Into<String>, input_digest: String, report: T) -> Self {
        Envelope {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            command: command.into(),
            input_digest,
            report,
            timings_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Analysis output: the bound report plus the events it was computed on.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub events: Vec<String>,
    #[serde(serialize_with = "rational::as_string::seq")]
    pub weights: Vec<rational::Rational>,
    #[serde(flatten)]
    pub bounds: BoundReport,
}

impl AnalysisReport {
    /// Fails if the bound chain does not hold.
    pub fn new(ineq: &WeightedInequality, bounds: BoundReport) -> Result<Self> {
        if !bounds.chain_holds() {
            return Err(Error::InvalidParameters(format!(
                "bound chain violated: alpha {} alpha_hat {} alpha_star {} theta [{}, {}]",
                bounds.alpha, bounds.alpha_hat, bounds.alpha_star, bounds.theta.primal_value, bounds.theta.dual_value
            )));
        }
        Ok(AnalysisReport {
            events: event_labels(ineq),
            weights: ineq.weights().to_vec(),
            bounds,
        })
    }
}

pub fn event_labels(ineq: &WeightedInequality) -> Vec<String> {
    match ineq.events() {
        Some(ev) => ev.iter().map(|e| e.to_string()).collect(),
        None => (0..ineq.graph().n()).map(|i| i.to_string()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BROADCAST: &str = r#"
a_side = ["A"]
b_side = ["B1", "B2"]

[[parties]]
name = "A"
settings = 3

[[parties]]
name = "B1"
settings = 2

[[parties]]
name = "B2"
settings = 2
outcomes = 2
"#;

    #[test]
    fn scenario_round_trip() {
        let s = parse_scenario(BROADCAST).unwrap();
        assert_eq!(s, HybridScenario::broadcasting(3, 2, 2).unwrap());
        let again = parse_scenario(&scenario_to_toml(&s)).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn scenario_errors() {
        assert!(parse_scenario("a_side = [\"A\"]").is_err());
        let unknown = BROADCAST.replace("b_side = [\"B1\", \"B2\"]", "b_side = [\"B1\", \"C\"]");
        assert!(parse_scenario(&unknown).is_err());
        let extra = format!("{BROADCAST}\ncolor = 3\n");
        assert!(parse_scenario(&extra).is_err());
    }

    #[test]
    fn digest_ignores_layout() {
        let s = parse_scenario(BROADCAST).unwrap();
        let a = InequalityFile::parse("100|000\n101|000 : 1\n").unwrap().build(&s).unwrap();
        let b = InequalityFile::parse("# comment\n  1,0,0 | 0,0,0 :1/1\n\n101|000\n").unwrap().build(&s).unwrap();
        assert_eq!(inequality_digest(&a), inequality_digest(&b));
        let c = InequalityFile::parse("100|000 : 2\n101|000\n").unwrap().build(&s).unwrap();
        assert_ne!(inequality_digest(&a), inequality_digest(&c));
    }
}
