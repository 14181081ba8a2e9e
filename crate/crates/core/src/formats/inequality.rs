use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::invariants::WeightedInequality;
use crate::rational::{self, Rational};
use crate::scenario::HybridScenario;

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityEntry {
    pub line: usize,
    pub label: String,
    pub weight: Rational,
}

/// Parsed inequality text. A `scenario = <path>` line may precede the
/// events; the path is relative to the inequality file.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityFile {
    pub scenario: Option<String>,
    pub entries: Vec<InequalityEntry>,
}

impl InequalityFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut scenario = None;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some((key, value)) = body.split_once('=') {
                if key.trim() != "scenario" {
                    return Err(Error::parse(line, format!("unknown key {:?}", key.trim())));
                }
                if !entries.is_empty() {
                    return Err(Error::parse(line, "scenario must come before the events"));
                }
                if scenario.is_some() {
                    return Err(Error::parse(line, "scenario given twice"));
                }
                let v = value.trim().trim_matches('"');
                if v.is_empty() {
                    return Err(Error::parse(line, "empty scenario path"));
                }
                scenario = Some(v.to_string());
                continue;
            }
            let (label, weight) = match body.split_once(':') {
                Some((l, w)) => {
                    let w = rational::parse(w).map_err(|_| Error::parse(line, format!("bad weight {:?}", w.trim())))?;
                    (l.trim(), w)
                }
                None => (body, rational::one()),
            };
            if weight <= rational::zero() {
                return Err(Error::parse(line, format!("weight must be positive, got {weight}")));
            }
            entries.push(InequalityEntry {
                line,
                label: label.to_string(),
                weight,
            });
        }
        if entries.is_empty() {
            return Err(Error::parse(text.lines().count().max(1), "inequality has no events"));
        }
        Ok(InequalityFile { scenario, entries })
    }

    pub fn read(path: &Path) -> Result<Self> {
        InequalityFile::parse(&std::fs::read_to_string(path)?)
    }

    /// Resolves the events against `scenario`, rejecting duplicates.
    pub fn build(&self, scenario: &HybridScenario) -> Result<WeightedInequality> {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut events = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let ev = scenario.parse_event(&e.label).map_err(|err| Error::parse(e.line, err.to_string()))?;
            if let Some(first) = seen.insert(ev.canonical_index, e.line) {
                return Err(Error::parse(e.line, format!("event {ev} already listed on line {first}")));
            }
            events.push(ev);
        }
        let weights = self.entries.iter().map(|e| e.weight.clone()).collect();
        WeightedInequality::from_events(scenario, &events, weights)
    }

    pub fn to_text(ineq: &WeightedInequality, scenario_path: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(p) = scenario_path {
            out.push_str(&format!("scenario = {p}\n"));
        }
        for (l, w) in super::event_labels(ineq).iter().zip(ineq.weights()) {
            out.push_str(&format!("{l} : {}\n", rational::format(w)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn scenario() -> HybridScenario {
        HybridScenario::broadcasting(3, 2, 2).unwrap()
    }

    #[test]
    fn weights_and_comments() {
        let f = InequalityFile::parse("scenario = s.toml\n100|000 : 3/2 # half\n101|000:0.25\n010|001\n").unwrap();
        assert_eq!(f.scenario.as_deref(), Some("s.toml"));
        let w: Vec<_> = f.entries.iter().map(|e| e.weight.clone()).collect();
        assert_eq!(w, vec![frac(3, 2), frac(1, 4), rational::one()]);
        assert_eq!(f.build(&scenario()).unwrap().graph().n(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(InequalityFile::parse("").is_err());
        assert!(InequalityFile::parse("# only a comment\n\n").is_err());
        assert!(InequalityFile::parse("100|000 : -1").is_err());
        assert!(InequalityFile::parse("100|000 : x").is_err());
        assert!(InequalityFile::parse("100|000\nscenario = a").is_err());
        let dup = InequalityFile::parse("100|000\n1,0,0|0,0,0\n").unwrap();
        match dup.build(&scenario()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let out_of_range = InequalityFile::parse("100|300\n").unwrap();
        assert!(out_of_range.build(&scenario()).is_err());
    }

    #[test]
    fn text_round_trip() {
        let f = InequalityFile::parse("100|000 : 2\n101|000\n").unwrap();
        let ineq = f.build(&scenario()).unwrap();
        let again = InequalityFile::parse(&InequalityFile::to_text(&ineq, None)).unwrap();
        assert_eq!(again.build(&scenario()).unwrap(), ineq);
    }
}
