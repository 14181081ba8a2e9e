use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::invariants::WeightedInequality;
use crate::quantum::{optimal_state, PureState, QubitMeasurement};
use crate::scenario::HybridScenario;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrategyToml {
    state: StateToml,
    measurements: Vec<MeasurementToml>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateToml {
    preset: Option<String>,
    amplitudes: Option<Vec<[f64; 2]>>,
    /// Computational basis index, qubit 0 most significant.
    basis: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasurementToml {
    party: String,
    angles: Vec<[AngleToml; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AngleToml {
    Number(f64),
    Text(String),
}

impl AngleToml {
    fn value(&self) -> Result<f64> {
        match self {
            AngleToml::Number(x) => Ok(*x),
            AngleToml::Text(t) => parse_angle(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Ghz,
    /// Top eigenvector of the Bell operator for the given measurements.
    Optimal,
    Basis(usize),
    Amplitudes(Vec<Complex64>),
}

/// A qubit strategy: a state and one measurement per party, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyFile {
    pub state: StateSpec,
    pub measurements: Vec<(String, QubitMeasurement)>,
}

/// Parses `"0.5"`, `"-pi/2"`, `"4pi/9"`, `"4*pi/9"`, `"3/2 pi"` or `"2/3"`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::parse(0, format!("bad angle {text:?}"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase().replace('π', "pi");
    let number = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => match s.split_once('/') {
                Some((n, d)) => {
                    let (n, d): (f64, f64) = (n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?);
                    if d == 0.0 {
                        Err(bad())
                    } else {
                        Ok(n / d)
                    }
                }
                None => s.parse().map_err(|_| bad()),
            },
        }
    };
    let value = match t.split_once("pi") {
        Some((coef, rest)) => {
            let c = number(coef.trim_end_matches('*'))?;
            let d = match rest {
                "" => 1.0,
                r => match r.strip_prefix('/') {
                    Some(d) => d.parse::<f64>().map_err(|_| bad())?,
                    None => return Err(bad()),
                },
            };
            if d == 0.0 {
                return Err(bad());
            }
            c * PI / d
        }
        None if !t.is_empty() => number(&t)?,
        None => return Err(bad()),
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

impl StrategyFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: StrategyToml = toml::from_str(text).map_err(|e| super::toml_error(text, e))?;
        let given = [raw.state.preset.is_some(), raw.state.amplitudes.is_some(), raw.state.basis.is_some()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::parse(0, "[state] needs exactly one of preset, amplitudes, basis"));
        }
        let state = if let Some(p) = raw.state.preset {
            match p.as_str() {
                "ghz" => StateSpec::Ghz,
                "optimal" => StateSpec::Optimal,
                other => return Err(Error::parse(0, format!("unknown state preset {other:?}"))),
            }
        } else if let Some(a) = raw.state.amplitudes {
            StateSpec::Amplitudes(a.iter().map(|c| Complex64::new(c[0], c[1])).collect())
        } else {
            StateSpec::Basis(raw.state.basis.expect("checked above"))
        };
        let measurements = raw
            .measurements
            .into_iter()
            .map(|m| {
                let angles = m
                    .angles
                    .iter()
                    .map(|[a, p]| Ok((a.value()?, p.value()?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((m.party, QubitMeasurement::new(angles)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StrategyFile { state, measurements })
    }

    pub fn read(path: &Path) -> Result<Self> {
        StrategyFile::parse(&std::fs::read_to_string(path)?)
    }

    /// Measurements reordered to the scenario's party order, each with one
    /// angle pair per setting.
    pub fn measurements_for(&self, scenario: &HybridScenario) -> Result<Vec<QubitMeasurement>> {
        if !scenario.is_qubit_scenario() {
            return Err(Error::InvalidScenario("strategies need dichotomic outcomes".into()));
        }
        let k = scenario.num_parties();
        if self.measurements.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: self.measurements.len(),
            });
        }
        scenario
            .parties()
            .iter()
            .map(|p| {
                let (_, m) = self
                    .measurements
                    .iter()
                    .find(|(name, _)| *name == p.name)
                    .ok_or_else(|| Error::InvalidParameters(format!("no measurement for party {}", p.name)))?;
                if m.num_settings() != p.num_settings {
                    return Err(Error::DimensionMismatch {
                        expected: p.num_settings,
                        got: m.num_settings(),
                    });
                }
                Ok(m.clone())
            })
            .collect()
    }

    pub fn resolve(&self, ineq: &WeightedInequality, scenario: &HybridScenario) -> Result<(PureState, Vec<QubitMeasurement>)> {
        let m = self.measurements_for(scenario)?;
        let k = scenario.num_parties();
        let state = match &self.state {
            StateSpec::Ghz => PureState::ghz(k),
            StateSpec::Basis(i) => PureState::basis(k, *i)?,
            StateSpec::Optimal => optimal_state(ineq, scenario, &m)?.1,
            StateSpec::Amplitudes(a) => {
                if a.len() != 1 << k {
                    return Err(Error::DimensionMismatch {
                        expected: 1 << k,
                        got: a.len(),
                    });
                }
                PureState::new(a.clone())?
            }
        };
        Ok((state, m))
    }

    /// Canonical text for digests; floats are written in shortest
    /// round-trip form.
    pub fn canonical(&self) -> String {
        let state = match &self.state {
            StateSpec::Ghz => "ghz".to_string(),
            StateSpec::Optimal => "optimal".to_string(),
            StateSpec::Basis(i) => format!("basis:{i}"),
            StateSpec::Amplitudes(a) => a.iter().map(|c| format!("{:?},{:?}", c.re, c.im)).collect::<Vec<_>>().join(";"),
        };
        let mut out = format!("state={state}\n");
        for (name, m) in &self.measurements {
            let angles: Vec<String> = m.angles.iter().map(|(a, p)| format!("{a:?},{p:?}")).collect();
            out.push_str(&format!("{name}={}\n", angles.join(";")));
        }
        out
    }
}
