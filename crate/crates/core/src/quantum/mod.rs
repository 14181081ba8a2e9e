//! Pure multi-qubit strategies: behaviors, inequality values, no-signaling
//! checks and a local optimizer.

mod nelder_mead;
mod optimize;

pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use optimize::{bell_operator, optimal_state, optimize_violation, OptimizeOptions, OptimizedStrategy};

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::invariants::WeightedInequality;
use crate::scenario::{Event, HybridScenario};

/// Normalization tolerance for [`PureState::new`].
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Tolerance for normalization and no-signaling of behaviors.
pub const BEHAVIOR_TOLERANCE: f64 = 1e-9;

/// `|psi>` on `k` qubits; basis index `i` has qubit 0 as its most
/// significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_length(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::UnnormalizedState(norm));
        }
        Ok(PureState { amplitudes })
    }

    /// Rescales to unit norm; fails only for the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_length(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::UnnormalizedState(norm * norm));
        }
        Ok(PureState {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn ghz(k: usize) -> Self {
        let d = 1usize << k;
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[d - 1] += Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        PureState::normalized(amps).expect("nonzero")
    }

    pub fn basis(k: usize, index: usize) -> Result<Self> {
        let d = 1usize << k;
        if index >= d {
            return Err(Error::IndexOutOfRange { index, n: d });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[index] = Complex64::new(1.0, 0.0);
        PureState::new(amps)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn norm_residual(&self) -> f64 {
        (self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs()
    }

    pub fn with_global_phase(&self, phase: f64) -> Self {
        let f = Complex64::from_polar(1.0, phase);
        PureState {
            amplitudes: self.amplitudes.iter().map(|a| a * f).collect(),
        }
    }
}

fn check_length(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidParameters(format!(
            "state length {len} is not a power of two"
        )));
    }
    Ok(())
}

/// Rank-1 projective measurements of one qubit, one `(polar, phase)` pair
/// per setting: outcome 0 projects on `cos a |0> + e^{i phi} sin a |1>`,
/// outcome 1 on its orthogonal complement.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitMeasurement {
    pub angles: Vec<(f64, f64)>,
}

impl QubitMeasurement {
    pub fn new(angles: Vec<(f64, f64)>) -> Self {
        QubitMeasurement { angles }
    }

    pub fn num_settings(&self) -> usize {
        self.angles.len()
    }

    /// The unit vector selected by `outcome` for `setting`.
    pub fn vector(&self, setting: usize, outcome: usize) -> [Complex64; 2] {
        basis_vector(self.angles[setting], outcome)
    }

    /// `|v><v|` as a row-major 2x2 matrix.
    pub fn projector(&self, setting: usize, outcome: usize) -> [[Complex64; 2]; 2] {
        let v = self.vector(setting, outcome);
        [[v[0] * v[0].conj(), v[0] * v[1].conj()], [v[1] * v[0].conj(), v[1] * v[1].conj()]]
    }
}

pub(crate) fn basis_vector((a, phi): (f64, f64), outcome: usize) -> [Complex64; 2] {
    let e = Complex64::from_polar(1.0, phi);
    let (s, c) = a.sin_cos();
    if outcome == 0 {
        [Complex64::new(c, 0.0), e * s]
    } else {
        [Complex64::new(-s, 0.0), e * c]
    }
}

/// `p(outcomes | settings)` over a scenario's event space, indexed by
/// canonical event index.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    scenario: HybridScenario,
    probabilities: Vec<f64>,
}

impl Behavior {
    pub fn new(scenario: HybridScenario, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != scenario.num_events() {
            return Err(Error::DimensionMismatch {
                expected: scenario.num_events(),
                got: probabilities.len(),
            });
        }
        Ok(Behavior {
            scenario,
            probabilities,
        })
    }

    pub fn from_fn(scenario: &HybridScenario, mut p: impl FnMut(&Event) -> f64) -> Self {
        let probabilities = scenario.enumerate_events().iter().map(&mut p).collect();
        Behavior {
            scenario: scenario.clone(),
            probabilities,
        }
    }

    pub fn scenario(&self) -> &HybridScenario {
        &self.scenario
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, event: &Event) -> f64 {
        self.probabilities[event.canonical_index]
    }

    /// Largest deviation from 1 of a per-setting outcome sum; also counts
    /// negative entries.
    pub fn normalization_residual(&self) -> f64 {
        let per = self.scenario.num_outcome_tuples();
        let negative = self.probabilities.iter().fold(0.0f64, |m, p| m.max(-p));
        self.probabilities
            .chunks(per)
            .map(|c| (c.iter().sum::<f64>() - 1.0).abs())
            .fold(negative, f64::max)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization_residual() <= BEHAVIOR_TOLERANCE
    }
}

/// `p(o|s) = |<v_o(s)|psi>|^2` with qubit `j` measured by `measurements[j]`.
pub fn strategy_to_behavior(
    scenario: &HybridScenario,
    state: &PureState,
    measurements: &[QubitMeasurement],
) -> Result<Behavior> {
    let k = scenario.num_parties();
    if !scenario.is_qubit_scenario() {
        return Err(Error::InvalidParameters("every party must be dichotomic".into()));
    }
    if state.num_qubits() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: state.num_qubits(),
        });
    }
    if measurements.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: measurements.len(),
        });
    }
    for (party, m) in scenario.parties().iter().zip(measurements) {
        if m.num_settings() != party.num_settings {
            return Err(Error::DimensionMismatch {
                expected: party.num_settings,
                got: m.num_settings(),
            });
        }
    }
    let d = 1usize << k;
    let num_settings = scenario.num_setting_tuples();
    let mut probabilities = Vec::with_capacity(num_settings * d);
    let radices: Vec<usize> = scenario.parties().iter().map(|p| p.num_settings).collect();
    let mut settings = vec![0usize; k];
    for _ in 0..num_settings {
        let mut amps = state.amplitudes().to_vec();
        for (j, m) in measurements.iter().enumerate() {
            let v0 = m.vector(settings[j], 0);
            let v1 = m.vector(settings[j], 1);
            let stride = 1usize << (k - 1 - j);
            for base in 0..d {
                if base & stride != 0 {
                    continue;
                }
                let a0 = amps[base];
                let a1 = amps[base | stride];
                amps[base] = v0[0].conj() * a0 + v0[1].conj() * a1;
                amps[base | stride] = v1[0].conj() * a0 + v1[1].conj() * a1;
            }
        }
        probabilities.extend(amps.iter().map(|a| a.norm_sqr()));
        increment(&mut settings, &radices);
    }
    Behavior::new(scenario.clone(), probabilities)
}

/// Mixed-radix increment with the last digit fastest.
fn increment(digits: &mut [usize], radices: &[usize]) {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return;
        }
        digits[i] = 0;
    }
}

/// `sum_v w_v p(v)` over the inequality's events.
pub fn evaluate_inequality(b: &Behavior, ineq: &WeightedInequality) -> Result<f64> {
    let events = ineq
        .events()
        .ok_or_else(|| Error::MissingEvent("inequality has no event labels".into()))?;
    if let Some(s) = ineq.scenario() {
        if s != b.scenario() {
            return Err(Error::MismatchedScenario("behavior and inequality scenarios differ".into()));
        }
    }
    let mut total = 0.0;
    for (e, w) in events.iter().zip(ineq.weights()) {
        let check = b.scenario().event(e.outcomes.clone(), e.settings.clone());
        match check {
            Ok(ev) if ev.canonical_index == e.canonical_index => {}
            _ => return Err(Error::MissingEvent(e.to_string())),
        }
        total += crate::rational::to_f64(w) * b.probability(e);
    }
    Ok(total)
}

/// True iff, for every nonempty proper union `T` of blocks, the marginal on
/// `T` does not depend on the settings outside `T`.
pub fn check_no_signaling(b: &Behavior, partition: &[Vec<usize>]) -> bool {
    let k = b.scenario().num_parties();
    let blocks = partition.len();
    if blocks < 2 || blocks > 20 {
        return blocks == 1;
    }
    let events = b.scenario().enumerate_events();
    for mask in 1..(1u32 << blocks) - 1 {
        let mut inside = vec![false; k];
        for (i, block) in partition.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for &p in block {
                    if p < k {
                        inside[p] = true;
                    }
                }
            }
        }
        let pick = |v: &[usize]| -> Vec<usize> { v.iter().zip(&inside).filter(|(_, &f)| f).map(|(x, _)| *x).collect() };
        // marginal keyed by (all settings, outcomes on T)
        let mut marginal: BTreeMap<(Vec<usize>, Vec<usize>), f64> = BTreeMap::new();
        for e in &events {
            *marginal.entry((e.settings.clone(), pick(&e.outcomes))).or_insert(0.0) += b.probability(e);
        }
        let mut reference: BTreeMap<(Vec<usize>, Vec<usize>), f64> = BTreeMap::new();
        for ((settings, outs), p) in marginal {
            match reference.entry((pick(&settings), outs)) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(p);
                }
                std::collections::btree_map::Entry::Occupied(o) => {
                    if (o.get() - p).abs() > BEHAVIOR_TOLERANCE {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// One block per party.
pub fn party_partition(scenario: &HybridScenario) -> Vec<Vec<usize>> {
    (0..scenario.num_parties()).map(|p| vec![p]).collect()
}
