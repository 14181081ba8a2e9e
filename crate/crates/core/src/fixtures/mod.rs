//! Built-in inequalities and strategies used by `verify-paper` and tests.

mod verify;

pub use verify::{run_fixtures, FixtureCheck, FixtureOptions, FIXTURE_TAGS};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::invariants::WeightedInequality;
use crate::quantum::{optimal_state, PureState, QubitMeasurement};
use crate::rational::{self, Rational};
use crate::scenario::{Event, HybridScenario};

/// Seven events of `(3, 2, 2)` whose exclusivity graph is `Ci_{1,2}(7)`;
/// local bound 2.
pub const H1_EVENTS: [&str; 7] = ["100|000", "101|000", "010|001", "110|010", "001|111", "111|210", "010|201"];

/// The 48-event broadcasting inequality with local bound 8.
pub const BOWLES_EVENTS: [&str; 48] = [
    "000|000", "011|000", "101|000", "110|000", "000|011", "011|011", "101|011", "110|011", "000|111", "011|111",
    "101|111", "110|111", "000|001", "011|001", "101|001", "110|001", "000|010", "011|010", "101|010", "110|010",
    "000|101", "011|101", "101|101", "110|101", "001|100", "010|100", "100|100", "111|100", "001|110", "010|110",
    "100|110", "111|110", "000|210", "001|210", "110|210", "111|210", "000|211", "001|211", "110|211", "111|211",
    "010|200", "011|200", "100|200", "101|200", "010|201", "011|201", "100|201", "101|201",
];

/// `M_8` in `(4, 3, 3)`: vertex `i` and `i + 4` share the A setting `i`.
pub const MOBIUS_M8_EVENTS: [&str; 8] = [
    "001|000", "011|102", "010|222", "001|322", "111|021", "110|111", "101|211", "110|310",
];

/// `C_7(1, 2)` in the double-Bell scenario with three settings per party,
/// as `a1 a2 b1 b2 | x1 x2 y1 y2`.
pub const DOUBLE_BELL_C7_EVENTS: [&str; 7] = [
    "0000|0022", "1110|0101", "1011|1122", "1101|2111", "0100|2220", "1011|2212", "1101|0200",
];

/// Reference values.
pub const H1_THETA: f64 = 2.109916264174743; // 1 + 1/cos(pi/7)
pub const BOWLES_THETA: f64 = 9.464101615137754; // 6 + 2 sqrt(3)
pub const M8_THETA: f64 = 3.4141;
pub const H1_STRATEGY1_VALUE: f64 = 2.042;
pub const H1_STRATEGY2_VALUE: f64 = 2.069;
pub const H1_QUANTUM_MAX: f64 = 2.0697;

pub fn events(scenario: &HybridScenario, labels: &[&str]) -> Result<Vec<Event>> {
    labels.iter().map(|l| scenario.parse_event(l)).collect()
}

fn unit_inequality(scenario: &HybridScenario, labels: &[&str]) -> Result<WeightedInequality> {
    let ev = events(scenario, labels)?;
    let n = ev.len();
    WeightedInequality::from_events(scenario, &ev, vec![rational::one(); n])
}

pub fn h1_scenario() -> HybridScenario {
    HybridScenario::broadcasting(3, 2, 2).expect("valid scenario")
}

pub fn h1() -> WeightedInequality {
    unit_inequality(&h1_scenario(), &H1_EVENTS).expect("fixture events are valid")
}

pub fn h1_with_weight(w: Rational) -> Result<WeightedInequality> {
    h1().with_weights(vec![w; H1_EVENTS.len()])
}

pub fn bowles() -> WeightedInequality {
    unit_inequality(&h1_scenario(), &BOWLES_EVENTS).expect("fixture events are valid")
}

pub fn mobius_scenario() -> HybridScenario {
    HybridScenario::broadcasting(4, 3, 3).expect("valid scenario")
}

pub fn mobius_m8() -> WeightedInequality {
    unit_inequality(&mobius_scenario(), &MOBIUS_M8_EVENTS).expect("fixture events are valid")
}

pub fn double_bell_scenario() -> HybridScenario {
    HybridScenario::double_bell(3).expect("valid scenario")
}

pub fn double_bell_c7() -> WeightedInequality {
    unit_inequality(&double_bell_scenario(), &DOUBLE_BELL_C7_EVENTS).expect("fixture events are valid")
}

fn measurement(angles: &[(f64, f64)]) -> QubitMeasurement {
    QubitMeasurement::new(angles.to_vec())
}

/// GHZ state with the first set of printed angles (value about 2.042).
pub fn h1_strategy1() -> (PureState, Vec<QubitMeasurement>) {
    let m = vec![
        measurement(&[(4.0 * PI / 9.0, 0.0), (0.0, 0.0), (4.0 * PI / 7.0, PI / 9.0)]),
        measurement(&[(0.0, 0.0), (2.0 * PI / 9.0, -5.0 * PI / 8.0)]),
        measurement(&[(2.0 * PI / 9.0, 5.0 * PI / 9.0), (PI / 2.0, 0.0)]),
    ];
    (PureState::ghz(3), m)
}

/// Second set of printed angles. The B1 phase printed as a bare `1` is
/// read as one radian.
pub fn h1_strategy2_measurements() -> Vec<QubitMeasurement> {
    vec![
        measurement(&[(3.0 * PI / 2.0, 0.0), (0.0, 0.0), (PI / 3.0, 3.0 * PI / 2.0)]),
        measurement(&[(7.0 * PI / 23.0, 1.0), (3.0 * PI / 2.0, 0.0)]),
        measurement(&[(PI / 4.0, 3.0 * PI / 2.0), (PI / 2.0, 0.0)]),
    ]
}

/// Printed `(magnitude, phase)` pairs per ket label `ijk`, four decimals.
pub const H1_STRATEGY2_PRINTED_AMPLITUDES: [(&str, f64, f64); 8] = [
    ("000", 0.4890, PI / 2.0),
    ("100", -0.1814, 0.0),
    ("010", 0.5779, 3.0 * PI / 2.0),
    ("110", -0.0687, 3.0 * PI / 2.0),
    ("001", -0.0699, 0.0),
    ("101", 0.5287, PI / 7.0),
    ("011", 0.0, 0.0),
    ("111", -0.3240, 0.0),
];

/// The printed amplitudes taken literally with ket `ijk` meaning qubits
/// `(A, B1, B2) = (i, j, k)`, renormalized. With the printed angles this
/// state does not reach the printed value; see [`h1_strategy2`].
pub fn h1_strategy2_printed_state() -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    for (label, mag, phase) in H1_STRATEGY2_PRINTED_AMPLITUDES {
        let bits: Vec<usize> = label.bytes().map(|b| (b - b'0') as usize).collect();
        amps[bits[0] * 4 + bits[1] * 2 + bits[2]] = Complex64::from_polar(mag, phase);
    }
    PureState::normalized(amps).expect("nonzero")
}

/// The printed angles with the best state for them (top eigenvector of the
/// Bell operator). Its magnitudes agree with the printed ones to about
/// 5e-3 once ket labels are read in reverse party order.
pub fn h1_strategy2() -> (PureState, Vec<QubitMeasurement>) {
    let m = h1_strategy2_measurements();
    let (_, state) = optimal_state(&h1(), &h1_scenario(), &m).expect("fixture is consistent");
    (state, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circulant_order, GraphKind, Side};
    use crate::quantum::{evaluate_inequality, strategy_to_behavior};

    #[test]
    fn h1_graph_is_the_circulant() {
        let g = h1().graph().clone();
        assert!(circulant_order(&g, &[1, 2]).is_some());
    }

    #[test]
    fn m8_is_a_mobius_ladder_with_a_side_diameters() {
        let g = mobius_m8().graph().clone();
        assert!(circulant_order(&g, &[1, 4]).is_some());
        assert_eq!(g.edge_count(), 12);
        for i in 0..4 {
            assert!(g.side_graph(Side::A).has_edge(i, i + 4));
        }
        assert_eq!(g.side_graph(Side::A).edge_count(), 4);
        let target = GraphKind::Cycle(8).build().unwrap();
        let gb = g.side_graph(Side::B);
        assert!(circulant_order(&gb, &[1]).is_some());
        assert_eq!(gb.edge_count(), target.edge_count());
    }

    #[test]
    fn double_bell_c7_has_the_printed_structure() {
        let g = double_bell_c7().graph().clone();
        let ga = g.side_graph(Side::A);
        let gb = g.side_graph(Side::B);
        for i in 0..7 {
            assert!(ga.has_edge(i, (i + 1) % 7));
            assert!(gb.has_edge(i, (i + 2) % 7));
        }
        assert_eq!(g.edge_count(), 14);
    }

    #[test]
    fn bowles_inequality_has_48_distinct_events() {
        assert_eq!(bowles().graph().n(), 48);
    }

    #[test]
    fn strategy2_state_matches_printed_magnitudes_in_reversed_order() {
        let (state, _) = h1_strategy2();
        for (label, mag, _) in H1_STRATEGY2_PRINTED_AMPLITUDES {
            let b: Vec<usize> = label.bytes().map(|c| (c - b'0') as usize).collect();
            let idx = b[2] * 4 + b[1] * 2 + b[0];
            let got = state.amplitudes()[idx].norm();
            assert!((got - mag.abs()).abs() < 5e-3, "{label}: {got} vs {mag}");
        }
    }

    #[test]
    fn printed_state_taken_literally_falls_short() {
        let m = h1_strategy2_measurements();
        let b = strategy_to_behavior(&h1_scenario(), &h1_strategy2_printed_state(), &m).unwrap();
        let v = evaluate_inequality(&b, &h1()).unwrap();
        assert!(v < 2.0, "{v}");
    }
}
