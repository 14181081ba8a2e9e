//! Local search for large quantum values. For fixed measurements the best
//! pure state is the top eigenvector of the Bell operator, so only the
//! measurement angles are searched.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use super::{basis_vector, PureState, QubitMeasurement};
use crate::error::{Error, Result};
use crate::invariants::WeightedInequality;
use crate::rational;
use crate::scenario::HybridScenario;
use crate::solvers::jacobi_eigen;

#[derive(Debug, Clone, Copy)]
pub struct OptimizeOptions {
    pub restarts: usize,
    pub evaluations_per_round: usize,
    /// Extra Nelder-Mead rounds from the incumbent with a shrinking simplex.
    pub polish_rounds: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            restarts: 20,
            evaluations_per_round: 6_000,
            polish_rounds: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizedStrategy {
    pub value: f64,
    pub state: PureState,
    pub measurements: Vec<QubitMeasurement>,
    /// Index of the restart that produced the strategy.
    pub restart: usize,
}

struct Term {
    weight: f64,
    settings: Vec<usize>,
    outcomes: Vec<usize>,
}

fn terms(ineq: &WeightedInequality, scenario: &HybridScenario) -> Result<Vec<Term>> {
    if !scenario.is_qubit_scenario() {
        return Err(Error::InvalidParameters("every party must be dichotomic".into()));
    }
    if let Some(s) = ineq.scenario() {
        if s != scenario {
            return Err(Error::MismatchedScenario("inequality belongs to another scenario".into()));
        }
    }
    let events = ineq
        .events()
        .ok_or_else(|| Error::MissingEvent("inequality has no event labels".into()))?;
    Ok(events
        .iter()
        .zip(ineq.weights())
        .map(|(e, w)| Term {
            weight: rational::to_f64(w),
            settings: e.settings.clone(),
            outcomes: e.outcomes.clone(),
        })
        .collect())
}

fn operator(terms: &[Term], measurements: &[QubitMeasurement]) -> Vec<Complex64> {
    let k = measurements.len();
    let d = 1usize << k;
    let mut b = vec![Complex64::new(0.0, 0.0); d * d];
    let mut phi = vec![Complex64::new(0.0, 0.0); d];
    for t in terms {
        phi.iter_mut().for_each(|c| *c = Complex64::new(1.0, 0.0));
        for (j, m) in measurements.iter().enumerate() {
            let v = basis_vector(m.angles[t.settings[j]], t.outcomes[j]);
            let bit = 1usize << (k - 1 - j);
            for (i, c) in phi.iter_mut().enumerate() {
                *c *= if i & bit == 0 { v[0] } else { v[1] };
            }
        }
        for i in 0..d {
            let wi = phi[i] * t.weight;
            for j in 0..d {
                b[i * d + j] += wi * phi[j].conj();
            }
        }
    }
    b
}

/// `sum_v w_v Pi_v` as a row-major `2^k x 2^k` Hermitian matrix.
pub fn bell_operator(
    ineq: &WeightedInequality,
    scenario: &HybridScenario,
    measurements: &[QubitMeasurement],
) -> Result<Vec<Complex64>> {
    let t = terms(ineq, scenario)?;
    check_measurements(scenario, measurements)?;
    Ok(operator(&t, measurements))
}

fn check_measurements(scenario: &HybridScenario, measurements: &[QubitMeasurement]) -> Result<()> {
    if measurements.len() != scenario.num_parties() {
        return Err(Error::DimensionMismatch {
            expected: scenario.num_parties(),
            got: measurements.len(),
        });
    }
    for (p, m) in scenario.parties().iter().zip(measurements) {
        if m.num_settings() != p.num_settings {
            return Err(Error::DimensionMismatch {
                expected: p.num_settings,
                got: m.num_settings(),
            });
        }
    }
    Ok(())
}

/// Top eigenpair of a Hermitian matrix through its real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`.
fn top_eigenpair(h: &[Complex64], d: usize, want_vector: bool) -> (f64, Option<Vec<Complex64>>) {
    let m = 2 * d;
    let mut real = vec![0.0; m * m];
    for i in 0..d {
        for j in 0..d {
            let z = h[i * d + j];
            real[i * m + j] = z.re;
            real[(i + d) * m + j + d] = z.re;
            real[i * m + j + d] = -z.im;
            real[(i + d) * m + j] = z.im;
        }
    }
    // Symmetrize against rounding in the accumulated sum.
    for i in 0..m {
        for j in i + 1..m {
            let a = 0.5 * (real[i * m + j] + real[j * m + i]);
            real[i * m + j] = a;
            real[j * m + i] = a;
        }
    }
    let e = jacobi_eigen(&real, m).expect("square symmetric input");
    let value = e.values[m - 1];
    let vector = want_vector.then(|| {
        let v = &e.vectors[m - 1];
        (0..d).map(|i| Complex64::new(v[i], v[i + d])).collect()
    });
    (value, vector)
}

/// The best state for fixed measurements and its value.
pub fn optimal_state(
    ineq: &WeightedInequality,
    scenario: &HybridScenario,
    measurements: &[QubitMeasurement],
) -> Result<(f64, PureState)> {
    let b = bell_operator(ineq, scenario, measurements)?;
    let d = 1usize << measurements.len();
    let (value, v) = top_eigenpair(&b, d, true);
    Ok((value, PureState::normalized(v.expect("requested"))?))
}

fn unpack(x: &[f64], scenario: &HybridScenario) -> Vec<QubitMeasurement> {
    let mut it = x.chunks(2);
    scenario
        .parties()
        .iter()
        .map(|p| {
            QubitMeasurement::new(
                (0..p.num_settings)
                    .map(|_| {
                        let c = it.next().expect("parameter count");
                        (c[0], c[1])
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Restarted Nelder-Mead over measurement angles. Each restart draws its
/// start from a ChaCha stream derived from `seed` and the restart index;
/// the best value wins, ties going to the lower index.
pub fn optimize_violation(
    ineq: &WeightedInequality,
    scenario: &HybridScenario,
    seed: u64,
    opts: OptimizeOptions,
) -> Result<OptimizedStrategy> {
    let t = terms(ineq, scenario)?;
    let d = 1usize << scenario.num_parties();
    let dim = 2 * scenario.parties().iter().map(|p| p.num_settings).sum::<usize>();
    let objective = |x: &[f64]| -top_eigenpair(&operator(&t, &unpack(x, scenario)), d, false).0;
    let runs: Vec<(f64, usize, Vec<f64>)> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let x0: Vec<f64> = (0..dim)
                .map(|i| {
                    if i % 2 == 0 {
                        rng.gen_range(0.0..std::f64::consts::PI)
                    } else {
                        rng.gen_range(0.0..std::f64::consts::TAU)
                    }
                })
                .collect();
            let mut step = 0.5;
            let mut best = nelder_mead(
                objective,
                &x0,
                NelderMeadOptions {
                    initial_step: step,
                    max_evaluations: opts.evaluations_per_round,
                    ..Default::default()
                },
            );
            for _ in 0..opts.polish_rounds {
                step *= 0.3;
                let next = nelder_mead(
                    objective,
                    &best.x,
                    NelderMeadOptions {
                        initial_step: step,
                        max_evaluations: opts.evaluations_per_round,
                        ..Default::default()
                    },
                );
                if next.value < best.value {
                    best = next;
                }
            }
            (-best.value, r, best.x)
        })
        .collect();
    let (_, restart, x) = runs
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("at least one restart");
    let measurements = unpack(&x, scenario);
    let (value, state) = optimal_state(ineq, scenario, &measurements)?;
    Ok(OptimizedStrategy {
        value,
        state,
        measurements,
        restart,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{evaluate_inequality, strategy_to_behavior};
    use crate::rational::int;
    use crate::scenario::Party;

    fn chsh_like() -> (HybridScenario, WeightedInequality) {
        // p(a = b | xy) summed over xy with a flip at x = y = 1: the CHSH game.
        let s = HybridScenario::new(vec![Party::qubit("A", 2), Party::qubit("B", 2)], vec![0], vec![1]).unwrap();
        let events: Vec<_> = s
            .enumerate_events()
            .into_iter()
            .filter(|e| (e.outcomes[0] ^ e.outcomes[1]) == (e.settings[0] & e.settings[1]))
            .collect();
        let n = events.len();
        let ineq = WeightedInequality::from_events(&s, &events, vec![int(1); n]).unwrap();
        (s, ineq)
    }

    #[test]
    fn eigenvector_value_matches_behavior_value() {
        let (s, ineq) = chsh_like();
        let m = vec![
            QubitMeasurement::new(vec![(0.1, 0.2), (0.9, -0.3)]),
            QubitMeasurement::new(vec![(0.4, 1.0), (1.3, 0.0)]),
        ];
        let (value, state) = optimal_state(&ineq, &s, &m).unwrap();
        let b = strategy_to_behavior(&s, &state, &m).unwrap();
        assert!((evaluate_inequality(&b, &ineq).unwrap() - value).abs() < 1e-10);
    }

    #[test]
    fn reaches_tsirelson() {
        let (s, ineq) = chsh_like();
        let opt = optimize_violation(&ineq, &s, 3, OptimizeOptions { restarts: 4, ..Default::default() }).unwrap();
        let tsirelson = 2.0 + 2f64.sqrt();
        assert!((opt.value - tsirelson).abs() < 1e-6, "{}", opt.value);
    }

    #[test]
    fn deterministic_given_seed() {
        let (s, ineq) = chsh_like();
        let o = OptimizeOptions { restarts: 2, evaluations_per_round: 300, polish_rounds: 1 };
        let a = optimize_violation(&ineq, &s, 11, o).unwrap();
        let b = optimize_violation(&ineq, &s, 11, o).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.measurements, b.measurements);
    }
}
