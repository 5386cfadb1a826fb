//! The single-qubit fine-grained uncertainty bound ζ: the maximum over
//! states of the probability-weighted sum of hitting one target outcome per
//! measurement.
//!
//! The total probability is the expectation of Σ_t p(t) Π_t where Π_t
//! projects onto the target outcome of measurement t, so the maximum over
//! all states is the top eigenvalue of that operator and is attained by the
//! matching eigenvector. Convexity makes the pure-state maximum the maximum
//! over mixed states as well, so nothing beyond the eigenproblem is needed.
//! Multiparty analogues of ζ are exactly the game maxima computed by the
//! other modules.

use crate::qcore::{
    bloch_observable, expectation, hermitian_eigen, outcome_projector, ComplexMatrix, Ket,
};
use crate::{Error, Result};

/// One weighted measurement: probability of being asked, Bloch angles of the
/// observable, and the target outcome bit.
#[derive(Debug, Clone)]
pub struct FurMeasurement {
    pub weight: f64,
    pub theta: f64,
    pub phi: f64,
    pub target: u8,
}

/// A list of weighted single-qubit measurements with target outcomes.
#[derive(Debug, Clone)]
pub struct FurScenario {
    measurements: Vec<FurMeasurement>,
}

impl FurScenario {
    pub fn new(measurements: Vec<FurMeasurement>) -> Result<Self> {
        if measurements.is_empty() {
            return Err(Error::InvalidValue("scenario needs at least one measurement".into()));
        }
        if measurements.iter().any(|m| !m.weight.is_finite() || m.weight < 0.0) {
            return Err(Error::InvalidValue("weights must be >= 0".into()));
        }
        if measurements.iter().any(|m| m.target > 1) {
            return Err(Error::InvalidValue("targets are outcome bits".into()));
        }
        let sum: f64 = measurements.iter().map(|m| m.weight).sum();
        if (sum - 1.0).abs() > crate::tol::ARITHMETIC {
            return Err(Error::InvalidValue(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self { measurements })
    }

    pub fn measurements(&self) -> &[FurMeasurement] {
        &self.measurements
    }

    /// Σ_t p(t) Π_t^(target), the operator whose top eigenvalue is ζ.
    fn weighted_projector_sum(&self) -> ComplexMatrix {
        let mut op = ComplexMatrix::zeros(2, 2);
        for m in &self.measurements {
            let projector = outcome_projector(&bloch_observable(m.theta, m.phi), m.target)
                .expect("bloch observables are involutions");
            op = op.add(&projector.scale(m.weight)).expect("2x2 shapes");
        }
        op
    }
}

/// The bound and a state attaining it.
#[derive(Debug, Clone)]
pub struct ZetaResult {
    pub value: f64,
    pub argmax_state: Ket,
}

/// Maximum total success probability over all single-qubit states.
pub fn zeta(scenario: &FurScenario) -> ZetaResult {
    let eigen = hermitian_eigen(&scenario.weighted_projector_sum())
        .expect("weighted projector sums are Hermitian 2x2");
    ZetaResult { value: eigen.max_value(), argmax_state: eigen.max_vector().clone() }
}

/// Total success probability Σ_t p(t) <psi| Π_t |psi> of one state.
pub fn p_total(scenario: &FurScenario, state: &Ket) -> Result<f64> {
    if state.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "single-qubit scenario, state of dim {}",
            state.dim()
        )));
    }
    expectation(&scenario.weighted_projector_sum(), state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::SplitMix64;
    use crate::qcore::Complex;
    use std::f64::consts::PI;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn two_measurement(weight: f64, theta2: f64, t1: u8, t2: u8) -> FurScenario {
        FurScenario::new(vec![
            FurMeasurement { weight, theta: 0.0, phi: 0.0, target: t1 },
            FurMeasurement { weight: 1.0 - weight, theta: theta2, phi: 0.0, target: t2 },
        ])
        .unwrap()
    }

    #[test]
    fn single_measurement_is_certain() {
        let scenario =
            FurScenario::new(vec![FurMeasurement { weight: 1.0, theta: 0.0, phi: 0.0, target: 0 }])
                .unwrap();
        let z = zeta(&scenario);
        approx(z.value, 1.0, 1e-12);
        approx(z.argmax_state.fidelity(&Ket::basis(2, 0)), 1.0, 1e-12);
    }

    #[test]
    fn z_and_x_at_equal_weight() {
        let scenario = two_measurement(0.5, PI / 2.0, 0, 0);
        let z = zeta(&scenario);
        approx(z.value, 0.5 + 0.5 / 2f64.sqrt(), 1e-12);
        // Argmax is the +1 eigenstate of (σ_x + σ_z)/√2.
        let diag =
            crate::qcore::pauli_x().add(&crate::qcore::pauli_z()).unwrap().scale(1.0 / 2f64.sqrt());
        let eigen = hermitian_eigen(&diag).unwrap();
        approx(z.argmax_state.fidelity(eigen.max_vector()), 1.0, 1e-12);
    }

    #[test]
    fn contradictory_targets_cap_at_half() {
        let scenario = two_measurement(0.5, 0.0, 0, 1);
        approx(zeta(&scenario).value, 0.5, 1e-12);
    }

    #[test]
    fn p_total_by_hand_at_basis_state() {
        // ½·1 (σ_z target hit surely) + ½·½ (σ_x target is a coin flip).
        let scenario = two_measurement(0.5, PI / 2.0, 0, 0);
        approx(p_total(&scenario, &Ket::basis(2, 0)).unwrap(), 0.75, 1e-12);
    }

    #[test]
    fn p_total_at_argmax_equals_zeta() {
        let scenario = two_measurement(0.3, 1.1, 0, 1);
        let z = zeta(&scenario);
        approx(p_total(&scenario, &z.argmax_state).unwrap(), z.value, 1e-12);
    }

    #[test]
    fn orthogonal_eigenvector_collects_the_rest() {
        // Two rank-1 targets at weight ½ give a trace-one operator, so the
        // other eigenvalue is 1 - ζ.
        let scenario = two_measurement(0.5, PI / 2.0, 0, 0);
        let eigen = hermitian_eigen(&scenario.weighted_projector_sum()).unwrap();
        let z = zeta(&scenario);
        approx(p_total(&scenario, &eigen.vectors[0]).unwrap(), 1.0 - z.value, 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let scenario = two_measurement(0.5, PI / 2.0, 0, 0);
        assert!(p_total(&scenario, &Ket::basis(4, 0)).is_err());
    }

    #[test]
    fn zeta_bounds_random_states() {
        let scenario = two_measurement(0.4, 2.0, 0, 0);
        let z = zeta(&scenario);
        assert!(z.value >= 0.6 - 1e-12); // max_t p(t): the heavier target alone
        assert!(z.value <= 1.0 + 1e-12);
        let mut rng = SplitMix64::new(17);
        for _ in 0..500 {
            let amps: Vec<Complex> =
                (0..2).map(|_| Complex::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0))).collect();
            let Ok(state) = Ket::new(amps) else { continue };
            assert!(p_total(&scenario, &state).unwrap() <= z.value + 1e-12);
        }
    }

    #[test]
    fn certainty_iff_targets_share_a_fixed_state() {
        // Identical observable and target: ζ = 1.
        let same = two_measurement(0.5, 0.0, 0, 0);
        approx(zeta(&same).value, 1.0, 1e-12);
        // Random non-commuting targets: ζ < 1, and the commutator is
        // genuinely nonzero.
        let mut rng = SplitMix64::new(23);
        for _ in 0..200 {
            let theta = rng.range(0.2, PI - 0.2);
            let scenario = two_measurement(0.5, theta, 0, 0);
            let a = bloch_observable(0.0, 0.0);
            let b = bloch_observable(theta, 0.0);
            let ab = a.mul(&b).unwrap();
            let ba = b.mul(&a).unwrap();
            let commutator_norm = ab.max_abs_diff(&ba);
            assert!(commutator_norm > 1e-3);
            assert!(zeta(&scenario).value < 1.0 - 1e-6);
        }
    }
}
