//! Quantum behaviors from pure states and angle-parameterized projective
//! measurements, plus maximization of winning probabilities and correlation
//! operators over the measurement angles.
//!
//! Each party measures one of two ±1-valued spin observables, parameterized
//! by Bloch angles (θ, φ). Observables act qubit-wise on the shared state,
//! so nothing here ever builds a matrix larger than 2x2.

use crate::games::{correlation_coefficients, Behavior, Game, XorGameSpec};
use crate::optim::{nelder_mead, stationarity_residual, SplitMix64};
use crate::qcore::{Complex, Ket};
use crate::tol;
use crate::{classical, Error, Result};
use std::f64::consts::PI;

/// Measurement angles (θ, φ) per party per setting.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetup {
    n_parties: usize,
    n_settings: usize,
    /// angles[party * n_settings + setting].
    angles: Vec<(f64, f64)>,
}

impl MeasurementSetup {
    pub fn new(n_parties: usize, n_settings: usize, angles: Vec<(f64, f64)>) -> Result<Self> {
        if angles.len() != n_parties * n_settings {
            return Err(Error::ShapeMismatch(format!(
                "{} angle pairs for {} parties x {} settings",
                angles.len(),
                n_parties,
                n_settings
            )));
        }
        if angles.iter().any(|(t, p)| !t.is_finite() || !p.is_finite()) {
            return Err(Error::InvalidValue("angles must be finite".into()));
        }
        Ok(Self { n_parties, n_settings, angles })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn n_settings(&self) -> usize {
        self.n_settings
    }

    pub fn theta(&self, party: usize, setting: usize) -> f64 {
        self.angles[party * self.n_settings + setting].0
    }

    pub fn phi(&self, party: usize, setting: usize) -> f64 {
        self.angles[party * self.n_settings + setting].1
    }

    pub fn angles(&self) -> &[(f64, f64)] {
        &self.angles
    }

    /// Same directions with θ folded into [0, π] and φ into [0, 2π), so
    /// reported argmax angles are stable across runs.
    pub fn canonicalized(&self) -> Self {
        let angles =
            self.angles.iter().map(|&(theta, phi)| canonical_direction(theta, phi)).collect();
        Self { n_parties: self.n_parties, n_settings: self.n_settings, angles }
    }

    fn from_flat(n_parties: usize, n_settings: usize, flat: &[f64]) -> Self {
        let angles = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        Self { n_parties, n_settings, angles }
    }
}

fn canonical_direction(theta: f64, phi: f64) -> (f64, f64) {
    let two_pi = 2.0 * PI;
    let mut t = theta.rem_euclid(two_pi);
    let mut p = phi;
    if t > PI {
        t = two_pi - t;
        p += PI;
    }
    (t, p.rem_euclid(two_pi))
}

/// A shared pure state of `n_parties` qubits.
#[derive(Debug, Clone)]
pub struct PureState {
    n_parties: usize,
    ket: Ket,
}

impl PureState {
    pub fn new(n_parties: usize, ket: Ket) -> Result<Self> {
        if ket.dim() != 1 << n_parties {
            return Err(Error::DimensionMismatch(format!(
                "{} parties need dim {}, got {}",
                n_parties,
                1 << n_parties,
                ket.dim()
            )));
        }
        Ok(Self { n_parties, ket })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn ket(&self) -> &Ket {
        &self.ket
    }
}

/// (|000> + |111>)/√2.
pub fn ghz_state() -> PureState {
    let h = Complex::real(1.0);
    let z = Complex::real(0.0);
    let ket = Ket::new(vec![h, z, z, z, z, z, z, h]).expect("nonzero");
    PureState { n_parties: 3, ket }
}

/// (|001> + |010> + |100>)/√3.
pub fn w_state() -> PureState {
    let h = Complex::real(1.0);
    let z = Complex::real(0.0);
    let ket = Ket::new(vec![z, h, h, z, h, z, z, z]).expect("nonzero");
    PureState { n_parties: 3, ket }
}

/// (|00> + |11>)/√2, the state reaching the bipartite quantum maximum.
pub fn chsh_optimal_state() -> PureState {
    let h = Complex::real(1.0);
    let z = Complex::real(0.0);
    let ket = Ket::new(vec![h, z, z, h]).expect("nonzero");
    PureState { n_parties: 2, ket }
}

/// 2x2 kernel used in the hot loops; layout [[m00, m01], [m10, m11]].
#[derive(Debug, Clone, Copy)]
struct Mat2 {
    e: [[Complex; 2]; 2],
}

fn bloch2(theta: f64, phi: f64) -> Mat2 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Mat2 {
        e: [
            [Complex::new(ct, 0.0), Complex::new(st * cp, -st * sp)],
            [Complex::new(st * cp, st * sp), Complex::new(-ct, 0.0)],
        ],
    }
}

fn projector2(obs: Mat2, outcome: u8) -> Mat2 {
    let sign = if outcome & 1 == 0 { 0.5 } else { -0.5 };
    let id = [[1.0, 0.0], [0.0, 1.0]];
    let mut e = obs.e;
    for i in 0..2 {
        for j in 0..2 {
            e[i][j] = Complex::new(0.5 * id[i][j] + sign * obs.e[i][j].re, sign * obs.e[i][j].im);
        }
    }
    Mat2 { e }
}

/// Apply a 2x2 operator to one qubit of an amplitude vector. Party 0 is the
/// most significant qubit (see the crate index conventions).
fn apply_single_qubit(m: Mat2, amps: &mut [Complex], party: usize, n_parties: usize) {
    let stride = 1usize << (n_parties - 1 - party);
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for offset in 0..stride {
            let i0 = base + offset;
            let i1 = i0 + stride;
            let a0 = amps[i0];
            let a1 = amps[i1];
            amps[i0] = m.e[0][0] * a0 + m.e[0][1] * a1;
            amps[i1] = m.e[1][0] * a0 + m.e[1][1] * a1;
        }
        base += 2 * stride;
    }
}

/// <psi| (⊗_p ops[p]) |psi>, real part. Applies the operators qubit-wise —
/// numerically identical to building the Kronecker product.
fn product_expectation(psi: &[Complex], ops: &[Mat2], scratch: &mut Vec<Complex>) -> f64 {
    scratch.clear();
    scratch.extend_from_slice(psi);
    let n_parties = ops.len();
    for (party, op) in ops.iter().enumerate() {
        apply_single_qubit(*op, scratch, party, n_parties);
    }
    let mut acc = Complex::real(0.0);
    for (a, b) in psi.iter().zip(scratch.iter()) {
        acc += a.conj() * *b;
    }
    debug_assert!(acc.im.abs() < tol::STRUCTURAL);
    acc.re
}

fn decode_setting(setting_idx: usize, party: usize, n_settings: usize) -> usize {
    (setting_idx / n_settings.pow(party as u32)) % n_settings
}

/// The behavior induced by projective measurements on a shared pure state:
/// `p(outcomes | settings) = <psi| ⊗_p Π_p^(o_p) |psi>`.
pub fn quantum_behavior(state: &PureState, setup: &MeasurementSetup) -> Result<Behavior> {
    if state.n_parties != setup.n_parties {
        return Err(Error::ShapeMismatch(format!(
            "state has {} parties, setup {}",
            state.n_parties, setup.n_parties
        )));
    }
    let n_parties = state.n_parties;
    let n_settings = setup.n_settings;
    let n_setting_tuples = n_settings.pow(n_parties as u32);
    let n_outcome_tuples = 1usize << n_parties;
    let psi = state.ket.amplitudes();
    let mut scratch = Vec::with_capacity(psi.len());

    let mut table = Vec::with_capacity(n_setting_tuples);
    for s_idx in 0..n_setting_tuples {
        // Both outcome projectors for each party's chosen setting.
        let projectors: Vec<[Mat2; 2]> = (0..n_parties)
            .map(|p| {
                let s = decode_setting(s_idx, p, n_settings);
                let obs = bloch2(setup.theta(p, s), setup.phi(p, s));
                [projector2(obs, 0), projector2(obs, 1)]
            })
            .collect();
        let mut row = Vec::with_capacity(n_outcome_tuples);
        for o_idx in 0..n_outcome_tuples {
            let ops: Vec<Mat2> = (0..n_parties).map(|p| projectors[p][(o_idx >> p) & 1]).collect();
            row.push(product_expectation(psi, &ops, &mut scratch));
        }
        table.push(row);
    }
    Behavior::new(n_parties, n_settings, 2, table)
}

/// Correlation-operator expectation Σ_s c(s) <⊗_p O_p(s_p)> of an XOR game's
/// operator at the given state and angles. For uniform settings this equals
/// `N (2 P_win - 1)`.
pub fn operator_expectation(
    spec: &XorGameSpec,
    state: &PureState,
    setup: &MeasurementSetup,
) -> Result<f64> {
    if state.n_parties != spec.n_parties() || setup.n_parties != spec.n_parties() {
        return Err(Error::ShapeMismatch("party counts disagree".into()));
    }
    if setup.n_settings != spec.n_settings() {
        return Err(Error::ShapeMismatch("setting counts disagree".into()));
    }
    let coeffs = correlation_coefficients(spec);
    Ok(operator_value_fast(&coeffs, state, setup))
}

fn operator_value_fast(coeffs: &[f64], state: &PureState, setup: &MeasurementSetup) -> f64 {
    let n_parties = state.n_parties;
    let n_settings = setup.n_settings;
    let psi = state.ket.amplitudes();
    let observables: Vec<Mat2> = (0..n_parties * n_settings)
        .map(|i| {
            let (t, p) = setup.angles[i];
            bloch2(t, p)
        })
        .collect();
    let mut scratch = Vec::with_capacity(psi.len());
    let mut ops = Vec::with_capacity(n_parties);
    let mut total = 0.0;
    for (s_idx, &c) in coeffs.iter().enumerate() {
        ops.clear();
        for p in 0..n_parties {
            let s = decode_setting(s_idx, p, n_settings);
            ops.push(observables[p * n_settings + s]);
        }
        total += c * product_expectation(psi, &ops, &mut scratch);
    }
    total
}

/// Winning probability evaluated directly from angles, used as the
/// optimizer objective for general predicate games.
fn game_value_fast(game: &Game, state: &PureState, setup: &MeasurementSetup) -> f64 {
    let n_parties = state.n_parties;
    let n_settings = setup.n_settings;
    let n_outcome_tuples = 1usize << n_parties;
    let psi = state.ket.amplitudes();
    let mut scratch = Vec::with_capacity(psi.len());
    let mut total = 0.0;
    for s_idx in 0..game.n_setting_tuples() {
        let p_s = game.setting_probability(s_idx);
        if p_s == 0.0 {
            continue;
        }
        let projectors: Vec<[Mat2; 2]> = (0..n_parties)
            .map(|p| {
                let s = decode_setting(s_idx, p, n_settings);
                let obs = bloch2(setup.theta(p, s), setup.phi(p, s));
                [projector2(obs, 0), projector2(obs, 1)]
            })
            .collect();
        let mut conditional = 0.0;
        for o_idx in 0..n_outcome_tuples {
            if game.wins(o_idx, s_idx) {
                let ops: Vec<Mat2> =
                    (0..n_parties).map(|p| projectors[p][(o_idx >> p) & 1]).collect();
                conditional += product_expectation(psi, &ops, &mut scratch);
            }
        }
        total += p_s * conditional;
    }
    total
}

/// Search configuration. Defaults: 100 restarts, seed 42, 2000 iterations
/// per restart, simplex diameter 1e-10.
#[derive(Debug, Clone)]
pub struct OptimizeConfig {
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self { restarts: 100, seed: 42, max_iters: 2000, tol: tol::NM_DIAMETER }
    }
}

/// Result of a multi-start search. `best_value` is a certified lower bound
/// on the true maximum: it is achieved by `best_setup`.
#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub best_value: f64,
    pub best_setup: MeasurementSetup,
    pub restarts_run: usize,
    /// Max |central-difference gradient component| at the optimum.
    pub stationarity_residual: f64,
    /// Best value found by each restart, in restart order.
    pub history: Vec<f64>,
}

/// Maximize the winning probability of a binary-outcome game over all
/// projective measurement setups on the given shared state.
pub fn optimize_game(
    game: &Game,
    state: &PureState,
    config: &OptimizeConfig,
) -> Result<OptimizationResult> {
    if game.n_parties() != state.n_parties {
        return Err(Error::ShapeMismatch("game and state party counts disagree".into()));
    }
    if game.n_outcomes() != 2 {
        return Err(Error::InvalidConfig(
            "projective qubit measurements produce binary outcomes".into(),
        ));
    }
    let n_settings = game.n_settings();
    let mut objective = |flat: &[f64]| {
        let setup = MeasurementSetup::from_flat(state.n_parties, n_settings, flat);
        -game_value_fast(game, state, &setup)
    };
    run_multistart(&mut objective, state.n_parties, n_settings, config, &[])
}

/// Maximize the correlation-operator expectation of an XOR game over all
/// projective measurement setups on the given shared state.
///
/// Restart 0 starts from the classical ±1 argmax embedded as equatorial
/// measurements, and restarts 1–2 from z-axis embeddings; these make the
/// reported maximum provably at least the classical operator value for the
/// standard shared states, on top of being good starting guesses.
pub fn optimize_operator(
    spec: &XorGameSpec,
    state: &PureState,
    config: &OptimizeConfig,
) -> Result<OptimizationResult> {
    if spec.n_parties() != state.n_parties {
        return Err(Error::ShapeMismatch("spec and state party counts disagree".into()));
    }
    let coeffs = correlation_coefficients(spec);
    let signs = classical::operator_argmax_signs(spec.n_parties(), spec.n_settings(), &coeffs);
    let warm_starts = classical_embeddings(&signs, spec.n_settings());
    let mut objective = |flat: &[f64]| {
        let setup = MeasurementSetup::from_flat(state.n_parties, spec.n_settings(), flat);
        -operator_value_fast(&coeffs, state, &setup)
    };
    run_multistart(&mut objective, state.n_parties, spec.n_settings(), config, &warm_starts)
}

/// Flat-angle embeddings of a classical ±1 assignment.
///
/// Equatorial: sign +1 -> (π/2, 0), -1 -> (π/2, π); on GHZ-class states the
/// resulting correlators are exactly the classical products. Z-axis:
/// +1 -> σ_z, -1 -> -σ_z, which does the same on states with deterministic
/// z-parity (W up to a global flip, hence the third variant).
fn classical_embeddings(signs: &[Vec<i8>], n_settings: usize) -> Vec<Vec<f64>> {
    let equatorial: Vec<f64> = signs
        .iter()
        .flat_map(|per_party| {
            per_party.iter().flat_map(|&sign| {
                let phi = if sign > 0 { 0.0 } else { PI };
                [PI / 2.0, phi]
            })
        })
        .collect();
    let z_axis = |flip_first: bool| -> Vec<f64> {
        signs
            .iter()
            .enumerate()
            .flat_map(|(party, per_party)| {
                per_party.iter().flat_map(move |&sign| {
                    let mut up = sign > 0;
                    if flip_first && party == 0 {
                        up = !up;
                    }
                    let theta = if up { 0.0 } else { PI };
                    [theta, 0.0]
                })
            })
            .collect()
    };
    let _ = n_settings;
    vec![equatorial, z_axis(false), z_axis(true)]
}

fn run_multistart(
    objective: &mut dyn FnMut(&[f64]) -> f64,
    n_parties: usize,
    n_settings: usize,
    config: &OptimizeConfig,
    warm_starts: &[Vec<f64>],
) -> Result<OptimizationResult> {
    if config.restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be positive".into()));
    }
    let dim = 2 * n_parties * n_settings;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_point: Vec<f64> = Vec::new();
    let mut history = Vec::with_capacity(config.restarts);

    for restart in 0..config.restarts {
        let start: Vec<f64> = if restart < warm_starts.len() {
            warm_starts[restart].clone()
        } else {
            let mut rng = SplitMix64::for_restart(config.seed, restart as u64);
            (0..dim)
                .map(|i| if i % 2 == 0 { rng.range(0.0, PI) } else { rng.range(0.0, 2.0 * PI) })
                .collect()
        };
        let run = nelder_mead(objective, &start, 0.3, config.tol, config.max_iters);
        let value = -run.best_value;
        history.push(value);
        if value > best_value {
            best_value = value;
            best_point = run.best_point;
        }
    }

    let residual = stationarity_residual(objective, &best_point, tol::FD_STEP);
    let best_setup =
        MeasurementSetup::from_flat(n_parties, n_settings, &best_point).canonicalized();
    Ok(OptimizationResult {
        best_value,
        best_setup,
        restarts_run: config.restarts,
        stationarity_residual: residual,
        history,
    })
}

/// The two reported GHZ-optimal angle sets for the tripartite Mermin-type
/// games, verbatim to the four printed decimals. The mermin_a set evaluates
/// to its reported operator maximum; see the tests for how far the mermin_b
/// set lands from its.
pub struct ReferenceAngles {
    pub mermin_a_ghz: MeasurementSetup,
    pub mermin_b_ghz: MeasurementSetup,
}

// The tables are reported verbatim to four decimals; 1.5708 stays 1.5708.
#[allow(clippy::approx_constant)]
pub fn reference_angles() -> ReferenceAngles {
    let mermin_a_ghz = MeasurementSetup::new(
        3,
        2,
        vec![
            (3.1149, 2.5271), // A, setting 0
            (1.5708, 0.4608), // A, setting 1
            (1.5708, 1.7282), // B, setting 0
            (4.7124, 1.7282), // B, setting 1
            (4.7124, 0.9526), // C, setting 0
            (4.7124, 4.0942), // C, setting 1
        ],
    )
    .expect("fixed table");
    let mermin_b_ghz = MeasurementSetup::new(
        3,
        2,
        vec![
            (4.7124, 1.6707), // A, setting 0
            (4.7124, 1.6737), // A, setting 1
            (1.5708, 4.6120), // B, setting 0
            (4.7124, 1.4735), // B, setting 1
            (4.7124, 6.2806), // C, setting 0
            (4.7124, 4.0005), // C, setting 1
        ],
    )
    .expect("fixed table");
    ReferenceAngles { mermin_a_ghz, mermin_b_ghz }
}
