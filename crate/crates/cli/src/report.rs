//! The `analyze` and `zeta` subcommands: load inputs, run the per-theory
//! pipeline, serialize reports with a stable key order.

use crate::{Failure, Format};
use nlgames_core::classical::classical_max;
use nlgames_core::fur::{zeta, FurMeasurement, FurScenario};
use nlgames_core::games::schema::GameFile;
use nlgames_core::games::{winning_probability, Game, XorGameSpec};
use nlgames_core::nosignal::ns_max;
use nlgames_core::qcore::{Complex, Ket};
use nlgames_core::quantum::{
    chsh_optimal_state, ghz_state, optimize_game, optimize_operator, quantum_behavior, w_state,
    OptimizeConfig, PureState,
};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::Instant;

/// Slack allowed when validating classical <= quantum <= no-signaling in the
/// assembled report.
const HIERARCHY_SLACK: f64 = 1e-9;

#[derive(Serialize)]
struct AnalysisReport {
    schema_version: u32,
    game: GameSummary,
    seed: u64,
    restarts: usize,
    classical: ClassicalSection,
    quantum: Vec<QuantumSection>,
    no_signaling: NoSignalingSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<TimingsSection>,
}

#[derive(Serialize)]
struct GameSummary {
    name: String,
    parties: usize,
    settings: usize,
    outcomes: usize,
    xor: bool,
}

#[derive(Serialize)]
struct ClassicalSection {
    value: f64,
    /// Outcome tables per party, indexed by setting.
    strategy: Vec<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator_value: Option<f64>,
}

#[derive(Serialize)]
struct QuantumSection {
    state: String,
    winning_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator_value: Option<f64>,
    restarts_run: usize,
    stationarity_residual: f64,
    /// Canonicalized (θ, φ) per party per setting, party-major.
    best_angles: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct NoSignalingSection {
    value: f64,
}

#[derive(Serialize)]
struct TimingsSection {
    classical: u128,
    quantum: u128,
    no_signaling: u128,
}

pub fn run_analyze(
    game_file: &Path,
    seed: u64,
    restarts: usize,
    states: Option<&str>,
    format: Format,
    timings: bool,
) -> Result<String, Failure> {
    let text = std::fs::read_to_string(game_file)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", game_file.display())))?;
    let file: GameFile = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{} does not parse: {e}", game_file.display())))?;
    let game = file.to_game().map_err(|e| Failure::input(e.to_string()))?;
    let xor_spec = file.to_xor_spec().map_err(|e| Failure::input(e.to_string()))?;
    let name = game_file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "game".into());

    let states = resolve_states(states, game.n_parties())?;
    let config = OptimizeConfig { restarts, seed, ..OptimizeConfig::default() };

    let t0 = Instant::now();
    let (classical_value, strategy) = classical_max(&game).map_err(Failure::from_core)?;
    let classical_operator = xor_spec.as_ref().map(|spec| {
        nlgames_core::classical::classical_operator_max(
            spec.n_parties(),
            spec.n_settings(),
            &nlgames_core::games::correlation_coefficients(spec),
        )
    });
    let t1 = Instant::now();

    let mut quantum = Vec::new();
    for (label, state) in &states {
        quantum.push(quantum_section(&game, xor_spec.as_ref(), label, state, &config)?);
    }
    let t2 = Instant::now();

    let (ns_value, _) = ns_max(&game).map_err(Failure::from_core)?;
    let t3 = Instant::now();

    // The theory hierarchy is an invariant of correct output, not a hope.
    for q in &quantum {
        if classical_value > q.winning_probability + HIERARCHY_SLACK
            || q.winning_probability > ns_value + HIERARCHY_SLACK
        {
            return Err(Failure::internal(format!(
                "hierarchy violated: classical {classical_value} / quantum {} ({}) / no-signaling {ns_value}",
                q.winning_probability, q.state
            )));
        }
    }

    let report = AnalysisReport {
        schema_version: 1,
        game: GameSummary {
            name,
            parties: game.n_parties(),
            settings: game.n_settings(),
            outcomes: game.n_outcomes(),
            xor: xor_spec.is_some(),
        },
        seed,
        restarts,
        classical: ClassicalSection {
            value: classical_value,
            strategy: strategy.tables().to_vec(),
            operator_value: classical_operator,
        },
        quantum,
        no_signaling: NoSignalingSection { value: ns_value },
        timings_ms: timings.then(|| TimingsSection {
            classical: (t1 - t0).as_millis(),
            quantum: (t2 - t1).as_millis(),
            no_signaling: (t3 - t2).as_millis(),
        }),
    };

    match format {
        Format::Json => serde_json::to_string_pretty(&report)
            .map_err(|e| Failure::internal(format!("serialization: {e}"))),
        Format::Csv => Ok(report_csv(&report)),
    }
}

fn quantum_section(
    game: &Game,
    xor_spec: Option<&XorGameSpec>,
    label: &str,
    state: &PureState,
    config: &OptimizeConfig,
) -> Result<QuantumSection, Failure> {
    if state.n_parties() != game.n_parties() {
        return Err(Failure::input(format!(
            "state {label} has {} parties, game has {}",
            state.n_parties(),
            game.n_parties()
        )));
    }
    let (winning, operator_value, result) = match xor_spec {
        Some(spec) => {
            let r = optimize_operator(spec, state, config).map_err(Failure::from_core)?;
            let n = spec.n_setting_tuples() as f64;
            (0.5 * (1.0 + r.best_value / n), Some(r.best_value), r)
        }
        None => {
            let r = optimize_game(game, state, config).map_err(Failure::from_core)?;
            (r.best_value, None, r)
        }
    };
    // Double-check the reported optimum against the behavior it induces.
    let behavior = quantum_behavior(state, &result.best_setup).map_err(Failure::from_core)?;
    let direct = winning_probability(game, &behavior).map_err(Failure::from_core)?;
    if (direct - winning).abs() > 1e-9 {
        return Err(Failure::internal(format!(
            "optimizer value {winning} disagrees with its own behavior {direct}"
        )));
    }
    Ok(QuantumSection {
        state: label.to_string(),
        winning_probability: winning,
        operator_value,
        restarts_run: result.restarts_run,
        stationarity_residual: result.stationarity_residual,
        best_angles: result.best_setup.angles().iter().map(|&(t, p)| [t, p]).collect(),
    })
}

fn resolve_states(
    states: Option<&str>,
    n_parties: usize,
) -> Result<Vec<(String, PureState)>, Failure> {
    let default = if n_parties == 3 { "ghz,w" } else { "phi_plus" };
    let requested = states.unwrap_or(default);
    let mut out = Vec::new();
    for (i, raw) in requested.split(',').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let (label, state) = match raw {
            "ghz" => ("ghz".to_string(), ghz_state()),
            "w" => ("w".to_string(), w_state()),
            "phi_plus" => ("phi_plus".to_string(), chsh_optimal_state()),
            other if other.starts_with('[') => {
                let amplitudes: Vec<[f64; 2]> = serde_json::from_str(other)
                    .map_err(|e| Failure::input(format!("state {i} does not parse: {e}")))?;
                let amps: Vec<Complex> =
                    amplitudes.iter().map(|[re, im]| Complex::new(*re, *im)).collect();
                let ket = Ket::new(amps).map_err(|e| Failure::input(format!("state {i}: {e}")))?;
                let parties = ket.dim().trailing_zeros() as usize;
                if 1 << parties != ket.dim() {
                    return Err(Failure::input(format!(
                        "state {i} has dim {}, expected a power of two",
                        ket.dim()
                    )));
                }
                let state =
                    PureState::new(parties, ket).map_err(|e| Failure::input(e.to_string()))?;
                (format!("custom{i}"), state)
            }
            other => {
                return Err(Failure::input(format!(
                    "unknown state {other:?} (use ghz, w, phi_plus, or inline JSON)"
                )))
            }
        };
        out.push((label, state));
    }
    if out.is_empty() {
        return Err(Failure::input("no states requested"));
    }
    Ok(out)
}

fn report_csv(report: &AnalysisReport) -> String {
    let mut s = String::from("section,state,value,operator_value\n");
    s.push_str(&format!(
        "classical,-,{:.10},{}\n",
        report.classical.value,
        report.classical.operator_value.map_or("-".into(), |v| format!("{v:.10}"))
    ));
    for q in &report.quantum {
        s.push_str(&format!(
            "quantum,{},{:.10},{}\n",
            q.state,
            q.winning_probability,
            q.operator_value.map_or("-".into(), |v| format!("{v:.10}"))
        ));
    }
    s.push_str(&format!("no_signaling,-,{:.10},-", report.no_signaling.value));
    s
}

#[derive(Deserialize)]
struct MeasurementInput {
    p: f64,
    theta: f64,
    phi: f64,
    outcome: u8,
}

#[derive(Serialize)]
struct ZetaReport {
    schema_version: u32,
    value: f64,
    /// Amplitudes of the maximizing state as [re, im] pairs.
    argmax_state: Vec<[f64; 2]>,
    /// Bloch vector of the maximizing state.
    bloch: [f64; 3],
}

pub fn run_zeta(measurements: &str) -> Result<String, Failure> {
    let input: Vec<MeasurementInput> = serde_json::from_str(measurements)
        .map_err(|e| Failure::input(format!("--measurements does not parse: {e}")))?;
    let scenario = FurScenario::new(
        input
            .iter()
            .map(|m| FurMeasurement { weight: m.p, theta: m.theta, phi: m.phi, target: m.outcome })
            .collect(),
    )
    .map_err(|e| Failure::input(e.to_string()))?;
    let result = zeta(&scenario);
    let a0 = result.argmax_state.amplitude(0);
    let a1 = result.argmax_state.amplitude(1);
    let cross = a0.conj() * a1;
    let report = ZetaReport {
        schema_version: 1,
        value: result.value,
        argmax_state: vec![[a0.re, a0.im], [a1.re, a1.im]],
        bloch: [2.0 * cross.re, 2.0 * cross.im, a0.norm_sqr() - a1.norm_sqr()],
    };
    serde_json::to_string_pretty(&report)
        .map_err(|e| Failure::internal(format!("serialization: {e}")))
}
