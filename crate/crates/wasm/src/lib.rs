//! Browser bindings for the nonlocal-games library: three interactive
//! operations behind `wasm-bindgen`, each returning a JSON string for the
//! static page in `www/` to plot.
//!
//! The JSON-producing logic lives in plain Rust functions (`*_json`) so the
//! host-target test suite can exercise it; the `#[wasm_bindgen]` wrappers
//! only translate errors into `JsValue`.

use nlgames_core::classical::classical_max;
use nlgames_core::fur::{zeta, FurMeasurement, FurScenario};
use nlgames_core::games::{xor_to_game, BuiltinGame};
use nlgames_core::nosignal::ns_max;
use nlgames_core::quantum::{
    chsh_optimal_state, ghz_state, optimize_operator, quantum_behavior, w_state, MeasurementSetup,
    OptimizeConfig, PureState,
};
use serde::Serialize;
use std::f64::consts::PI;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct TheoryValues {
    game: String,
    classical: f64,
    quantum: Vec<StateValue>,
    no_signaling: f64,
}

#[derive(Serialize)]
struct StateValue {
    state: String,
    winning_probability: f64,
    operator_value: f64,
}

/// Classical, quantum (per shared state) and no-signaling winning
/// probabilities of a builtin game.
pub fn analyze_builtin_json(name: &str, restarts: usize, seed: u64) -> Result<String, String> {
    let builtin = BuiltinGame::from_name(name).ok_or_else(|| {
        format!("unknown game {name:?}; use chsh, svetlichny, mermin_a, mermin_b")
    })?;
    let spec = builtin.spec();
    let game = xor_to_game(&spec);
    let config = OptimizeConfig { restarts: restarts.max(1), seed, ..OptimizeConfig::default() };

    let (classical, _) = classical_max(&game).map_err(|e| e.to_string())?;
    let states: Vec<(&str, PureState)> = if spec.n_parties() == 2 {
        vec![("phi_plus", chsh_optimal_state())]
    } else {
        vec![("ghz", ghz_state()), ("w", w_state())]
    };
    let n = spec.n_setting_tuples() as f64;
    let mut quantum = Vec::new();
    for (label, state) in states {
        let r = optimize_operator(&spec, &state, &config).map_err(|e| e.to_string())?;
        quantum.push(StateValue {
            state: label.to_string(),
            winning_probability: 0.5 * (1.0 + r.best_value / n),
            operator_value: r.best_value,
        });
    }
    let (ns, _) = ns_max(&game).map_err(|e| e.to_string())?;

    let report =
        TheoryValues { game: builtin.name().to_string(), classical, quantum, no_signaling: ns };
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ZetaCurve {
    thetas: Vec<f64>,
    values: Vec<f64>,
    /// Bloch vector (x, y, z) of the maximizing state at each sample.
    argmax_bloch: Vec<[f64; 3]>,
}

/// ζ for the scenario { (weight, σ_z, target 0), (1-weight, direction
/// (θ, φ₂), target 0) } swept over θ in [0, 2π).
pub fn zeta_curve_json(weight: f64, phi2: f64, n_points: usize) -> Result<String, String> {
    if !(0.0..=1.0).contains(&weight) {
        return Err("weight must lie in [0, 1]".into());
    }
    let n = n_points.clamp(2, 2048);
    let mut curve = ZetaCurve {
        thetas: Vec::with_capacity(n),
        values: Vec::with_capacity(n),
        argmax_bloch: Vec::with_capacity(n),
    };
    for i in 0..n {
        let theta = 2.0 * PI * i as f64 / (n - 1) as f64;
        let scenario = FurScenario::new(vec![
            FurMeasurement { weight, theta: 0.0, phi: 0.0, target: 0 },
            FurMeasurement { weight: 1.0 - weight, theta, phi: phi2, target: 0 },
        ])
        .map_err(|e| e.to_string())?;
        let z = zeta(&scenario);
        let a0 = z.argmax_state.amplitude(0);
        let a1 = z.argmax_state.amplitude(1);
        let cross = a0.conj() * a1;
        curve.thetas.push(theta);
        curve.values.push(z.value);
        curve.argmax_bloch.push([2.0 * cross.re, 2.0 * cross.im, a0.norm_sqr() - a1.norm_sqr()]);
    }
    serde_json::to_string(&curve).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ChshSweep {
    deltas: Vec<f64>,
    probabilities: Vec<f64>,
    classical_bound: f64,
    quantum_bound: f64,
    no_signaling_bound: f64,
}

/// CHSH winning probability on (|00> + |11>)/√2 for the one-parameter
/// measurement family A₀ = σ_z, A₁ = σ_x, B₀/B₁ tilted ±δ from σ_z in the
/// x-z plane, swept over δ in [0, π/2]. Peaks at δ = π/4.
pub fn chsh_sweep_json(n_points: usize) -> Result<String, String> {
    let n = n_points.clamp(2, 2048);
    let spec = BuiltinGame::Chsh.spec();
    let game = xor_to_game(&spec);
    let state = chsh_optimal_state();
    let mut sweep = ChshSweep {
        deltas: Vec::with_capacity(n),
        probabilities: Vec::with_capacity(n),
        classical_bound: 0.75,
        quantum_bound: 0.5 + 0.5 / 2f64.sqrt(),
        no_signaling_bound: 1.0,
    };
    for i in 0..n {
        let delta = (PI / 2.0) * i as f64 / (n - 1) as f64;
        let setup = MeasurementSetup::new(
            2,
            2,
            vec![(0.0, 0.0), (PI / 2.0, 0.0), (delta, 0.0), (delta, PI)],
        )
        .map_err(|e| e.to_string())?;
        let behavior = quantum_behavior(&state, &setup).map_err(|e| e.to_string())?;
        let p = nlgames_core::games::winning_probability(&game, &behavior)
            .map_err(|e| e.to_string())?;
        sweep.deltas.push(delta);
        sweep.probabilities.push(p);
    }
    serde_json::to_string(&sweep).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn analyze_builtin(name: &str, restarts: usize, seed: u64) -> Result<String, JsValue> {
    analyze_builtin_json(name, restarts, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn zeta_curve(weight: f64, phi2: f64, n_points: usize) -> Result<String, JsValue> {
    zeta_curve_json(weight, phi2, n_points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn chsh_sweep(n_points: usize) -> Result<String, JsValue> {
    chsh_sweep_json(n_points).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_builtin_reports_the_three_values() {
        let text = analyze_builtin_json("svetlichny", 20, 42).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["classical"], 0.75);
        let ghz_p = v["quantum"][0]["winning_probability"].as_f64().unwrap();
        assert!((ghz_p - 0.8535534).abs() < 1e-4);
        assert!((v["no_signaling"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        assert!(analyze_builtin_json("nope", 10, 1).is_err());
    }

    #[test]
    fn zeta_curve_has_expected_extremes() {
        // Equal weights, φ₂ = 0: max over θ of ζ is 1 at θ = 0 (identical
        // measurements) and the z/x point sits at 1/2 + 1/(2√2).
        let text = zeta_curve_json(0.5, 0.0, 201).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let values: Vec<f64> =
            v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert!((values[0] - 1.0).abs() < 1e-12);
        // θ grid point 50 of 0..=200 spans 2π, so index 50 is θ = π/2.
        assert!((values[50] - (0.5 + 0.5 / 2f64.sqrt())).abs() < 1e-9);
        // ζ never drops below 1/2 for equal weights.
        assert!(values.iter().all(|&z| (0.5 - 1e-12..=1.0 + 1e-12).contains(&z)));
        assert!(zeta_curve_json(1.5, 0.0, 10).is_err());
    }

    #[test]
    fn chsh_sweep_peaks_at_tsirelson() {
        let text = chsh_sweep_json(181).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let probs: Vec<f64> =
            v["probabilities"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        // δ = 0 is a classical point; δ = π/4 (index 90 of 0..=180) is the
        // quantum maximum.
        assert!((probs[0] - 0.75).abs() < 1e-12);
        let max = probs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((max - (0.5 + 0.5 / 2f64.sqrt())).abs() < 1e-6);
        assert!((probs[90] - max).abs() < 1e-9);
    }
}
