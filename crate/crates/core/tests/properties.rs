//! Property and invariant tests that cut across modules.

use nlgames_core::classical::classical_max;
use nlgames_core::games::{
    box_behavior, correlation_coefficients, winning_probability, xor_to_game, Behavior,
    BuiltinGame, Game, XorGameSpec,
};
use nlgames_core::nosignal::{is_no_signaling, ns_max};
use nlgames_core::optim::SplitMix64;
use nlgames_core::qcore::{
    bloch_observable, expectation, hermitian_eigen, outcome_projector, tensor, Complex,
    ComplexMatrix, Ket,
};
use nlgames_core::quantum::{quantum_behavior, MeasurementSetup, PureState};
use proptest::prelude::*;
use std::f64::consts::PI;

fn random_complex(rng: &mut SplitMix64) -> Complex {
    Complex::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0))
}

fn random_matrix(rng: &mut SplitMix64, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            m.set(i, j, random_complex(rng));
        }
    }
    m
}

fn random_hermitian(rng: &mut SplitMix64, dim: usize) -> ComplexMatrix {
    let m = random_matrix(rng, dim);
    m.add(&m.adjoint()).unwrap().scale(0.5)
}

fn random_ket(rng: &mut SplitMix64, dim: usize) -> Ket {
    loop {
        let amps: Vec<Complex> = (0..dim).map(|_| random_complex(rng)).collect();
        if let Ok(k) = Ket::new(amps) {
            return k;
        }
    }
}

#[test]
fn tensor_is_associative_and_bilinear() {
    let mut rng = SplitMix64::new(0x7E4501);
    for _ in 0..200 {
        let a = random_matrix(&mut rng, 2);
        let b = random_matrix(&mut rng, 2);
        let c = random_matrix(&mut rng, 2);
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        assert!(left.max_abs_diff(&right) <= 1e-12);

        // (a + a') ⊗ b = a ⊗ b + a' ⊗ b, and scaling factors through.
        let a2 = random_matrix(&mut rng, 2);
        let lhs = tensor(&a.add(&a2).unwrap(), &b);
        let rhs = tensor(&a, &b).add(&tensor(&a2, &b)).unwrap();
        assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        let k = rng.range(-3.0, 3.0);
        assert!(tensor(&a.scale(k), &b).max_abs_diff(&tensor(&a, &b).scale(k)) <= 1e-12);
    }
}

#[test]
fn eigen_reconstructs_1000_random_hermitians() {
    let mut rng = SplitMix64::new(0xE16E11);
    for case in 0..1000 {
        let dim = [2, 4, 8][case % 3];
        let h = random_hermitian(&mut rng, dim);
        let e = hermitian_eigen(&h).unwrap();
        // Ascending eigenvalues.
        assert!(e.values.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        // H v = λ v.
        for (lambda, v) in e.values.iter().zip(&e.vectors) {
            let hv = h.matvec(v.amplitudes());
            for (hv_i, v_i) in hv.iter().zip(v.amplitudes()) {
                assert!(
                    (*hv_i - v_i.scale(*lambda)).abs() <= 1e-10,
                    "eigenpair residual at dim {dim}"
                );
            }
        }
        // Σ λ v v† = H.
        let mut rec = ComplexMatrix::zeros(dim, dim);
        for (lambda, v) in e.values.iter().zip(&e.vectors) {
            for i in 0..dim {
                for j in 0..dim {
                    let cur = rec.get(i, j);
                    rec.set(i, j, cur + (v.amplitude(i) * v.amplitude(j).conj()).scale(*lambda));
                }
            }
        }
        assert!(rec.max_abs_diff(&h) <= 1e-10, "reconstruction at dim {dim}");
        // Orthonormal vectors.
        for i in 0..dim {
            for j in 0..dim {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e.vectors[i].inner(&e.vectors[j]).abs() - want).abs() <= 1e-10);
            }
        }
    }
}

proptest! {
    #[test]
    fn projectors_sum_to_identity(theta in -10.0f64..10.0, phi in -10.0f64..10.0) {
        let obs = bloch_observable(theta, phi);
        let sum = outcome_projector(&obs, 0)
            .unwrap()
            .add(&outcome_projector(&obs, 1).unwrap())
            .unwrap();
        prop_assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) <= 1e-15);
    }

    #[test]
    fn bloch_observables_have_unit_spectrum(theta in -10.0f64..10.0, phi in -10.0f64..10.0) {
        let e = hermitian_eigen(&bloch_observable(theta, phi)).unwrap();
        prop_assert!((e.values[0] + 1.0).abs() <= 1e-12);
        prop_assert!((e.values[1] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn expectation_within_spectrum(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let dim = [2usize, 4, 8][(seed % 3) as usize];
        let h = random_hermitian(&mut rng, dim);
        let psi = random_ket(&mut rng, dim);
        let e = hermitian_eigen(&h).unwrap();
        let val = expectation(&h, &psi).unwrap();
        prop_assert!(val >= e.values[0] - 1e-10 && val <= e.max_value() + 1e-10);
    }
}

fn random_behavior(rng: &mut SplitMix64, n_parties: usize) -> Behavior {
    let n_s = 1usize << n_parties;
    let n_o = 1usize << n_parties;
    let table = (0..n_s)
        .map(|_| {
            let raw: Vec<f64> = (0..n_o).map(|_| rng.range(0.0, 1.0) + 1e-6).collect();
            let sum: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / sum).collect()
        })
        .collect();
    Behavior::new(n_parties, 2, 2, table).unwrap()
}

#[test]
fn xor_identity_holds_for_1000_random_behaviors() {
    // Direct summation vs the correlation-coefficient formula, on arbitrary
    // (generally signaling) behaviors: the identity is purely algebraic.
    let mut rng = SplitMix64::new(0x1DE47);
    for builtin in BuiltinGame::ALL {
        let spec = builtin.spec();
        let game = xor_to_game(&spec);
        let coeffs = correlation_coefficients(&spec);
        let n = spec.n_setting_tuples() as f64;
        for _ in 0..250 {
            let b = random_behavior(&mut rng, spec.n_parties());
            let direct = winning_probability(&game, &b).unwrap();
            let correlator_sum: f64 =
                coeffs.iter().enumerate().map(|(s_idx, c)| c * b.full_correlator(s_idx)).sum();
            let via_operator = 0.5 * (1.0 + correlator_sum / n);
            assert!((direct - via_operator).abs() <= 1e-12);
            assert!((0.0..=1.0 + 1e-12).contains(&direct));
        }
    }
}

#[test]
fn quantum_behaviors_never_signal() {
    let mut rng = SplitMix64::new(0x0B5E55);
    for case in 0..200 {
        let n_parties = if case % 2 == 0 { 2 } else { 3 };
        let dim = 1usize << n_parties;
        let state = PureState::new(n_parties, random_ket(&mut rng, dim)).unwrap();
        let angles: Vec<(f64, f64)> =
            (0..2 * n_parties).map(|_| (rng.range(0.0, PI), rng.range(0.0, 2.0 * PI))).collect();
        let setup = MeasurementSetup::new(n_parties, 2, angles).unwrap();
        let b = quantum_behavior(&state, &setup).unwrap();
        assert!(is_no_signaling(&b, 1e-10));
    }
}

#[test]
fn ns_max_dominates_1000_random_ns_mixtures() {
    let mut rng = SplitMix64::new(0x4D173);
    for builtin in [BuiltinGame::Chsh, BuiltinGame::Svetlichny] {
        let spec = builtin.spec();
        let game = xor_to_game(&spec);
        let (ns_value, argmax) = ns_max(&game).unwrap();
        assert!(is_no_signaling(&argmax, 1e-9));
        let bx = box_behavior(&spec);
        let n_strategies = 4usize.pow(spec.n_parties() as u32);
        for _ in 0..500 {
            // Convex mixture of the box and two random deterministic points.
            let d1 = random_deterministic(&mut rng, &game, n_strategies);
            let d2 = random_deterministic(&mut rng, &game, n_strategies);
            let (w1, w2) = (rng.next_f64(), rng.next_f64());
            let (w1, w2) = (w1 / 3.0, w2 / 3.0);
            let w0 = 1.0 - w1 - w2;
            let table: Vec<Vec<f64>> = (0..game.n_setting_tuples())
                .map(|s| {
                    (0..game.n_outcome_tuples())
                        .map(|o| w0 * bx.prob(o, s) + w1 * d1.prob(o, s) + w2 * d2.prob(o, s))
                        .collect()
                })
                .collect();
            let mix = Behavior::new(game.n_parties(), game.n_settings(), game.n_outcomes(), table)
                .unwrap();
            assert!(is_no_signaling(&mix, 1e-9));
            let p = winning_probability(&game, &mix).unwrap();
            assert!(p <= ns_value + 1e-9);
        }
    }
}

fn random_deterministic(rng: &mut SplitMix64, game: &Game, n_strategies: usize) -> Behavior {
    // Decode a random strategy index the same way classical_max enumerates.
    let mut remaining = (rng.next_u64() as usize) % n_strategies;
    let tables: Vec<Vec<u8>> = (0..game.n_parties())
        .map(|_| {
            (0..game.n_settings())
                .map(|_| {
                    let o = (remaining % game.n_outcomes()) as u8;
                    remaining /= game.n_outcomes();
                    o
                })
                .collect()
        })
        .collect();
    let n_o = game.n_outcome_tuples();
    let table: Vec<Vec<f64>> = (0..game.n_setting_tuples())
        .map(|s_idx| {
            let mut row = vec![0.0; n_o];
            let mut s_rest = s_idx;
            let mut o_idx = 0;
            let mut stride = 1;
            for t in &tables {
                let s = s_rest % game.n_settings();
                s_rest /= game.n_settings();
                o_idx += t[s] as usize * stride;
                stride *= game.n_outcomes();
            }
            row[o_idx] = 1.0;
            row
        })
        .collect();
    Behavior::new(game.n_parties(), game.n_settings(), game.n_outcomes(), table).unwrap()
}

#[test]
fn classical_value_invariant_under_random_outcome_relabelings() {
    let mut rng = SplitMix64::new(0x5EEDD);
    for builtin in BuiltinGame::ALL {
        let game = xor_to_game(&builtin.spec());
        let (value, _) = classical_max(&game).unwrap();
        for _ in 0..5 {
            let party = (rng.next_u64() as usize) % game.n_parties();
            let n_o = game.n_outcome_tuples();
            let mut predicate = vec![0u8; game.n_setting_tuples() * n_o];
            for s_idx in 0..game.n_setting_tuples() {
                for o_idx in 0..n_o {
                    let flipped = o_idx ^ (1 << party);
                    predicate[s_idx * n_o + o_idx] = u8::from(game.wins(flipped, s_idx));
                }
            }
            let relabeled = Game::new(
                game.n_parties(),
                game.n_settings(),
                2,
                predicate,
                game.setting_distribution().to_vec(),
            )
            .unwrap();
            assert_eq!(value, classical_max(&relabeled).unwrap().0);
        }
    }
}

#[test]
fn winning_probability_stays_in_unit_interval() {
    let mut rng = SplitMix64::new(0x911A);
    for _ in 0..100 {
        let n_parties = if rng.next_u64().is_multiple_of(2) { 2 } else { 3 };
        let n = 1usize << n_parties;
        let f: Vec<u8> = (0..n).map(|_| (rng.next_u64() & 1) as u8).collect();
        let spec = XorGameSpec::uniform(n_parties, 2, f).unwrap();
        let game = xor_to_game(&spec);
        let b = random_behavior(&mut rng, n_parties);
        let p = winning_probability(&game, &b).unwrap();
        assert!((0.0..=1.0 + 1e-12).contains(&p));
    }
}
