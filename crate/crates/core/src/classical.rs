//! Exact classical maxima by exhaustive enumeration.
//!
//! The vertices of the local polytope are the deterministic strategies, and
//! the winning probability is linear in the behavior, so shared randomness
//! cannot beat the best deterministic strategy: enumerating them yields the
//! exact classical value. No LP is needed on this side.

use crate::games::{Behavior, Game};
use crate::Result;
use crate::{games, Error};

/// One deterministic local strategy: for each party, a map setting -> outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStrategy {
    /// tables[party][setting] = outcome.
    tables: Vec<Vec<u8>>,
}

impl DeterministicStrategy {
    pub fn outcome(&self, party: usize, setting: usize) -> u8 {
        self.tables[party][setting]
    }

    pub fn tables(&self) -> &[Vec<u8>] {
        &self.tables
    }

    /// Decode strategy `index` in the mixed-radix enumeration order used by
    /// [`classical_max`] (party 0's settings are the fastest digits).
    fn decode(index: u128, n_parties: usize, n_settings: usize, n_outcomes: usize) -> Self {
        let mut rest = index;
        let tables = (0..n_parties)
            .map(|_| {
                (0..n_settings)
                    .map(|_| {
                        let o = (rest % n_outcomes as u128) as u8;
                        rest /= n_outcomes as u128;
                        o
                    })
                    .collect()
            })
            .collect();
        Self { tables }
    }

    /// The deterministic behavior this strategy induces.
    pub fn behavior(&self, n_settings: usize, n_outcomes: usize) -> Behavior {
        let n_parties = self.tables.len();
        let n_setting_tuples = n_settings.pow(n_parties as u32);
        let n_outcome_tuples = n_outcomes.pow(n_parties as u32);
        let table = (0..n_setting_tuples)
            .map(|s_idx| {
                let o_idx = self.outcome_index(s_idx, n_settings, n_outcomes);
                let mut row = vec![0.0; n_outcome_tuples];
                row[o_idx] = 1.0;
                row
            })
            .collect();
        Behavior::new(n_parties, n_settings, n_outcomes, table)
            .expect("deterministic table is a valid behavior")
    }

    fn outcome_index(&self, setting_idx: usize, n_settings: usize, n_outcomes: usize) -> usize {
        let mut s_rest = setting_idx;
        let mut o_idx = 0;
        let mut stride = 1;
        for table in &self.tables {
            let s = s_rest % n_settings;
            s_rest /= n_settings;
            o_idx += table[s] as usize * stride;
            stride *= n_outcomes;
        }
        o_idx
    }
}

/// Exact classical value of a game with the first optimal strategy in
/// enumeration order (ties broken by lowest index, for reproducibility).
pub fn classical_max(game: &Game) -> Result<(f64, DeterministicStrategy)> {
    let per_party = (game.n_outcomes() as u128).pow(game.n_settings() as u32);
    let total = per_party.pow(game.n_parties() as u32);
    if total > 1_000_000 {
        return Err(Error::EnumerationBudget(total));
    }

    let mut best = f64::NEG_INFINITY;
    let mut best_strategy = None;
    for index in 0..total {
        let strategy = DeterministicStrategy::decode(
            index,
            game.n_parties(),
            game.n_settings(),
            game.n_outcomes(),
        );
        let mut value = 0.0;
        for s_idx in 0..game.n_setting_tuples() {
            let o_idx = strategy.outcome_index(s_idx, game.n_settings(), game.n_outcomes());
            if game.wins(o_idx, s_idx) {
                value += game.setting_probability(s_idx);
            }
        }
        if value > best {
            best = value;
            best_strategy = Some(strategy);
        }
    }
    Ok((best, best_strategy.expect("at least one strategy exists")))
}

/// Exact maximum of Σ_s c(s) · Π_p a_p(s_p) over ±1 assignments to each
/// party's per-setting variables. This is the algebraic maximum of the
/// correlation operator when every observable is replaced by a number.
pub fn classical_operator_max(n_parties: usize, n_settings: usize, coeffs: &[f64]) -> f64 {
    operator_enumeration(n_parties, n_settings, coeffs).0
}

/// The ±1 signs per party per setting of the first optimal assignment.
pub(crate) fn operator_argmax_signs(
    n_parties: usize,
    n_settings: usize,
    coeffs: &[f64],
) -> Vec<Vec<i8>> {
    let mask = operator_enumeration(n_parties, n_settings, coeffs).1;
    (0..n_parties)
        .map(|p| {
            (0..n_settings)
                .map(|s| if (mask >> (p * n_settings + s)) & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}

fn operator_enumeration(n_parties: usize, n_settings: usize, coeffs: &[f64]) -> (f64, u32) {
    let n_setting_tuples = n_settings.pow(n_parties as u32);
    assert_eq!(coeffs.len(), n_setting_tuples, "coefficient table shape");
    let n_vars = n_parties * n_settings;
    assert!(n_vars <= 24, "too many ±1 variables to enumerate");

    let mut best = f64::NEG_INFINITY;
    let mut best_mask = 0u32;
    for mask in 0u32..(1 << n_vars) {
        // sign of party p at setting s: bit p*n_settings + s.
        let mut value = 0.0;
        for (s_idx, &c) in coeffs.iter().enumerate() {
            let mut s_rest = s_idx;
            let mut product = 1.0;
            for p in 0..n_parties {
                let s = s_rest % n_settings;
                s_rest /= n_settings;
                if (mask >> (p * n_settings + s)) & 1 == 1 {
                    product = -product;
                }
            }
            value += c * product;
        }
        if value > best {
            best = value;
            best_mask = mask;
        }
    }
    (best, best_mask)
}

/// Convenience: classical value of an XOR game through the operator route,
/// `(1 + classical_operator_max / N) / 2` (uniform settings only).
pub fn xor_classical_via_operator(spec: &games::XorGameSpec) -> f64 {
    let coeffs = games::correlation_coefficients(spec);
    let max = classical_operator_max(spec.n_parties(), spec.n_settings(), &coeffs);
    0.5 * (1.0 + max / spec.n_setting_tuples() as f64)
}
