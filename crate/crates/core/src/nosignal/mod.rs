//! The no-signaling polytope: constraint construction, membership testing,
//! and exact-at-tolerance maximization of winning probabilities by linear
//! programming.
//!
//! No-signaling means the marginal distribution of every proper subset of
//! parties is independent of the other parties' settings. Normalization plus
//! the marginal constraints for all subsets of size `n_parties - 1` generate
//! the whole family (smaller subsets follow by further marginalization), so
//! that is the constraint set built here.

mod simplex;

pub use simplex::{maximize, LinearProgram, SimplexSolution};

use crate::games::{winning_probability, Behavior, Game};
use crate::tol;
use crate::{Error, Result};

/// Equality constraints over flattened behavior entries
/// `x[setting_idx * n_outcome_tuples + outcome_idx]`.
#[derive(Debug, Clone)]
pub struct NsConstraints {
    pub n_vars: usize,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    /// The first `n_normalization` rows pin each conditional to sum one.
    pub n_normalization: usize,
}

/// Build the normalization and no-signaling equalities for the scenario.
pub fn ns_constraints(
    n_parties: usize,
    n_settings: usize,
    n_outcomes: usize,
) -> Result<NsConstraints> {
    let n_setting_tuples = n_settings.pow(n_parties as u32);
    let n_outcome_tuples = n_outcomes.pow(n_parties as u32);
    let n_vars = n_setting_tuples * n_outcome_tuples;
    if n_vars > 10_000 {
        return Err(Error::SizeBudget(n_vars));
    }
    let var = |s_idx: usize, o_idx: usize| s_idx * n_outcome_tuples + o_idx;

    let mut rows = Vec::new();
    let mut rhs = Vec::new();

    for s_idx in 0..n_setting_tuples {
        let mut row = vec![0.0; n_vars];
        for o_idx in 0..n_outcome_tuples {
            row[var(s_idx, o_idx)] = 1.0;
        }
        rows.push(row);
        rhs.push(1.0);
    }
    let n_normalization = rows.len();

    // For each excluded party q: the marginal on the other parties must not
    // depend on q's setting. One row per (marginal outcome, marginal
    // setting, unordered pair of q's settings).
    for q in 0..n_parties {
        let n_sub_outcomes = n_outcome_tuples / n_outcomes;
        let n_sub_settings = n_setting_tuples / n_settings;
        for sub_o in 0..n_sub_outcomes {
            for sub_s in 0..n_sub_settings {
                for v0 in 0..n_settings {
                    for v1 in (v0 + 1)..n_settings {
                        let mut row = vec![0.0; n_vars];
                        let s0 = insert_digit(sub_s, v0, q, n_settings);
                        let s1 = insert_digit(sub_s, v1, q, n_settings);
                        for oq in 0..n_outcomes {
                            let o = insert_digit(sub_o, oq, q, n_outcomes);
                            row[var(s0, o)] += 1.0;
                            row[var(s1, o)] -= 1.0;
                        }
                        rows.push(row);
                        rhs.push(0.0);
                    }
                }
            }
        }
    }

    Ok(NsConstraints { n_vars, rows, rhs, n_normalization })
}

/// Insert `digit` at mixed-radix position `pos` of `packed` (base `radix`).
fn insert_digit(packed: usize, digit: usize, pos: usize, radix: usize) -> usize {
    let low_stride = radix.pow(pos as u32);
    let low = packed % low_stride;
    let high = packed / low_stride;
    low + digit * low_stride + high * (low_stride * radix)
}

/// True iff every constraint residual is within `tol` and all entries are
/// at least `-tol`.
pub fn is_no_signaling(behavior: &Behavior, tol: f64) -> bool {
    let constraints =
        match ns_constraints(behavior.n_parties(), behavior.n_settings(), behavior.n_outcomes()) {
            Ok(c) => c,
            Err(_) => return false,
        };
    let x = flatten(behavior);
    if x.iter().any(|&v| v < -tol) {
        return false;
    }
    constraints.rows.iter().zip(&constraints.rhs).all(|(row, &b)| {
        let lhs: f64 = row.iter().zip(&x).map(|(a, xi)| a * xi).sum();
        (lhs - b).abs() <= tol
    })
}

fn flatten(behavior: &Behavior) -> Vec<f64> {
    behavior.rows().iter().flatten().copied().collect()
}

/// Exact maximum of the winning probability over the no-signaling polytope,
/// with an optimal behavior. The polytope is never empty (the uniform
/// behavior is always feasible), so infeasibility signals a bug in the
/// constraint construction.
pub fn ns_max(game: &Game) -> Result<(f64, Behavior)> {
    let constraints = ns_constraints(game.n_parties(), game.n_settings(), game.n_outcomes())?;
    let n_outcome_tuples = game.n_outcome_tuples();
    let mut objective = vec![0.0; constraints.n_vars];
    for s_idx in 0..game.n_setting_tuples() {
        let p_s = game.setting_probability(s_idx);
        for o_idx in 0..n_outcome_tuples {
            if game.wins(o_idx, s_idx) {
                objective[s_idx * n_outcome_tuples + o_idx] = p_s;
            }
        }
    }

    let lp = LinearProgram {
        objective,
        constraints: constraints.rows.clone(),
        rhs: constraints.rhs.clone(),
    };
    let sol = maximize(&lp)?;

    // Solver self-checks: primal feasibility and complementary slackness.
    let primal_residual = constraints
        .rows
        .iter()
        .zip(&constraints.rhs)
        .map(|(row, &b)| {
            let lhs: f64 = row.iter().zip(&sol.x).map(|(a, xi)| a * xi).sum();
            (lhs - b).abs()
        })
        .fold(0.0, f64::max);
    assert!(
        primal_residual <= tol::LP_RESIDUAL,
        "simplex returned an infeasible point (residual {primal_residual:.3e})"
    );
    assert!(
        sol.complementary_slackness_residual() <= tol::LP_SLACKNESS,
        "complementary slackness violated"
    );

    // Snap solver dust to exact zero, then rebuild and revalidate.
    let table: Vec<Vec<f64>> = (0..game.n_setting_tuples())
        .map(|s_idx| {
            (0..n_outcome_tuples)
                .map(|o_idx| {
                    let v = sol.x[s_idx * n_outcome_tuples + o_idx];
                    if v.abs() < tol::LP_SNAP {
                        0.0
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let argmax = Behavior::new(game.n_parties(), game.n_settings(), game.n_outcomes(), table)?;
    if !is_no_signaling(&argmax, tol::LP_RESIDUAL) {
        return Err(Error::InvalidValue("LP argmax failed the no-signaling revalidation".into()));
    }
    debug_assert!((winning_probability(game, &argmax)? - sol.value).abs() <= tol::LP_RESIDUAL);
    Ok((sol.value, argmax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{box_behavior, xor_to_game, BuiltinGame};

    #[test]
    fn constraint_counts_match_scenario_structure() {
        // Bipartite binary: 16 vars, 4 normalization rows, 8 marginal rows.
        let c = ns_constraints(2, 2, 2).unwrap();
        assert_eq!(c.n_vars, 16);
        assert_eq!(c.n_normalization, 4);
        assert_eq!(c.rows.len(), 4 + 8);
        // Tripartite binary: 64 vars, 8 normalization, 3*4*4 marginal rows.
        let c = ns_constraints(3, 2, 2).unwrap();
        assert_eq!(c.n_vars, 64);
        assert_eq!(c.n_normalization, 8);
        assert_eq!(c.rows.len(), 8 + 48);
    }

    #[test]
    fn budget_enforced() {
        assert!(matches!(ns_constraints(5, 4, 4), Err(Error::SizeBudget(_))));
    }

    #[test]
    fn uniform_behavior_is_no_signaling() {
        let uniform = Behavior::new(2, 2, 2, vec![vec![0.25; 4]; 4]).unwrap();
        assert!(is_no_signaling(&uniform, 1e-12));
    }

    #[test]
    fn boxes_satisfy_all_constraints_exactly() {
        for game in BuiltinGame::ALL {
            let bx = box_behavior(&game.spec());
            assert!(is_no_signaling(&bx, 1e-15), "{} box signals", game.name());
        }
    }

    #[test]
    fn signaling_table_detected() {
        // Alice's outcome copies Bob's setting: p(a|s,t) = δ_{a,t}.
        let table = (0..4)
            .map(|s_idx| {
                let t = s_idx / 2;
                let mut row = vec![0.0; 4];
                // outcome index a + 2b; put all weight on a = t, b = 0.
                row[t] = 1.0;
                row
            })
            .collect();
        let b = Behavior::new(2, 2, 2, table).unwrap();
        assert!(!is_no_signaling(&b, 1e-9));
    }

    #[test]
    fn ns_max_reaches_one_for_builtin_games() {
        for game in BuiltinGame::ALL {
            let g = xor_to_game(&game.spec());
            let (value, argmax) = ns_max(&g).unwrap();
            assert!((value - 1.0).abs() <= tol::LP_RESIDUAL, "{}: ns value {value}", game.name());
            assert!(is_no_signaling(&argmax, tol::LP_RESIDUAL));
            let p = winning_probability(&g, &argmax).unwrap();
            assert!((p - 1.0).abs() <= tol::LP_RESIDUAL);
        }
    }

    #[test]
    fn ns_max_dominates_mixtures_of_ns_behaviors() {
        use crate::classical::classical_max;
        use crate::optim::SplitMix64;
        let spec = BuiltinGame::Svetlichny.spec();
        let game = xor_to_game(&spec);
        let (ns_value, _) = ns_max(&game).unwrap();
        let bx = box_behavior(&spec);
        let (_, strategy) = classical_max(&game).unwrap();
        let det = strategy.behavior(2, 2);
        let mut rng = SplitMix64::new(31);
        for _ in 0..200 {
            let w = rng.next_f64();
            let table: Vec<Vec<f64>> = (0..8)
                .map(|s| (0..8).map(|o| w * bx.prob(o, s) + (1.0 - w) * det.prob(o, s)).collect())
                .collect();
            let mix = Behavior::new(3, 2, 2, table).unwrap();
            assert!(is_no_signaling(&mix, 1e-9));
            let p = winning_probability(&game, &mix).unwrap();
            assert!(p <= ns_value + tol::LP_RESIDUAL);
        }
    }
}
