//! Game model: winning predicates, setting distributions, behaviors, and
//! winning-probability evaluation.
//!
//! Outcome tuples and setting tuples are encoded little-endian in party
//! order (`a + 2b + 4c`, `s + 2t + 4u`); see the crate docs. Conditional
//! tables are stored one row per setting tuple.

use crate::tol;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A multiparty game: predicate over (outcomes, settings) plus the
/// distribution the referee draws settings from.
#[derive(Debug, Clone)]
pub struct Game {
    n_parties: usize,
    n_settings: usize,
    n_outcomes: usize,
    /// predicate[setting_idx * n_outcome_tuples + outcome_idx] ∈ {0, 1}.
    predicate: Vec<u8>,
    setting_distribution: Vec<f64>,
}

impl Game {
    pub fn new(
        n_parties: usize,
        n_settings: usize,
        n_outcomes: usize,
        predicate: Vec<u8>,
        setting_distribution: Vec<f64>,
    ) -> Result<Self> {
        let n_setting_tuples = n_settings.pow(n_parties as u32);
        let n_outcome_tuples = n_outcomes.pow(n_parties as u32);
        if predicate.len() != n_setting_tuples * n_outcome_tuples {
            return Err(Error::ShapeMismatch(format!(
                "predicate has {} entries, expected {}",
                predicate.len(),
                n_setting_tuples * n_outcome_tuples
            )));
        }
        if predicate.iter().any(|&v| v > 1) {
            return Err(Error::InvalidValue("predicate entries must be 0 or 1".into()));
        }
        if setting_distribution.len() != n_setting_tuples {
            return Err(Error::ShapeMismatch(format!(
                "distribution has {} entries, expected {}",
                setting_distribution.len(),
                n_setting_tuples
            )));
        }
        if setting_distribution.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidValue("setting probabilities must be >= 0".into()));
        }
        let sum: f64 = setting_distribution.iter().sum();
        if (sum - 1.0).abs() > tol::ARITHMETIC {
            return Err(Error::InvalidValue(format!(
                "setting distribution sums to {sum}, expected 1"
            )));
        }
        Ok(Self { n_parties, n_settings, n_outcomes, predicate, setting_distribution })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn n_settings(&self) -> usize {
        self.n_settings
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    pub fn n_setting_tuples(&self) -> usize {
        self.n_settings.pow(self.n_parties as u32)
    }

    pub fn n_outcome_tuples(&self) -> usize {
        self.n_outcomes.pow(self.n_parties as u32)
    }

    pub fn wins(&self, outcome_idx: usize, setting_idx: usize) -> bool {
        self.predicate[setting_idx * self.n_outcome_tuples() + outcome_idx] == 1
    }

    pub fn setting_probability(&self, setting_idx: usize) -> f64 {
        self.setting_distribution[setting_idx]
    }

    pub fn setting_distribution(&self) -> &[f64] {
        &self.setting_distribution
    }
}

/// Conditional probability table `p(outcome tuple | setting tuple)`.
#[derive(Debug, Clone)]
pub struct Behavior {
    n_parties: usize,
    n_settings: usize,
    n_outcomes: usize,
    /// table[setting_idx][outcome_idx].
    table: Vec<Vec<f64>>,
}

impl Behavior {
    /// Entries in `[-1e-12, 0)` are clamped to zero. A conditional sum within
    /// [`tol::DIST_SUM`] of one is renormalized; a larger deviation is an
    /// error, not a repair.
    pub fn new(
        n_parties: usize,
        n_settings: usize,
        n_outcomes: usize,
        mut table: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n_setting_tuples = n_settings.pow(n_parties as u32);
        let n_outcome_tuples = n_outcomes.pow(n_parties as u32);
        if table.len() != n_setting_tuples || table.iter().any(|r| r.len() != n_outcome_tuples) {
            return Err(Error::ShapeMismatch(format!(
                "behavior table must be {n_setting_tuples} x {n_outcome_tuples}"
            )));
        }
        for row in table.iter_mut() {
            for p in row.iter_mut() {
                if !p.is_finite() {
                    return Err(Error::InvalidValue("behavior entry is not finite".into()));
                }
                if *p < 0.0 {
                    if *p >= -tol::PROB_CLAMP {
                        *p = 0.0;
                    } else {
                        return Err(Error::InvalidValue(format!("negative probability {p}")));
                    }
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol::DIST_SUM {
                return Err(Error::InvalidValue(format!("conditional distribution sums to {sum}")));
            }
            if sum != 1.0 {
                for p in row.iter_mut() {
                    *p /= sum;
                }
            }
        }
        Ok(Self { n_parties, n_settings, n_outcomes, table })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn n_settings(&self) -> usize {
        self.n_settings
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    pub fn n_setting_tuples(&self) -> usize {
        self.table.len()
    }

    pub fn n_outcome_tuples(&self) -> usize {
        self.table.first().map_or(0, Vec::len)
    }

    pub fn prob(&self, outcome_idx: usize, setting_idx: usize) -> f64 {
        self.table[setting_idx][outcome_idx]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.table
    }

    /// Parity correlator of a subset of parties at one setting tuple:
    /// Σ_o (-1)^(Σ_{p in subset} o_p) p(o | s). Binary outcomes only.
    pub fn parity_correlator(&self, parties: &[usize], setting_idx: usize) -> f64 {
        assert_eq!(self.n_outcomes, 2, "parity correlators need binary outcomes");
        let mut acc = 0.0;
        for (o_idx, p) in self.table[setting_idx].iter().enumerate() {
            let mut parity = 0u32;
            for &party in parties {
                parity ^= (o_idx >> party) as u32 & 1;
            }
            acc += if parity == 0 { *p } else { -*p };
        }
        acc
    }

    /// Full-parity correlator over all parties.
    pub fn full_correlator(&self, setting_idx: usize) -> f64 {
        let all: Vec<usize> = (0..self.n_parties).collect();
        self.parity_correlator(&all, setting_idx)
    }
}

/// An XOR game: win iff the outcome parity equals `f(settings)`.
#[derive(Debug, Clone)]
pub struct XorGameSpec {
    n_parties: usize,
    n_settings: usize,
    /// f[setting_idx] ∈ {0, 1}.
    f: Vec<u8>,
    setting_distribution: Vec<f64>,
}

impl XorGameSpec {
    pub fn new(
        n_parties: usize,
        n_settings: usize,
        f: Vec<u8>,
        setting_distribution: Vec<f64>,
    ) -> Result<Self> {
        let n_setting_tuples = n_settings.pow(n_parties as u32);
        if f.len() != n_setting_tuples {
            return Err(Error::ShapeMismatch(format!(
                "f has {} entries, expected {n_setting_tuples}",
                f.len()
            )));
        }
        if f.iter().any(|&v| v > 1) {
            return Err(Error::InvalidValue("f entries must be 0 or 1".into()));
        }
        if setting_distribution.len() != n_setting_tuples {
            return Err(Error::ShapeMismatch("distribution length".into()));
        }
        if setting_distribution.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidValue("setting probabilities must be >= 0".into()));
        }
        let sum: f64 = setting_distribution.iter().sum();
        if (sum - 1.0).abs() > tol::ARITHMETIC {
            return Err(Error::InvalidValue(format!(
                "setting distribution sums to {sum}, expected 1"
            )));
        }
        Ok(Self { n_parties, n_settings, f, setting_distribution })
    }

    /// Uniform setting distribution (the usual choice: 1/4 bipartite, 1/8
    /// tripartite).
    pub fn uniform(n_parties: usize, n_settings: usize, f: Vec<u8>) -> Result<Self> {
        let n = n_settings.pow(n_parties as u32);
        Self::new(n_parties, n_settings, f, vec![1.0 / n as f64; n])
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn n_settings(&self) -> usize {
        self.n_settings
    }

    pub fn n_setting_tuples(&self) -> usize {
        self.f.len()
    }

    pub fn target_parity(&self, setting_idx: usize) -> u8 {
        self.f[setting_idx]
    }

    pub fn setting_distribution(&self) -> &[f64] {
        &self.setting_distribution
    }
}

/// The four named games analyzed throughout: the bipartite CHSH game and the
/// three tripartite full-correlation boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinGame {
    /// a ⊕ b = s·t.
    Chsh,
    /// a ⊕ b ⊕ c = s·t ⊕ t·u ⊕ u·s (the Svetlichny box).
    Svetlichny,
    /// a ⊕ b ⊕ c = s·t ⊕ s·u (first Mermin box).
    MerminA,
    /// a ⊕ b ⊕ c = s·t·u (second Mermin box).
    MerminB,
}

impl BuiltinGame {
    pub const ALL: [BuiltinGame; 4] = [Self::Chsh, Self::Svetlichny, Self::MerminA, Self::MerminB];

    pub fn name(self) -> &'static str {
        match self {
            Self::Chsh => "chsh",
            Self::Svetlichny => "svetlichny",
            Self::MerminA => "mermin_a",
            Self::MerminB => "mermin_b",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }

    pub fn spec(self) -> XorGameSpec {
        let spec = match self {
            Self::Chsh => {
                let f = parity_table(2, |d| d[0] & d[1]);
                XorGameSpec::uniform(2, 2, f)
            }
            Self::Svetlichny => {
                let f = parity_table(3, |d| (d[0] & d[1]) ^ (d[1] & d[2]) ^ (d[2] & d[0]));
                XorGameSpec::uniform(3, 2, f)
            }
            Self::MerminA => {
                let f = parity_table(3, |d| (d[0] & d[1]) ^ (d[0] & d[2]));
                XorGameSpec::uniform(3, 2, f)
            }
            Self::MerminB => {
                let f = parity_table(3, |d| d[0] & d[1] & d[2]);
                XorGameSpec::uniform(3, 2, f)
            }
        };
        spec.expect("builtin specs are well formed")
    }
}

fn parity_table(n_parties: usize, f: impl Fn(&[u8]) -> u8) -> Vec<u8> {
    (0..1usize << n_parties)
        .map(|idx| {
            let digits: Vec<u8> = (0..n_parties).map(|p| ((idx >> p) & 1) as u8).collect();
            f(&digits) & 1
        })
        .collect()
}

/// Named set of the built-in games.
pub fn builtin_games() -> Vec<(&'static str, XorGameSpec)> {
    BuiltinGame::ALL.into_iter().map(|g| (g.name(), g.spec())).collect()
}

/// Expand an XOR spec into a full predicate game.
pub fn xor_to_game(spec: &XorGameSpec) -> Game {
    let n_outcome_tuples = 1usize << spec.n_parties;
    let n_setting_tuples = spec.n_setting_tuples();
    let mut predicate = vec![0u8; n_setting_tuples * n_outcome_tuples];
    for s_idx in 0..n_setting_tuples {
        for o_idx in 0..n_outcome_tuples {
            let parity = (o_idx.count_ones() & 1) as u8;
            if parity == spec.f[s_idx] {
                predicate[s_idx * n_outcome_tuples + o_idx] = 1;
            }
        }
    }
    Game::new(spec.n_parties, spec.n_settings, 2, predicate, spec.setting_distribution.clone())
        .expect("xor expansion is well formed")
}

/// Signed coefficient table `c(settings) = (-1)^f(settings)` of the
/// correlation operator of an XOR game. For uniform settings the winning
/// probability satisfies `P = (1 + Σ_s c(s) E(s) / N) / 2`, with `E` the
/// full parity correlators and `N` the number of setting tuples.
pub fn correlation_coefficients(spec: &XorGameSpec) -> Vec<f64> {
    spec.f.iter().map(|&bit| if bit == 0 { 1.0 } else { -1.0 }).collect()
}

/// The extremal no-signaling box of an XOR game: uniform weight
/// `2^-(n_parties-1)` on the outcome tuples of the required parity. Wins
/// with probability one, and all strict-subset correlators vanish.
pub fn box_behavior(spec: &XorGameSpec) -> Behavior {
    let n_outcome_tuples = 1usize << spec.n_parties;
    let weight = 1.0 / (n_outcome_tuples / 2) as f64;
    let table = (0..spec.n_setting_tuples())
        .map(|s_idx| {
            (0..n_outcome_tuples)
                .map(|o_idx| {
                    let parity = (o_idx.count_ones() & 1) as u8;
                    if parity == spec.f[s_idx] {
                        weight
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    Behavior::new(spec.n_parties, spec.n_settings, 2, table)
        .expect("box behavior is a valid distribution")
}

/// Σ_settings p(settings) Σ_outcomes V(outcomes|settings) p(outcomes|settings).
pub fn winning_probability(game: &Game, behavior: &Behavior) -> Result<f64> {
    if game.n_parties != behavior.n_parties
        || game.n_settings != behavior.n_settings
        || game.n_outcomes != behavior.n_outcomes
    {
        return Err(Error::ShapeMismatch(format!(
            "game ({}, {}, {}) vs behavior ({}, {}, {})",
            game.n_parties,
            game.n_settings,
            game.n_outcomes,
            behavior.n_parties,
            behavior.n_settings,
            behavior.n_outcomes
        )));
    }
    let mut total = 0.0;
    for s_idx in 0..game.n_setting_tuples() {
        let p_s = game.setting_distribution[s_idx];
        if p_s == 0.0 {
            continue;
        }
        let mut conditional = 0.0;
        for o_idx in 0..game.n_outcome_tuples() {
            if game.wins(o_idx, s_idx) {
                conditional += behavior.prob(o_idx, s_idx);
            }
        }
        total += p_s * conditional;
    }
    debug_assert!((-tol::DIST_SUM..=1.0 + tol::DIST_SUM).contains(&total));
    Ok(total)
}

/// JSON game description consumed by the CLI.
///
/// ```json
/// {"parties": 3, "settings": 2, "outcomes": 2,
///  "predicate": {"type": "xor", "f": [0,0,0,0,1,1,1,1]},
///  "distribution": "uniform"}
/// ```
///
/// `f` is indexed by setting index `s + 2t + 4u`. Explicit predicates list
/// the winning `[outcome_idx, setting_idx]` pairs; explicit distributions
/// are an array of probabilities over setting tuples.
pub mod schema {
    use super::*;

    #[derive(Debug, Clone, Serialize, Deserialize)]
    pub struct GameFile {
        pub parties: usize,
        pub settings: usize,
        pub outcomes: usize,
        pub predicate: PredicateDef,
        pub distribution: DistributionDef,
    }

    #[derive(Debug, Clone, Serialize, Deserialize)]
    #[serde(tag = "type", rename_all = "snake_case")]
    pub enum PredicateDef {
        /// Win iff outcome parity equals `f[setting_idx]`.
        Xor { f: Vec<u8> },
        /// Explicit list of winning `[outcome_idx, setting_idx]` pairs.
        Explicit { wins: Vec<(usize, usize)> },
    }

    #[derive(Debug, Clone, Serialize, Deserialize)]
    #[serde(untagged)]
    pub enum DistributionDef {
        Named(String),
        Explicit(Vec<f64>),
    }

    impl GameFile {
        pub fn distribution_vec(&self) -> Result<Vec<f64>> {
            let n = self.settings.pow(self.parties as u32);
            match &self.distribution {
                DistributionDef::Named(name) if name == "uniform" => Ok(vec![1.0 / n as f64; n]),
                DistributionDef::Named(name) => {
                    Err(Error::InvalidValue(format!("unknown distribution {name:?}")))
                }
                DistributionDef::Explicit(v) => Ok(v.clone()),
            }
        }

        /// The XOR spec, when the predicate is XOR-shaped and outcomes are
        /// binary. Operator-identity paths need this form.
        pub fn to_xor_spec(&self) -> Result<Option<XorGameSpec>> {
            match (&self.predicate, self.outcomes) {
                (PredicateDef::Xor { f }, 2) => Ok(Some(XorGameSpec::new(
                    self.parties,
                    self.settings,
                    f.clone(),
                    self.distribution_vec()?,
                )?)),
                _ => Ok(None),
            }
        }

        pub fn to_game(&self) -> Result<Game> {
            let dist = self.distribution_vec()?;
            match &self.predicate {
                PredicateDef::Xor { f } => {
                    if self.outcomes != 2 {
                        return Err(Error::InvalidValue(
                            "xor predicates require binary outcomes".into(),
                        ));
                    }
                    let spec = XorGameSpec::new(self.parties, self.settings, f.clone(), dist)?;
                    Ok(xor_to_game(&spec))
                }
                PredicateDef::Explicit { wins } => {
                    let n_setting_tuples = self.settings.pow(self.parties as u32);
                    let n_outcome_tuples = self.outcomes.pow(self.parties as u32);
                    let mut predicate = vec![0u8; n_setting_tuples * n_outcome_tuples];
                    for &(o_idx, s_idx) in wins {
                        if o_idx >= n_outcome_tuples || s_idx >= n_setting_tuples {
                            return Err(Error::InvalidValue(format!(
                                "winning pair ({o_idx}, {s_idx}) out of range"
                            )));
                        }
                        predicate[s_idx * n_outcome_tuples + o_idx] = 1;
                    }
                    Game::new(self.parties, self.settings, self.outcomes, predicate, dist)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parity_tables() {
        // CHSH: f(s,t) = s·t is 1 only at setting index 3.
        assert_eq!(BuiltinGame::Chsh.spec().f, vec![0, 0, 0, 1]);
        // Svetlichny: f = st ⊕ tu ⊕ us is 1 where at least two settings are 1.
        assert_eq!(BuiltinGame::Svetlichny.spec().f, vec![0, 0, 0, 1, 0, 1, 1, 1]);
        // Mermin a: f = st ⊕ su (s = low digit).
        assert_eq!(BuiltinGame::MerminA.spec().f, vec![0, 0, 0, 1, 0, 1, 0, 0]);
        // Mermin b: f = stu.
        assert_eq!(BuiltinGame::MerminB.spec().f, vec![0, 0, 0, 0, 0, 0, 0, 1]);
        // Uniform distributions.
        for (_, spec) in builtin_games() {
            for &p in spec.setting_distribution() {
                assert_eq!(p, 1.0 / spec.n_setting_tuples() as f64);
            }
        }
    }

    #[test]
    fn correlation_signs() {
        let c = correlation_coefficients(&BuiltinGame::Chsh.spec());
        assert_eq!(c, vec![1.0, 1.0, 1.0, -1.0]);
        let c = correlation_coefficients(&BuiltinGame::Svetlichny.spec());
        assert_eq!(c, vec![1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0]);
        let trivial = XorGameSpec::uniform(2, 2, vec![0; 4]).unwrap();
        assert!(correlation_coefficients(&trivial).iter().all(|&c| c == 1.0));
    }

    #[test]
    fn uniform_behavior_wins_half() {
        let spec = BuiltinGame::Svetlichny.spec();
        let game = xor_to_game(&spec);
        let uniform = Behavior::new(3, 2, 2, vec![vec![0.125; 8]; 8]).unwrap();
        assert_eq!(winning_probability(&game, &uniform).unwrap(), 0.5);
    }

    #[test]
    fn box_wins_with_certainty() {
        let spec = BuiltinGame::Svetlichny.spec();
        let game = xor_to_game(&spec);
        let bx = box_behavior(&spec);
        assert_eq!(winning_probability(&game, &bx).unwrap(), 1.0);
    }

    #[test]
    fn all_sigma_z_on_00_wins_chsh_three_quarters() {
        // Shared |00> measured with σ_z everywhere always outputs (0,0), so
        // the game is won exactly on the three setting pairs with s·t = 0.
        let spec = BuiltinGame::Chsh.spec();
        let game = xor_to_game(&spec);
        let mut table = vec![vec![0.0; 4]; 4];
        for row in table.iter_mut() {
            row[0] = 1.0;
        }
        let behavior = Behavior::new(2, 2, 2, table).unwrap();
        assert_eq!(winning_probability(&game, &behavior).unwrap(), 0.75);
    }

    #[test]
    fn pr_box_weights() {
        let bx = box_behavior(&BuiltinGame::Chsh.spec());
        // Setting (0,0): winning parity 0, so outcomes 00 and 11 carry 1/2.
        assert_eq!(bx.prob(0, 0), 0.5);
        assert_eq!(bx.prob(3, 0), 0.5);
        assert_eq!(bx.prob(1, 0), 0.0);
        // Setting (1,1): winning parity 1.
        assert_eq!(bx.prob(1, 3), 0.5);
        assert_eq!(bx.prob(2, 3), 0.5);
        assert_eq!(bx.prob(0, 3), 0.0);
    }

    #[test]
    fn svetlichny_box_weights() {
        let bx = box_behavior(&BuiltinGame::Svetlichny.spec());
        for s_idx in 0..8 {
            let f = BuiltinGame::Svetlichny.spec().f[s_idx];
            for o_idx in 0..8usize {
                let parity = (o_idx.count_ones() & 1) as u8;
                let expect = if parity == f { 0.25 } else { 0.0 };
                assert_eq!(bx.prob(o_idx, s_idx), expect);
            }
        }
    }

    #[test]
    fn trivial_box_is_uniform_even_parity() {
        let spec = XorGameSpec::uniform(2, 2, vec![0; 4]).unwrap();
        let bx = box_behavior(&spec);
        for s_idx in 0..4 {
            assert_eq!(bx.prob(0, s_idx), 0.5);
            assert_eq!(bx.prob(3, s_idx), 0.5);
        }
    }

    #[test]
    fn xor_to_game_constant_parity() {
        let spec = XorGameSpec::uniform(2, 2, vec![0; 4]).unwrap();
        let game = xor_to_game(&spec);
        for s_idx in 0..4 {
            assert!(game.wins(0, s_idx) && game.wins(3, s_idx));
            assert!(!game.wins(1, s_idx) && !game.wins(2, s_idx));
        }
    }

    #[test]
    fn behavior_clamps_and_rejects() {
        // Tiny negatives are clamped.
        let b = Behavior::new(1, 1, 2, vec![vec![1.0, -1e-13]]).unwrap();
        assert_eq!(b.prob(1, 0), 0.0);
        // Larger negatives are rejected.
        assert!(Behavior::new(1, 1, 2, vec![vec![1.0, -1e-6]]).is_err());
        // Sums off by more than the tolerance are rejected.
        assert!(Behavior::new(1, 1, 2, vec![vec![0.7, 0.2]]).is_err());
    }

    #[test]
    fn schema_round_trip() {
        let text = r#"{"parties":3,"settings":2,"outcomes":2,
            "predicate":{"type":"xor","f":[0,0,0,1,0,1,1,1]},
            "distribution":"uniform"}"#;
        let file: schema::GameFile = serde_json::from_str(text).unwrap();
        let spec = file.to_xor_spec().unwrap().unwrap();
        assert_eq!(spec.f, BuiltinGame::Svetlichny.spec().f);
        let game = file.to_game().unwrap();
        assert_eq!(game.n_setting_tuples(), 8);

        let explicit = r#"{"parties":2,"settings":2,"outcomes":2,
            "predicate":{"type":"explicit","wins":[[0,0],[3,0]]},
            "distribution":[0.25,0.25,0.25,0.25]}"#;
        let file: schema::GameFile = serde_json::from_str(explicit).unwrap();
        let game = file.to_game().unwrap();
        assert!(game.wins(0, 0) && game.wins(3, 0) && !game.wins(1, 0));
    }
}
