//! Finite two-player stochastic games in discrete and continuous time.
//!
//! Both flavours share one table layout: per state, each player's reward
//! matrix indexed `[a1][a2]` and, per action pair, a row over next states
//! holding either transition probabilities or transition rates.

mod induced;
mod strategy;
mod structure;

use std::fmt;
use std::ops::Deref;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{format_rational, NumericsError, Rational};

pub use induced::{induced_rate_matrix, induced_rewards, induced_transition, is_identity, is_sit};
pub use strategy::{PureStrategy, StationaryStrategy};
pub use structure::{
    check_additive_reward, is_single_controller, AdditiveDecomposition, Controller, RectangleWitness,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player {}", self.index() + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeModel {
    Discrete,
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid strategy for {player}: {reason}")]
    InvalidStrategy { player: Player, reason: String },
    #[error("invalid game: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidGame(Vec<Violation>),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// One table of a single state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateTable {
    /// `rewards[player][a1][a2]`
    pub rewards: [Vec<Vec<Rational>>; 2],
    /// `law[a1][a2][s']`: probabilities (discrete) or rates (continuous).
    pub law: Vec<Vec<Vec<Rational>>>,
}

impl StateTable {
    pub fn action_counts(&self) -> [usize; 2] {
        let n1 = self.rewards[0].len();
        let n2 = self.rewards[0].first().map_or(0, Vec::len);
        [n1, n2]
    }
}

/// Unvalidated game data; see [`DiscreteGame`] and [`ContinuousGame`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTables {
    pub states: Vec<StateTable>,
}

impl GameTables {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// `|A^i(s)|`
    pub fn action_count(&self, player: Player, s: usize) -> usize {
        self.states[s].action_counts()[player.index()]
    }

    pub fn action_counts(&self, player: Player) -> Vec<usize> {
        (0..self.state_count())
            .map(|s| self.action_count(player, s))
            .collect()
    }

    pub fn reward(&self, player: Player, s: usize, a1: usize, a2: usize) -> &Rational {
        &self.states[s].rewards[player.index()][a1][a2]
    }

    pub fn law(&self, s: usize, a1: usize, a2: usize) -> &[Rational] {
        &self.states[s].law[a1][a2]
    }

    /// Reward matrix `R^i(s)` as rows over player 1's actions.
    pub fn reward_matrix(&self, player: Player, s: usize) -> &[Vec<Rational>] {
        &self.states[s].rewards[player.index()]
    }

    /// Action of `player` and opponent action mapped to an `(a1, a2)` cell.
    pub fn cell(player: Player, own: usize, other: usize) -> (usize, usize) {
        match player {
            Player::One => (own, other),
            Player::Two => (other, own),
        }
    }

    /// Number of pure stationary strategies of `player`.
    pub fn pure_strategy_count(&self, player: Player) -> u128 {
        self.action_counts(player)
            .iter()
            .map(|&n| n as u128)
            .product()
    }

    fn shape_violations(&self) -> Vec<Violation> {
        let n = self.state_count();
        let mut out = Vec::new();
        if n == 0 {
            out.push(Violation::new(None, None, "game has no states"));
        }
        for (s, st) in self.states.iter().enumerate() {
            let [n1, n2] = st.action_counts();
            if n1 == 0 || n2 == 0 {
                out.push(Violation::new(Some(s), None, "empty action set"));
                continue;
            }
            for (pl, table) in st.rewards.iter().enumerate() {
                if table.len() != n1 || table.iter().any(|r| r.len() != n2) {
                    out.push(Violation::new(
                        Some(s),
                        None,
                        format!("player {} reward table is not {n1}x{n2}", pl + 1),
                    ));
                }
            }
            if st.law.len() != n1 || st.law.iter().any(|r| r.len() != n2) {
                out.push(Violation::new(
                    Some(s),
                    None,
                    format!("transition table is not {n1}x{n2}"),
                ));
                continue;
            }
            for (a1, row) in st.law.iter().enumerate() {
                for (a2, next) in row.iter().enumerate() {
                    if next.len() != n {
                        out.push(Violation::new(
                            Some(s),
                            Some((a1, a2)),
                            format!("row has {} entries for {n} states", next.len()),
                        ));
                    }
                }
            }
        }
        out
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.states.iter().enumerate().flat_map(|(s, st)| {
            let [n1, n2] = st.action_counts();
            (0..n1).flat_map(move |a1| (0..n2).map(move |a2| (s, a1, a2)))
        })
    }
}

/// A located invariant violation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub state: Option<usize>,
    pub cell: Option<(usize, usize)>,
    pub message: String,
}

impl Violation {
    fn new(state: Option<usize>, cell: Option<(usize, usize)>, message: impl Into<String>) -> Self {
        Violation {
            state,
            cell,
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.state {
            write!(f, "state {s}")?;
            if let Some((a1, a2)) = self.cell {
                write!(f, ", actions ({a1}, {a2})")?;
            }
            write!(f, ": ")?;
        }
        f.write_str(&self.message)
    }
}

/// Every invariant violation of `tables` read as a discrete-time game.
pub fn validate_discrete(tables: &GameTables) -> Vec<Violation> {
    let mut out = tables.shape_violations();
    if !out.is_empty() {
        return out;
    }
    for (s, a1, a2) in tables.cells() {
        let row = tables.law(s, a1, a2);
        for (t, p) in row.iter().enumerate() {
            if p.is_negative() {
                out.push(Violation::new(
                    Some(s),
                    Some((a1, a2)),
                    format!("negative probability {} to state {t}", format_rational(p)),
                ));
            }
        }
        let sum: Rational = row.iter().sum();
        if !sum.is_one() {
            out.push(Violation::new(
                Some(s),
                Some((a1, a2)),
                format!("row sum {} ≠ 1", format_rational(&sum)),
            ));
        }
    }
    out
}

/// Every invariant violation of `tables` read as a continuous-time game.
pub fn validate_continuous(tables: &GameTables) -> Vec<Violation> {
    let mut out = tables.shape_violations();
    if !out.is_empty() {
        return out;
    }
    for (s, a1, a2) in tables.cells() {
        let row = tables.law(s, a1, a2);
        let mut off_sum = Rational::zero();
        for (t, mu) in row.iter().enumerate() {
            if t == s {
                continue;
            }
            if mu.is_negative() {
                out.push(Violation::new(
                    Some(s),
                    Some((a1, a2)),
                    format!("negative rate {} to state {t}", format_rational(mu)),
                ));
            }
            off_sum += mu;
        }
        if row[s] != -off_sum.clone() {
            out.push(Violation::new(
                Some(s),
                Some((a1, a2)),
                format!(
                    "diagonal rate {} ≠ {}",
                    format_rational(&row[s]),
                    format_rational(&-off_sum)
                ),
            ));
        }
    }
    out
}

macro_rules! validated_game {
    ($name:ident, $validate:ident, $model:expr) => {
        #[derive(Clone, Debug, PartialEq, Eq)]
        pub struct $name {
            tables: GameTables,
        }

        impl $name {
            pub fn new(tables: GameTables) -> Result<Self, GameError> {
                let violations = $validate(&tables);
                if violations.is_empty() {
                    Ok($name { tables })
                } else {
                    Err(GameError::InvalidGame(violations))
                }
            }

            pub fn tables(&self) -> &GameTables {
                &self.tables
            }

            pub fn time_model(&self) -> TimeModel {
                $model
            }
        }

        impl Deref for $name {
            type Target = GameTables;

            fn deref(&self) -> &GameTables {
                &self.tables
            }
        }
    };
}

validated_game!(DiscreteGame, validate_discrete, TimeModel::Discrete);
validated_game!(ContinuousGame, validate_continuous, TimeModel::Continuous);

/// Either flavour of validated game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Game {
    Discrete(DiscreteGame),
    Continuous(ContinuousGame),
}

impl Game {
    pub fn tables(&self) -> &GameTables {
        match self {
            Game::Discrete(g) => g.tables(),
            Game::Continuous(g) => g.tables(),
        }
    }

    pub fn time_model(&self) -> TimeModel {
        match self {
            Game::Discrete(_) => TimeModel::Discrete,
            Game::Continuous(_) => TimeModel::Continuous,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    fn one_state(law: Vec<Vec<Vec<Rational>>>) -> GameTables {
        let n1 = law.len();
        let n2 = law[0].len();
        let zeros = vec![vec![int(0); n2]; n1];
        GameTables {
            states: vec![StateTable {
                rewards: [zeros.clone(), zeros],
                law,
            }],
        }
    }

    #[test]
    fn defective_probability_row_is_reported() {
        let mut t = one_state(vec![vec![vec![int(1)]]]);
        t.states.push(t.states[0].clone());
        t.states[0].law[0][0] = vec![rat(1, 2), rat(2, 5)];
        t.states[1].law[0][0] = vec![int(0), int(1)];
        let v = validate_discrete(&t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].message, "row sum 9/10 ≠ 1");
        assert_eq!((v[0].state, v[0].cell), (Some(0), Some((0, 0))));
        assert!(DiscreteGame::new(t).is_err());
    }

    #[test]
    fn negative_probability_is_reported() {
        let t = GameTables {
            states: vec![
                StateTable {
                    rewards: [vec![vec![int(0)]], vec![vec![int(0)]]],
                    law: vec![vec![vec![int(2), int(-1)]]],
                },
                StateTable {
                    rewards: [vec![vec![int(0)]], vec![vec![int(0)]]],
                    law: vec![vec![vec![int(0), int(1)]]],
                },
            ],
        };
        let v = validate_discrete(&t);
        assert_eq!(v.len(), 1);
        assert!(v[0].message.contains("negative probability"));
    }

    #[test]
    fn rate_rows_need_conserving_diagonal() {
        let mut t = one_state(vec![vec![vec![int(0)]]]);
        assert!(validate_continuous(&t).is_empty());
        t.states[0].law[0][0] = vec![int(-1)];
        let v = validate_continuous(&t);
        assert_eq!(v.len(), 1);
        assert!(v[0].message.starts_with("diagonal rate"));
    }

    #[test]
    fn shape_errors_short_circuit() {
        let mut t = one_state(vec![vec![vec![int(1)]]]);
        t.states[0].law[0][0] = vec![int(1), int(0)];
        let v = validate_discrete(&t);
        assert_eq!(v.len(), 1);
        assert!(v[0].message.contains("2 entries for 1 states"));
        assert_eq!(
            validate_discrete(&GameTables { states: vec![] })[0].message,
            "game has no states"
        );
    }

    #[test]
    fn player_helpers() {
        assert_eq!(Player::One.opponent(), Player::Two);
        assert_eq!(GameTables::cell(Player::Two, 1, 0), (0, 1));
        assert_eq!(Player::Two.to_string(), "player 2");
    }
}
