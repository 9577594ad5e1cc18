use serde::{Deserialize, Serialize};

use super::{GameError, GameTables, Player};
use crate::numerics::{Field, OrderedField};

/// Per-state probability vector over a player's actions.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryStrategy<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Field> StationaryStrategy<T> {
    /// Wraps the rows without checking them; see [`Self::validate`].
    pub fn new(rows: Vec<Vec<T>>) -> Self {
        StationaryStrategy { rows }
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn state_count(&self) -> usize {
        self.rows.len()
    }

    /// `f(s, a)`
    pub fn prob(&self, s: usize, a: usize) -> &T {
        &self.rows[s][a]
    }

    pub fn row(&self, s: usize) -> &[T] {
        &self.rows[s]
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> StationaryStrategy<U> {
        StationaryStrategy {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Checks that each row has the right length for `player` in `game`.
    pub fn check_shape(&self, game: &GameTables, player: Player) -> Result<(), GameError> {
        let counts = game.action_counts(player);
        if self.rows.len() != counts.len() {
            return Err(GameError::DimensionMismatch(format!(
                "{player} strategy has {} states, game has {}",
                self.rows.len(),
                counts.len()
            )));
        }
        for (s, (row, &n)) in self.rows.iter().zip(&counts).enumerate() {
            if row.len() != n {
                return Err(GameError::DimensionMismatch(format!(
                    "{player} strategy has {} actions at state {s}, game has {n}",
                    row.len()
                )));
            }
        }
        Ok(())
    }
}

impl<T: OrderedField> StationaryStrategy<T> {
    /// Shape, nonnegativity and unit row sums (exact, or within `tol` for
    /// floats).
    pub fn validate(&self, game: &GameTables, player: Player, tol: f64) -> Result<(), GameError> {
        self.check_shape(game, player)?;
        for (s, row) in self.rows.iter().enumerate() {
            if let Some(a) = row.iter().position(|x| (-x.clone()).exceeds(tol)) {
                return Err(GameError::InvalidStrategy {
                    player,
                    reason: format!("negative probability at state {s}, action {a}"),
                });
            }
            let sum = row.iter().cloned().fold(T::zero(), |acc, x| acc + x);
            if !(sum.clone() - T::one()).is_zero_within(tol) {
                return Err(GameError::InvalidStrategy {
                    player,
                    reason: format!("probabilities at state {s} sum to {}", sum.to_f64()),
                });
            }
        }
        Ok(())
    }

    /// Actions played with probability above `tol` at state `s`.
    pub fn support_within(&self, s: usize, tol: f64) -> Vec<usize> {
        self.rows[s]
            .iter()
            .enumerate()
            .filter(|(_, x)| x.exceeds(tol))
            .map(|(a, _)| a)
            .collect()
    }

    /// Actions played with positive probability at state `s`.
    pub fn support(&self, s: usize) -> Vec<usize> {
        self.support_within(s, 0.0)
    }

    /// The pure strategy this is, if every row is a point mass.
    pub fn as_pure(&self) -> Option<PureStrategy> {
        self.rows
            .iter()
            .map(|row| {
                let ones: Vec<usize> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| x.is_one())
                    .map(|(a, _)| a)
                    .collect();
                let zeros = row.iter().filter(|x| x.is_zero()).count();
                (ones.len() == 1 && zeros + 1 == row.len()).then(|| ones[0])
            })
            .collect::<Option<Vec<_>>>()
            .map(PureStrategy::new)
    }
}

/// One action index per state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PureStrategy {
    actions: Vec<usize>,
}

impl PureStrategy {
    pub fn new(actions: Vec<usize>) -> Self {
        PureStrategy { actions }
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn action(&self, s: usize) -> usize {
        self.actions[s]
    }

    pub fn check(&self, game: &GameTables, player: Player) -> Result<(), GameError> {
        let counts = game.action_counts(player);
        if self.actions.len() != counts.len() {
            return Err(GameError::DimensionMismatch(format!(
                "{player} pure strategy has {} states, game has {}",
                self.actions.len(),
                counts.len()
            )));
        }
        for (s, (&a, &n)) in self.actions.iter().zip(&counts).enumerate() {
            if a >= n {
                return Err(GameError::InvalidStrategy {
                    player,
                    reason: format!("action {a} out of range at state {s} ({n} actions)"),
                });
            }
        }
        Ok(())
    }

    /// Point-mass rows sized by `counts`.
    pub fn to_stationary<T: Field>(&self, counts: &[usize]) -> StationaryStrategy<T> {
        StationaryStrategy::new(
            self.actions
                .iter()
                .zip(counts)
                .map(|(&a, &n)| {
                    (0..n)
                        .map(|b| if a == b { T::one() } else { T::zero() })
                        .collect()
                })
                .collect(),
        )
    }

    /// Point-mass strategy for `player` in `game`.
    pub fn for_player<T: Field>(&self, game: &GameTables, player: Player) -> StationaryStrategy<T> {
        self.to_stationary(&game.action_counts(player))
    }

    /// All pure strategies over `counts`, in lexicographic order.
    pub fn enumerate(counts: &[usize]) -> impl Iterator<Item = PureStrategy> + '_ {
        let total: usize = counts.iter().product();
        (0..total).map(move |mut k| {
            let mut actions = vec![0; counts.len()];
            for s in (0..counts.len()).rev() {
                actions[s] = k % counts[s];
                k /= counts[s];
            }
            PureStrategy::new(actions)
        })
    }
}
