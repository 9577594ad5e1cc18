use serde::Serialize;

use super::{GameTables, Player};
use crate::numerics::Rational;

/// Which player's actions drive the transition law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Controller {
    /// Transitions do not depend on player 2's action.
    Player1,
    /// Transitions do not depend on player 1's action.
    Player2,
    /// Transitions depend on both actions.
    Neither,
    /// Transitions depend on neither action.
    Both,
}

impl Controller {
    /// `true` when transitions are free of `player`'s actions.
    pub fn ignores(self, player: Player) -> bool {
        matches!(
            (self, player),
            (Controller::Both, _) | (Controller::Player2, Player::One) | (Controller::Player1, Player::Two)
        )
    }
}

fn law_ignores(game: &GameTables, player: Player) -> bool {
    game.states.iter().all(|st| {
        let [n1, n2] = st.action_counts();
        match player {
            Player::One => (0..n2).all(|a2| (1..n1).all(|a1| st.law[a1][a2] == st.law[0][a2])),
            Player::Two => (0..n1).all(|a1| (1..n2).all(|a2| st.law[a1][a2] == st.law[a1][0])),
        }
    })
}

/// Exact controller verdict for the transition (or rate) law.
pub fn is_single_controller(game: &GameTables) -> Controller {
    match (law_ignores(game, Player::One), law_ignores(game, Player::Two)) {
        (true, true) => Controller::Both,
        (true, false) => Controller::Player2,
        (false, true) => Controller::Player1,
        (false, false) => Controller::Neither,
    }
}

/// `r(s, a1, a2) = r1[s][a1] + r2[s][a2]`, gauged by `r2[s][0] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveDecomposition {
    pub r1: Vec<Vec<Rational>>,
    pub r2: Vec<Vec<Rational>>,
}

/// A rectangle with `r(a1,a2) + r(b1,b2) ≠ r(a1,b2) + r(b1,a2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleWitness {
    pub state: usize,
    pub a1: usize,
    pub b1: usize,
    pub a2: usize,
    pub b2: usize,
    /// `[r(a1,a2), r(b1,b2), r(a1,b2), r(b1,a2)]`
    pub values: [Rational; 4],
}

impl RectangleWitness {
    pub fn diagonal_sum(&self) -> Rational {
        &self.values[0] + &self.values[1]
    }

    pub fn anti_diagonal_sum(&self) -> Rational {
        &self.values[2] + &self.values[3]
    }
}

/// Decides whether `player`'s rewards split additively in every state.
///
/// Each state is tested against the rectangles through action pair
/// `(0, 0)`, which is equivalent to testing all rectangles. The first failing
/// cell in row-major order is reported.
pub fn check_additive_reward(
    game: &GameTables,
    player: Player,
) -> Result<AdditiveDecomposition, RectangleWitness> {
    let mut r1 = Vec::with_capacity(game.state_count());
    let mut r2 = Vec::with_capacity(game.state_count());
    for (s, st) in game.states.iter().enumerate() {
        let r = &st.rewards[player.index()];
        let [n1, n2] = st.action_counts();
        for b1 in 1..n1 {
            for b2 in 1..n2 {
                if &r[0][0] + &r[b1][b2] != &r[0][b2] + &r[b1][0] {
                    return Err(RectangleWitness {
                        state: s,
                        a1: 0,
                        b1,
                        a2: 0,
                        b2,
                        values: [
                            r[0][0].clone(),
                            r[b1][b2].clone(),
                            r[0][b2].clone(),
                            r[b1][0].clone(),
                        ],
                    });
                }
            }
        }
        r1.push((0..n1).map(|a1| r[a1][0].clone()).collect());
        r2.push((0..n2).map(|a2| &r[0][a2] - &r[0][0]).collect());
    }
    Ok(AdditiveDecomposition { r1, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::StateTable;
    use crate::numerics::int;

    fn table(p1: [[i64; 2]; 2], law: [[[i64; 2]; 2]; 2]) -> GameTables {
        let m = |v: [[i64; 2]; 2]| v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let absorbing = StateTable {
            rewards: [vec![vec![int(0)]], vec![vec![int(0)]]],
            law: vec![vec![vec![int(0), int(1)]]],
        };
        GameTables {
            states: vec![
                StateTable {
                    rewards: [m(p1), m([[0, 0], [0, 0]])],
                    law: law
                        .iter()
                        .map(|row| row.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect())
                        .collect(),
                },
                absorbing,
            ],
        }
    }

    #[test]
    fn controller_verdicts() {
        let by_column = table([[0; 2]; 2], [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]);
        assert_eq!(is_single_controller(&by_column), Controller::Player2);
        let by_row = table([[0; 2]; 2], [[[1, 0], [1, 0]], [[0, 1], [0, 1]]]);
        assert_eq!(is_single_controller(&by_row), Controller::Player1);
        let constant = table([[0; 2]; 2], [[[1, 0], [1, 0]], [[1, 0], [1, 0]]]);
        assert_eq!(is_single_controller(&constant), Controller::Both);
        let joint = table([[0; 2]; 2], [[[1, 0], [0, 1]], [[0, 1], [0, 1]]]);
        assert_eq!(is_single_controller(&joint), Controller::Neither);
        assert!(Controller::Player2.ignores(Player::One));
        assert!(!Controller::Player2.ignores(Player::Two));
    }

    #[test]
    fn additive_table_reconstructs() {
        let g = table([[2, 5], [1, 4]], [[[1, 0]; 2]; 2]);
        let d = check_additive_reward(&g, Player::One).unwrap();
        assert_eq!(d.r1[0], vec![int(2), int(1)]);
        assert_eq!(d.r2[0], vec![int(0), int(3)]);
        for a1 in 0..2 {
            for a2 in 0..2 {
                assert_eq!(&d.r1[0][a1] + &d.r2[0][a2], *g.reward(Player::One, 0, a1, a2));
            }
        }
    }

    #[test]
    fn non_additive_table_yields_rectangle() {
        let g = table([[4, 6], [5, 4]], [[[1, 0]; 2]; 2]);
        let w = check_additive_reward(&g, Player::One).unwrap_err();
        assert_eq!((w.state, w.a1, w.b1, w.a2, w.b2), (0, 0, 1, 0, 1));
        assert_eq!(w.diagonal_sum(), int(8));
        assert_eq!(w.anti_diagonal_sum(), int(11));
    }
}
