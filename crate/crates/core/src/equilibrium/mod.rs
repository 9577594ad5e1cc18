//! Nash verification and search for discrete-time games.

mod average;
mod mixed;
mod op;

use serde::Serialize;
use thiserror::Error;

use crate::game::{Controller, GameError, GameTables, Player, PureStrategy, StationaryStrategy};
use crate::mdp::{policy_value_within, q_values, Mdp, MdpError, Policy};
use crate::numerics::{Field, OrderedField, Rational};

pub use average::verify_average_nash;
pub use mixed::{mixed_ne_single_controller_2x2, mixed_ne_single_controller_2x2_generic, MixedSolution};
pub use op::{op_evaluate, OpPoint, OpResidual};

/// Pure profiles examined by [`enumerate_pure_nash`] unless told otherwise.
pub const DEFAULT_PROFILE_CAP: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error("{count} pure profiles exceed the enumeration cap of {cap}")]
    EnumerationCapExceeded { count: u128, cap: u128 },
    #[error("transitions are not controlled by player 2 alone (verdict: {0:?})")]
    NotSingleController(Controller),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("no interior mixed equilibrium: {0}")]
    NoInteriorSolution(String),
}

/// The decision process `player` faces when the opponent plays `opponent`.
pub fn best_response_mdp<T: Field>(
    game: &GameTables,
    opponent: &StationaryStrategy<T>,
    player: Player,
) -> Result<Mdp<T>, GameError> {
    opponent.check_shape(game, player.opponent())?;
    let n = game.state_count();
    let mut rewards = Vec::with_capacity(n);
    let mut transitions = Vec::with_capacity(n);
    for s in 0..n {
        let own = game.action_count(player, s);
        let other = game.action_count(player.opponent(), s);
        let mut rs = Vec::with_capacity(own);
        let mut ps = Vec::with_capacity(own);
        for a in 0..own {
            let mut r = T::zero();
            let mut p = vec![T::zero(); n];
            for b in 0..other {
                let w = opponent.prob(s, b);
                if w.is_zero() {
                    continue;
                }
                let (a1, a2) = GameTables::cell(player, a, b);
                r = r + w.clone() * T::from_rational(game.reward(player, s, a1, a2));
                for (t, x) in game.law(s, a1, a2).iter().enumerate() {
                    p[t] = p[t].clone() + w.clone() * T::from_rational(x);
                }
            }
            rs.push(r);
            ps.push(p);
        }
        rewards.push(rs);
        transitions.push(ps);
    }
    Mdp::new(rewards, transitions).map_err(|e| GameError::DimensionMismatch(e.to_string()))
}

/// A profitable unilateral deviation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Deviation<T> {
    pub player: Player,
    pub state: usize,
    pub action: usize,
    pub gain: T,
}

/// Outcome of a Nash check, with per-player, per-state diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct NashReport<T> {
    pub is_nash: bool,
    /// Value of the profile to each player.
    pub values: [Vec<T>; 2],
    /// Per state, the largest improvement available to each player: the
    /// Bellman surplus `max_a Q(s,a) - v(s)` for discounted checks, the
    /// optimal-minus-actual average for limit-average checks.
    pub gaps: [Vec<T>; 2],
    /// Per state, the largest shortfall `v(s) - Q(s,a)` over supported
    /// actions (zero at an exact equilibrium; empty for average checks).
    pub support_residuals: [Vec<T>; 2],
    pub witness: Option<Deviation<T>>,
}

impl<T> NashReport<T> {
    pub fn gap(&self, player: Player) -> &[T] {
        &self.gaps[player.index()]
    }
}

/// Bellman-gap Nash check at discount factor `beta`.
pub fn verify_nash<T: OrderedField>(
    game: &GameTables,
    f: &StationaryStrategy<T>,
    g: &StationaryStrategy<T>,
    beta: &T,
    tol: f64,
) -> Result<NashReport<T>, EquilibriumError> {
    f.check_shape(game, Player::One)?;
    g.check_shape(game, Player::Two)?;
    let mut values: [Vec<T>; 2] = [Vec::new(), Vec::new()];
    let mut gaps: [Vec<T>; 2] = [Vec::new(), Vec::new()];
    let mut residuals: [Vec<T>; 2] = [Vec::new(), Vec::new()];
    let mut witness = None;
    for player in Player::BOTH {
        let (own, other) = match player {
            Player::One => (f, g),
            Player::Two => (g, f),
        };
        let mdp = best_response_mdp(game, other, player)?;
        let v = policy_value_within(&mdp, &Policy::Randomized(own.clone()), beta, tol)?;
        let q = q_values(&mdp, beta, &v);
        let i = player.index();
        for (s, row) in q.iter().enumerate() {
            let (best_a, best) = row
                .iter()
                .enumerate()
                .fold(None::<(usize, &T)>, |acc, (a, x)| match acc {
                    Some((_, y)) if !(x > y) => acc,
                    _ => Some((a, x)),
                })
                .expect("nonempty action set");
            let gap = best.clone() - v[s].clone();
            if witness.is_none() && gap.exceeds(tol) {
                witness = Some(Deviation {
                    player,
                    state: s,
                    action: best_a,
                    gain: gap.clone(),
                });
            }
            let shortfall = row
                .iter()
                .zip(own.row(s))
                .filter(|(_, w)| w.exceeds(tol))
                .map(|(x, _)| v[s].clone() - x.clone())
                .reduce(T::max_of)
                .unwrap_or_else(T::zero);
            gaps[i].push(gap);
            residuals[i].push(shortfall);
        }
        values[i] = v;
    }
    Ok(NashReport {
        is_nash: witness.is_none(),
        values,
        gaps,
        support_residuals: residuals,
        witness,
    })
}

/// Every pure stationary Nash equilibrium at `beta`, in lexicographic order
/// of `(f, g)` action indices.
pub fn enumerate_pure_nash(
    game: &GameTables,
    beta: &Rational,
) -> Result<Vec<(PureStrategy, PureStrategy)>, EquilibriumError> {
    enumerate_pure_nash_with_cap(game, beta, DEFAULT_PROFILE_CAP)
}

pub fn enumerate_pure_nash_with_cap(
    game: &GameTables,
    beta: &Rational,
    cap: u128,
) -> Result<Vec<(PureStrategy, PureStrategy)>, EquilibriumError> {
    let count = game
        .pure_strategy_count(Player::One)
        .saturating_mul(game.pure_strategy_count(Player::Two));
    if count > cap {
        return Err(EquilibriumError::EnumerationCapExceeded { count, cap });
    }
    let c1 = game.action_counts(Player::One);
    let c2 = game.action_counts(Player::Two);
    let mut out = Vec::new();
    for a in PureStrategy::enumerate(&c1) {
        let f = a.to_stationary::<Rational>(&c1);
        for b in PureStrategy::enumerate(&c2) {
            let g = b.to_stationary::<Rational>(&c2);
            if verify_nash(game, &f, &g, beta, 0.0)?.is_nash {
                out.push((a.clone(), b));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::game::StateTable;
    use crate::numerics::{int, rat, RationalFunction};

    fn cell_table(v: [[i64; 2]; 2]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    /// The single-controller counterexample: player 2 steers, state 2 is a
    /// one-action state.
    pub(crate) fn counterexample() -> GameTables {
        let to = |s: usize| if s == 0 { vec![int(1), int(0)] } else { vec![int(0), int(1)] };
        GameTables {
            states: vec![
                StateTable {
                    rewards: [cell_table([[4, 6], [5, 4]]), cell_table([[9, 3], [4, 5]])],
                    law: vec![vec![to(0), to(1)], vec![to(0), to(1)]],
                },
                StateTable {
                    rewards: [vec![vec![int(6)]], vec![vec![int(7)]]],
                    law: vec![vec![to(0)]],
                },
            ],
        }
    }

    #[test]
    fn best_response_rewards_are_affine_in_opponent_mix() {
        let game = counterexample();
        let p = RationalFunction::var();
        let f = StationaryStrategy::new(vec![
            vec![p.clone(), RationalFunction::constant(int(1)) - p.clone()],
            vec![RationalFunction::constant(int(1))],
        ]);
        let mdp = best_response_mdp(&game, &f, Player::Two).unwrap();
        let affine = |a: i64, b: i64| {
            RationalFunction::polynomial(crate::numerics::Polynomial::from_i64s(&[a, b]))
        };
        assert_eq!(mdp.reward(0, 0), &affine(4, 5));
        assert_eq!(mdp.reward(0, 1), &affine(5, -2));
        assert_eq!(mdp.reward(1, 0), &affine(7, 0));

        let q = RationalFunction::var();
        let g = StationaryStrategy::new(vec![
            vec![q.clone(), RationalFunction::constant(int(1)) - q],
            vec![RationalFunction::constant(int(1))],
        ]);
        let mdp = best_response_mdp(&game, &g, Player::One).unwrap();
        assert_eq!(mdp.reward(0, 0), &affine(6, -2));
        assert_eq!(mdp.reward(0, 1), &affine(4, 1));
    }

    #[test]
    fn pure_first_actions_are_not_an_equilibrium() {
        let game = counterexample();
        let f = PureStrategy::new(vec![0, 0]).for_player::<Rational>(&game, Player::One);
        let g = PureStrategy::new(vec![0, 0]).for_player::<Rational>(&game, Player::Two);
        let report = verify_nash(&game, &f, &g, &rat(1, 2), 0.0).unwrap();
        assert!(!report.is_nash);
        let w = report.witness.unwrap();
        assert_eq!((w.player, w.state, w.action), (Player::One, 0, 1));
        assert_eq!(w.gain, int(1));
    }

    #[test]
    fn counterexample_has_no_pure_equilibrium() {
        let game = counterexample();
        assert!(enumerate_pure_nash(&game, &rat(1, 2)).unwrap().is_empty());
    }

    #[test]
    fn dominant_actions_form_the_only_pure_equilibrium() {
        let game = GameTables {
            states: vec![StateTable {
                rewards: [cell_table([[3, 3], [1, 1]]), cell_table([[0, 2], [0, 2]])],
                law: vec![vec![vec![int(1)]; 2]; 2],
            }],
        };
        let all = enumerate_pure_nash(&game, &rat(9, 10)).unwrap();
        assert_eq!(all, vec![(PureStrategy::new(vec![0]), PureStrategy::new(vec![1]))]);
        assert!(matches!(
            enumerate_pure_nash_with_cap(&game, &rat(9, 10), 3),
            Err(EquilibriumError::EnumerationCapExceeded { count: 4, cap: 3 })
        ));
    }

    #[test]
    fn reward_shift_moves_values_by_geometric_sum() {
        let game = counterexample();
        let mut shifted = game.clone();
        for st in &mut shifted.states {
            for row in &mut st.rewards[0] {
                for x in row.iter_mut() {
                    *x += int(3);
                }
            }
        }
        let beta = rat(2, 5);
        let g = StationaryStrategy::new(vec![vec![rat(1, 3), rat(2, 3)], vec![int(1)]]);
        let base = crate::mdp::optimal_policy(&best_response_mdp(&game, &g, Player::One).unwrap(), &beta).unwrap();
        let moved =
            crate::mdp::optimal_policy(&best_response_mdp(&shifted, &g, Player::One).unwrap(), &beta).unwrap();
        assert_eq!(base.optimal_actions, moved.optimal_actions);
        let c = int(3) / (int(1) - beta);
        for (a, b) in base.value.iter().zip(&moved.value) {
            assert_eq!(b - a, c);
        }
    }
}
