use super::{best_response_mdp, EquilibriumError};
use crate::game::{is_single_controller, GameTables, Player, StationaryStrategy};
use crate::mdp::{policy_value, Policy};
use crate::numerics::{format_rational, Field, Rational, DEFAULT_TOLERANCE};

/// Completely mixed equilibrium at the unique 2×2 state.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedSolution<T> {
    /// Index of the 2×2 state.
    pub state: usize,
    /// Probability of player 1's first action there.
    pub p: T,
    /// Probability of player 2's first action there.
    pub q: T,
    pub f: StationaryStrategy<T>,
    pub g: StationaryStrategy<T>,
}

fn two_by_two_state(game: &GameTables) -> Result<usize, EquilibriumError> {
    let mut found = None;
    for s in 0..game.state_count() {
        match game.states[s].action_counts() {
            [1, 1] => {}
            [2, 2] if found.is_none() => found = Some(s),
            [2, 2] => {
                return Err(EquilibriumError::UnsupportedShape(
                    "more than one 2x2 state".into(),
                ))
            }
            [n1, n2] => {
                return Err(EquilibriumError::UnsupportedShape(format!(
                    "state {s} has {n1}x{n2} actions; expected 2x2 or 1x1"
                )))
            }
        }
    }
    found.ok_or_else(|| EquilibriumError::UnsupportedShape("no 2x2 state".into()))
}

fn strategy_with<T: Field>(game: &GameTables, player: Player, state: usize, first: &T) -> StationaryStrategy<T> {
    StationaryStrategy::new(
        (0..game.state_count())
            .map(|s| {
                if s == state {
                    vec![first.clone(), T::one() - first.clone()]
                } else {
                    vec![T::one(); game.action_count(player, s)]
                }
            })
            .collect(),
    )
}

/// Solves the two indifference conditions over any field, without range
/// checks. With `T = RationalFunction` and `beta` the indeterminate this
/// yields the equilibrium in closed form.
///
/// Player 1 cannot influence transitions, so its indifference involves the
/// immediate rewards at the 2×2 state only and fixes `q`. Player 2's
/// indifference compares its two deterministic policies; the difference of
/// their values is affine in `p` and fixes `p`.
pub fn mixed_ne_single_controller_2x2_generic<T: Field>(
    game: &GameTables,
    beta: &T,
) -> Result<MixedSolution<T>, EquilibriumError> {
    let controller = is_single_controller(game);
    if !controller.ignores(Player::One) {
        return Err(EquilibriumError::NotSingleController(controller));
    }
    let state = two_by_two_state(game)?;
    let r = |a1: usize, a2: usize| T::from_rational(game.reward(Player::One, state, a1, a2));

    // q (r00 - r01 - r10 + r11) = r11 - r01
    let slope = r(0, 0) - r(0, 1) - r(1, 0) + r(1, 1);
    if slope.is_zero_within(DEFAULT_TOLERANCE) {
        return Err(EquilibriumError::NoInteriorSolution(
            "player 1's indifference does not determine q".into(),
        ));
    }
    let q = (r(1, 1) - r(0, 1)) / slope;

    let n = game.state_count();
    let advantage = |p: T| -> Result<T, EquilibriumError> {
        let f = strategy_with(game, Player::One, state, &p);
        let mdp = best_response_mdp(game, &f, Player::Two)?;
        let mut values = Vec::with_capacity(2);
        for a in 0..2 {
            let mut actions = vec![0; n];
            actions[state] = a;
            values.push(policy_value(&mdp, &Policy::deterministic(actions), beta)?[state].clone());
        }
        Ok(values[0].clone() - values[1].clone())
    };
    let at_zero = advantage(T::zero())?;
    let at_one = advantage(T::one())?;
    let denom = at_zero.clone() - at_one;
    if denom.is_zero_within(DEFAULT_TOLERANCE) {
        return Err(EquilibriumError::NoInteriorSolution(
            "player 2's indifference does not determine p".into(),
        ));
    }
    let p = at_zero / denom;

    Ok(MixedSolution {
        state,
        f: strategy_with(game, Player::One, state, &p),
        g: strategy_with(game, Player::Two, state, &q),
        p,
        q,
    })
}

/// Exact mixed equilibrium of a player-2-controlled game with one 2×2 state,
/// rejecting solutions outside the unit interval.
pub fn mixed_ne_single_controller_2x2(
    game: &GameTables,
    beta: &Rational,
) -> Result<MixedSolution<Rational>, EquilibriumError> {
    let sol = mixed_ne_single_controller_2x2_generic(game, beta)?;
    let unit = |x: &Rational| *x >= Rational::from_integer(0.into()) && *x <= Rational::from_integer(1.into());
    for (name, x) in [("p", &sol.p), ("q", &sol.q)] {
        if !unit(x) {
            return Err(EquilibriumError::NoInteriorSolution(format!(
                "{name} = {} lies outside [0, 1]",
                format_rational(x)
            )));
        }
    }
    Ok(sol)
}
