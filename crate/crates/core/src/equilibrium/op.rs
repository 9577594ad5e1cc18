use serde::Serialize;

use super::{best_response_mdp, EquilibriumError};
use crate::game::{induced_rewards, induced_transition, GameTables, Player, StationaryStrategy};
use crate::mdp::q_values;
use crate::numerics::OrderedField;

/// A candidate point `x = (v¹, v², f, g)` of the equilibrium program.
#[derive(Clone, Debug, PartialEq)]
pub struct OpPoint<T> {
    pub values: [Vec<T>; 2],
    pub f: StationaryStrategy<T>,
    pub g: StationaryStrategy<T>,
}

/// Objective and per-constraint residuals of the equilibrium program.
///
/// Inequality residuals are `lhs - rhs` of a `lhs <= rhs` constraint, so
/// feasibility means every one of them is `<= 0`; equality residuals must
/// vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpResidual<T> {
    /// `Σ_k 1ᵀ [v^k - r^k(f,g) - β P(f,g) v^k]`
    pub objective: T,
    /// (i): `[R¹(s) g(s) + β Σ P(s'|s) g(s) v¹(s')]_a1 - v¹(s)`, per state and action.
    pub best_response_1: Vec<Vec<T>>,
    /// (ii): the same for player 2 against `f`.
    pub best_response_2: Vec<Vec<T>>,
    /// (iii): `Σ f(s, ·) - 1` per state.
    pub simplex_f: Vec<T>,
    /// (iv): `Σ g(s, ·) - 1` per state.
    pub simplex_g: Vec<T>,
    /// (v): `-f(s, a1)`.
    pub nonneg_f: Vec<Vec<T>>,
    /// (vi): `-g(s, a2)`.
    pub nonneg_g: Vec<Vec<T>>,
    pub feasible: bool,
}

impl<T: OrderedField> OpResidual<T> {
    /// Largest inequality residual over (i), (ii), (v), (vi).
    pub fn max_inequality_residual(&self) -> T {
        [&self.best_response_1, &self.best_response_2, &self.nonneg_f, &self.nonneg_g]
            .into_iter()
            .flatten()
            .flatten()
            .cloned()
            .reduce(T::max_of)
            .unwrap_or_else(T::zero)
    }
}

/// Evaluates the program at `x` without optimizing anything.
pub fn op_evaluate<T: OrderedField>(
    game: &GameTables,
    beta: &T,
    x: &OpPoint<T>,
    tol: f64,
) -> Result<OpResidual<T>, EquilibriumError> {
    let n = game.state_count();
    for v in &x.values {
        if v.len() != n {
            return Err(crate::game::GameError::DimensionMismatch(format!(
                "value vector of length {} for {n} states",
                v.len()
            ))
            .into());
        }
    }
    let p = induced_transition(game, &x.f, &x.g)?;
    let mut objective = T::zero();
    for player in Player::BOTH {
        let v = &x.values[player.index()];
        let r = induced_rewards(game, &x.f, &x.g, player)?;
        let pv = p.mul_vec(v);
        for s in 0..n {
            objective = objective + v[s].clone() - r[s].clone() - beta.clone() * pv[s].clone();
        }
    }

    let lookahead = |player: Player| -> Result<Vec<Vec<T>>, EquilibriumError> {
        let other = match player {
            Player::One => &x.g,
            Player::Two => &x.f,
        };
        let mdp = best_response_mdp(game, other, player)?;
        let v = &x.values[player.index()];
        Ok(q_values(&mdp, beta, v)
            .into_iter()
            .enumerate()
            .map(|(s, row)| row.into_iter().map(|q| q - v[s].clone()).collect())
            .collect())
    };
    let best_response_1 = lookahead(Player::One)?;
    let best_response_2 = lookahead(Player::Two)?;

    let simplex = |h: &StationaryStrategy<T>| -> Vec<T> {
        h.rows()
            .iter()
            .map(|row| row.iter().cloned().fold(T::zero(), |a, b| a + b) - T::one())
            .collect()
    };
    let negated = |h: &StationaryStrategy<T>| -> Vec<Vec<T>> {
        h.rows().iter().map(|row| row.iter().map(|w| -w.clone()).collect()).collect()
    };
    let simplex_f = simplex(&x.f);
    let simplex_g = simplex(&x.g);
    let nonneg_f = negated(&x.f);
    let nonneg_g = negated(&x.g);

    let mut out = OpResidual {
        objective,
        best_response_1,
        best_response_2,
        simplex_f,
        simplex_g,
        nonneg_f,
        nonneg_g,
        feasible: false,
    };
    let equalities_hold = out
        .simplex_f
        .iter()
        .chain(&out.simplex_g)
        .all(|e| e.is_zero_within(tol));
    out.feasible = equalities_hold && !out.max_inequality_residual().exceeds(tol);
    Ok(out)
}
