use super::{best_response_mdp, Deviation, EquilibriumError, NashReport};
use crate::game::{GameTables, Player, StationaryStrategy};
use crate::mdp::{average_value, blackwell_optimal, Policy};
use crate::numerics::{OrderedField, Rational};

/// Limit-average Nash check.
///
/// Each player's best average reward is that of a Blackwell-optimal policy of
/// the decision process left by the opponent, which is average-optimal.
pub fn verify_average_nash(
    game: &GameTables,
    f: &StationaryStrategy<Rational>,
    g: &StationaryStrategy<Rational>,
    tol: f64,
) -> Result<NashReport<Rational>, EquilibriumError> {
    f.check_shape(game, Player::One)?;
    g.check_shape(game, Player::Two)?;
    let mut values: [Vec<Rational>; 2] = [Vec::new(), Vec::new()];
    let mut gaps: [Vec<Rational>; 2] = [Vec::new(), Vec::new()];
    let mut witness = None;
    for player in Player::BOTH {
        let (own, other) = match player {
            Player::One => (f, g),
            Player::Two => (g, f),
        };
        let mdp = best_response_mdp(game, other, player)?;
        let best = blackwell_optimal(&mdp)?;
        let optimal = average_value(&mdp, &Policy::Deterministic(best.policy.clone()))?;
        let actual = average_value(&mdp, &Policy::Randomized(own.clone()))?;
        let i = player.index();
        for (s, (o, a)) in optimal.iter().zip(&actual).enumerate() {
            let gap = o - a;
            if witness.is_none() && gap.exceeds(tol) {
                witness = Some(Deviation {
                    player,
                    state: s,
                    action: best.policy.action(s),
                    gain: gap.clone(),
                });
            }
            gaps[i].push(gap);
        }
        values[i] = actual;
    }
    Ok(NashReport {
        is_nash: witness.is_none(),
        values,
        gaps,
        support_residuals: [Vec::new(), Vec::new()],
        witness,
    })
}
