use super::{CertificationError, RateThreshold, ScArWitness};
use crate::equilibrium::best_response_mdp;
use crate::game::{
    check_additive_reward, is_single_controller, AdditiveDecomposition, Controller, GameTables, Player,
    PureStrategy,
};
use crate::mdp::{blackwell_optimal, BlackwellResult};
use crate::numerics::Rational;

/// A Blackwell-Nash pair of a single-controller additive-reward game.
#[derive(Clone, Debug, PartialEq)]
pub struct ScArOutcome {
    pub f: PureStrategy,
    pub g: PureStrategy,
    pub controller: Controller,
    pub decomposition: AdditiveDecomposition,
    /// Player 2's Blackwell-optimal reply to `f`, with its certificate.
    pub blackwell: BlackwellResult,
    /// `(f, g)` is a Nash equilibrium for every discount factor in `[β₀, 1)`.
    pub beta0: Rational,
    /// `false` when `beta0` is a rational upper bound on an irrational root.
    pub beta0_exact: bool,
    /// Continuous-time only: `‖μ‖` and the matching rate threshold.
    pub norm: Option<Rational>,
    pub alpha0: Option<RateThreshold>,
    pub notes: Vec<String>,
}

/// Transitions free of player 1's action and player 1's rewards additive.
pub(crate) fn structural_check(
    game: &GameTables,
) -> Result<(Controller, AdditiveDecomposition), CertificationError> {
    let controller = is_single_controller(game);
    if !controller.ignores(Player::One) {
        return Err(CertificationError::NotScAr(ScArWitness::Controller(controller)));
    }
    let decomposition =
        check_additive_reward(game, Player::One).map_err(|w| CertificationError::NotScAr(ScArWitness::Rectangle(Box::new(w))))?;
    Ok((controller, decomposition))
}

/// Per state, the first action maximizing player 1's own additive term.
pub(crate) fn myopic_policy(decomposition: &AdditiveDecomposition) -> PureStrategy {
    PureStrategy::new(
        decomposition
            .r1
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(0, |best, (a, x)| if *x > row[best] { a } else { best })
            })
            .collect(),
    )
}

pub(crate) fn sc_ar_on_table(game: &GameTables) -> Result<ScArOutcome, CertificationError> {
    let (controller, decomposition) = structural_check(game)?;
    let f = myopic_policy(&decomposition);
    let fs = f.for_player::<Rational>(game, Player::One);
    let mdp = best_response_mdp(game, &fs, Player::Two)?;
    let blackwell = blackwell_optimal(&mdp)?;
    let mut notes = vec![
        "player 1 cannot move the state, so its per-state best additive action is optimal for every discount"
            .to_string(),
    ];
    if !blackwell.certificate.equivalent.is_empty() {
        notes.push(format!(
            "{} other reply policies share player 2's symbolic value",
            blackwell.certificate.equivalent.len()
        ));
    }
    Ok(ScArOutcome {
        g: blackwell.policy.clone(),
        beta0: blackwell.certificate.threshold.clone(),
        beta0_exact: blackwell.certificate.threshold_exact,
        f,
        controller,
        decomposition,
        blackwell,
        norm: None,
        alpha0: None,
        notes,
    })
}

/// Builds a Blackwell-Nash pair with an explicit discount threshold.
///
/// Player 1 plays the per-state maximizer of its additive reward term;
/// player 2 plays a Blackwell-optimal reply. Uses the same construction as
/// the continuous-time version.
pub fn sc_ar_bne_discrete(game: &GameTables) -> Result<ScArOutcome, CertificationError> {
    let mut out = sc_ar_on_table(game)?;
    out.notes.push("construction per continuous-time proof".into());
    Ok(out)
}
