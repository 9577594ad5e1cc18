use num_traits::{One, Signed, Zero};

use super::{
    deviation_bounds, fold_bounds, inequality_verdict, Beta0, CertificationError, CertificationReport,
    ChainMembership, ConditionSet, ConditionVerdict, VerdictWitness,
};
use crate::equilibrium::verify_nash;
use crate::game::{induced_transition, is_identity, is_sit, GameTables, Player, PureStrategy};
use crate::numerics::{format_rational, DenseMatrix, Rational};

pub(crate) fn check_discount(beta: &Rational) -> Result<(), CertificationError> {
    if beta.is_negative() || *beta >= Rational::one() {
        return Err(CertificationError::InvalidDiscount(format_rational(beta)));
    }
    Ok(())
}

fn pure_transition(game: &GameTables, f: &PureStrategy, g: &PureStrategy) -> Result<DenseMatrix<Rational>, CertificationError> {
    f.check(game, Player::One)?;
    g.check(game, Player::Two)?;
    let fs = f.for_player::<Rational>(game, Player::One);
    let gs = g.for_player::<Rational>(game, Player::Two);
    Ok(induced_transition(game, &fs, &gs)?)
}

fn first_row_off_sit(p: &DenseMatrix<Rational>) -> Option<usize> {
    (1..p.rows()).find(|&i| p.row(i) != p.row(0))
}

fn first_row_off_identity(p: &DenseMatrix<Rational>) -> Option<usize> {
    (0..p.rows()).find(|&i| (0..p.cols()).any(|j| *p.get(i, j) != Rational::from_integer((i == j).into())))
}

/// Checks the full condition set on a discrete table. Used directly for
/// `C`/`D` and on the uniformized table for `M`/`N`.
pub(crate) fn certify_table(
    set: ConditionSet,
    game: &GameTables,
    f: &PureStrategy,
    g: &PureStrategy,
    beta_hat: &Rational,
) -> Result<CertificationReport, CertificationError> {
    check_discount(beta_hat)?;
    let p = pure_transition(game, f, g)?;
    let fs = f.for_player::<Rational>(game, Player::One);
    let gs = g.for_player::<Rational>(game, Player::Two);

    let nash = verify_nash(game, &fs, &gs, beta_hat, 0.0)?;
    let first = ConditionVerdict {
        condition: set.label(1),
        holds: nash.is_nash,
        detail: match &nash.witness {
            None => format!("pure equilibrium at discount {}", format_rational(beta_hat)),
            Some(d) => format!(
                "{} gains {} at state {} with action {}",
                d.player,
                format_rational(&d.gain),
                d.state,
                d.action
            ),
        },
        witness: nash.witness.clone().map(VerdictWitness::Deviation),
    };

    let chain = ChainMembership {
        sit: is_sit(&p, 0.0),
        identity: is_identity(&p, 0.0),
    };
    let (off_row, shape) = if set.uses_sit_reference() {
        (first_row_off_sit(&p), "state-independent")
    } else {
        (first_row_off_identity(&p), "identity")
    };
    let second = ConditionVerdict {
        condition: set.label(2),
        holds: off_row.is_none(),
        detail: match off_row {
            None => format!("induced chain is {shape}"),
            Some(s) => format!("induced chain is not {shape}: row {s} differs"),
        },
        witness: off_row.map(|state| VerdictWitness::Row { state }),
    };

    let (bounds, third) = if second.holds {
        let sit_row = set.uses_sit_reference().then(|| p.row(0).to_vec());
        let bounds = deviation_bounds(game, f, g, sit_row.as_deref());
        let third = inequality_verdict(set, &bounds);
        (bounds, third)
    } else {
        let third = ConditionVerdict {
            condition: set.label(3),
            holds: false,
            detail: format!("not evaluated: {} fails", set.label(2)),
            witness: None,
        };
        (Vec::new(), third)
    };

    let certified = first.holds && second.holds && third.holds;
    let mut report = CertificationReport {
        condition_set: set,
        f: f.clone(),
        g: g.clone(),
        reference: beta_hat.clone(),
        verdicts: vec![first, second, third],
        bounds,
        chain,
        certified,
        beta0: None,
        player_beta0: None,
        alpha0: None,
        player_alpha0: None,
        notes: Vec::new(),
    };
    if certified {
        let b = fold_bounds(set, report.bounds.clone())?;
        report.beta0 = Some(b.threshold);
        report.player_beta0 = Some(b.per_player);
    }
    if set.uses_sit_reference() && game_is_sit(game) {
        report
            .notes
            .push("every transition row is the same law; a pure equilibrium meets the first two conditions".into());
    }
    Ok(report)
}

fn game_is_sit(game: &GameTables) -> bool {
    let reference = game.law(0, 0, 0);
    game.states
        .iter()
        .all(|st| st.law.iter().flatten().all(|row| row.as_slice() == reference))
}

/// Conditions C1 to C3 for a pure pair, with C1 checked at `beta_hat`.
pub fn check_conditions_c(
    game: &GameTables,
    f: &PureStrategy,
    g: &PureStrategy,
    beta_hat: &Rational,
) -> Result<CertificationReport, CertificationError> {
    certify_table(ConditionSet::C, game, f, g, beta_hat)
}

/// Conditions D1 to D3 for a pure pair, with D1 checked at `beta_hat`.
pub fn check_conditions_d(
    game: &GameTables,
    f: &PureStrategy,
    g: &PureStrategy,
    beta_hat: &Rational,
) -> Result<CertificationReport, CertificationError> {
    certify_table(ConditionSet::D, game, f, g, beta_hat)
}

/// `β₀` from the state-independent bounds. Requires the induced chain to be
/// state-independent and every deviation inequality to hold.
pub fn beta0_c(game: &GameTables, f: &PureStrategy, g: &PureStrategy) -> Result<Beta0, CertificationError> {
    beta0_table(ConditionSet::C, game, f, g)
}

/// `β₀` from the all-absorbing bounds. Requires the induced chain to be the
/// identity and every deviation inequality to hold.
pub fn beta0_d(game: &GameTables, f: &PureStrategy, g: &PureStrategy) -> Result<Beta0, CertificationError> {
    beta0_table(ConditionSet::D, game, f, g)
}

pub(crate) fn beta0_table(
    set: ConditionSet,
    game: &GameTables,
    f: &PureStrategy,
    g: &PureStrategy,
) -> Result<Beta0, CertificationError> {
    let p = pure_transition(game, f, g)?;
    let off = if set.uses_sit_reference() {
        first_row_off_sit(&p)
    } else {
        first_row_off_identity(&p)
    };
    if let Some(s) = off {
        return Err(CertificationError::ConditionsNotMet {
            condition: set.label(2),
            reason: format!("induced transition row {s} does not fit"),
        });
    }
    let sit_row = set.uses_sit_reference().then(|| p.row(0).to_vec());
    let bounds = deviation_bounds(game, f, g, sit_row.as_deref());
    let b = fold_bounds(set, bounds)?;
    debug_assert!(b.threshold >= Rational::zero());
    Ok(b)
}
