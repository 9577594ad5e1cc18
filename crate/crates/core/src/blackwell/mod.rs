//! Blackwell-Nash certification: sufficient condition sets with closed-form
//! discount thresholds, and the single-controller additive-reward
//! construction.

mod discrete;
mod scar;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::continuous::ContinuousError;
use crate::equilibrium::{Deviation, EquilibriumError};
use crate::game::{Controller, GameError, GameTables, Player, PureStrategy, RectangleWitness};
use crate::mdp::MdpError;
use crate::numerics::{Polynomial, Rational, RationalFunction};

pub use discrete::{beta0_c, beta0_d, check_conditions_c, check_conditions_d};
pub use scar::{sc_ar_bne_discrete, ScArOutcome};
pub(crate) use discrete::certify_table;
pub(crate) use scar::sc_ar_on_table;

/// The four sufficient-condition families: `C`/`D` in discrete time, `M`/`N`
/// their continuous-time counterparts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConditionSet {
    C,
    D,
    M,
    N,
}

impl ConditionSet {
    /// `true` for the families whose induced chain is state-independent
    /// (`C`, `M`); `false` for the all-absorbing ones (`D`, `N`).
    pub fn uses_sit_reference(self) -> bool {
        matches!(self, ConditionSet::C | ConditionSet::M)
    }

    pub fn is_continuous(self) -> bool {
        matches!(self, ConditionSet::M | ConditionSet::N)
    }

    fn label(self, k: u8) -> String {
        format!("{self:?}{k}")
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificationError {
    #[error("condition {condition} does not hold: {reason}")]
    ConditionsNotMet { condition: String, reason: String },
    #[error(
        "invalid certificate: {player} gains {} at state {state} with action {action} for every discount",
        crate::numerics::format_rational(surplus)
    )]
    InvalidCertificate {
        player: Player,
        state: usize,
        action: usize,
        surplus: Rational,
    },
    #[error("not a single-controller additive-reward game: {0}")]
    NotScAr(ScArWitness),
    #[error("discount factor must lie in [0, 1), got {0}")]
    InvalidDiscount(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error(transparent)]
    Continuous(#[from] ContinuousError),
}

/// Why a game is not single-controller with additive rewards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScArWitness {
    Controller(Controller),
    Rectangle(Box<RectangleWitness>),
}

impl fmt::Display for ScArWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::numerics::format_rational as q;
        match self {
            ScArWitness::Controller(c) => {
                write!(f, "transitions depend on player 1's action (controller verdict {c:?})")
            }
            ScArWitness::Rectangle(w) => write!(
                f,
                "player 1 rewards at state {} are not additive: {} + {} ≠ {} + {}",
                w.state,
                q(&w.values[0]),
                q(&w.values[1]),
                q(&w.values[2]),
                q(&w.values[3])
            ),
        }
    }
}

/// Where a deviation's surplus `θ` stays nonpositive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    /// `θ <= 0` exactly for `β >= value`.
    Threshold(Rational),
    /// `θ ≡ 0`.
    BetaIndependent,
    /// Zero denominator with a negative numerator: `θ < 0` for every `β`.
    Undefined,
    /// Negative denominator: `θ <= 0` only for `β <= value`, so the
    /// deviation becomes profitable near `β = 1`.
    Reversed(Rational),
    /// Zero denominator with a positive numerator: `θ > 0` for every `β`.
    AlwaysProfitable,
}

/// The closed-form bound of one non-equilibrium action.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundEntry {
    pub player: Player,
    pub state: usize,
    pub action: usize,
    /// Immediate gain of the deviation.
    pub numerator: Rational,
    /// Drop in expected next-step equilibrium reward caused by the deviation.
    pub denominator: Rational,
    pub bound: Bound,
}

impl BoundEntry {
    fn new(player: Player, state: usize, action: usize, numerator: Rational, denominator: Rational) -> Self {
        let bound = if denominator.is_positive() {
            Bound::Threshold(&numerator / &denominator)
        } else if denominator.is_negative() {
            Bound::Reversed(&numerator / &denominator)
        } else if numerator.is_negative() {
            Bound::Undefined
        } else if numerator.is_zero() {
            Bound::BetaIndependent
        } else {
            Bound::AlwaysProfitable
        };
        BoundEntry {
            player,
            state,
            action,
            numerator,
            denominator,
            bound,
        }
    }

    /// The deviation's Bellman surplus as a function of `β`: `num - β·den`,
    /// divided by `1 - β` for the all-absorbing families.
    pub fn theta(&self, set: ConditionSet) -> RationalFunction {
        let linear = RationalFunction::polynomial(Polynomial::new(vec![
            self.numerator.clone(),
            -self.denominator.clone(),
        ]));
        if set.uses_sit_reference() {
            linear
        } else {
            linear
                / RationalFunction::polynomial(Polynomial::new(vec![Rational::one(), -Rational::one()]))
        }
    }
}

/// A located failure inside a condition verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum VerdictWitness {
    Deviation(Deviation<Rational>),
    Inequality {
        player: Player,
        state: usize,
        action: usize,
        /// Left minus right side of the `>=` inequality.
        slack: Rational,
    },
    Row {
        state: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionVerdict {
    pub condition: String,
    pub holds: bool,
    pub detail: String,
    pub witness: Option<VerdictWitness>,
}

/// Shape memberships of the chain induced by the pair; both are reported
/// since a one-state chain is trivially both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainMembership {
    pub sit: bool,
    pub identity: bool,
}

/// Discount-rate threshold of a continuous-time certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RateThreshold {
    Finite(Rational),
    /// Every `α > 0` is covered (the discrete threshold is 0).
    Unbounded,
}

impl RateThreshold {
    /// `α₀ = ‖μ‖(1 - β₀)/β₀`.
    pub fn from_beta(beta0: &Rational, norm: &Rational) -> Self {
        if beta0.is_zero() {
            RateThreshold::Unbounded
        } else {
            RateThreshold::Finite(norm * (Rational::one() - beta0) / beta0)
        }
    }

    pub fn min(self, other: RateThreshold) -> RateThreshold {
        match (self, other) {
            (RateThreshold::Unbounded, x) | (x, RateThreshold::Unbounded) => x,
            (RateThreshold::Finite(a), RateThreshold::Finite(b)) => RateThreshold::Finite(a.min(b)),
        }
    }

    /// `true` when `alpha` lies in `(0, α₀]`.
    pub fn covers(&self, alpha: &Rational) -> bool {
        alpha.is_positive()
            && match self {
                RateThreshold::Unbounded => true,
                RateThreshold::Finite(a0) => alpha <= a0,
            }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificationReport {
    pub condition_set: ConditionSet,
    pub f: PureStrategy,
    pub g: PureStrategy,
    /// `β̂` (discrete) or `α̂` (continuous) at which the first condition was
    /// checked.
    pub reference: Rational,
    pub verdicts: Vec<ConditionVerdict>,
    pub bounds: Vec<BoundEntry>,
    pub chain: ChainMembership,
    pub certified: bool,
    /// `β₀`, set when certified.
    pub beta0: Option<Rational>,
    /// `β₀¹, β₀²`, set when certified.
    pub player_beta0: Option<[Rational; 2]>,
    /// `α₀`, set for certified continuous-time reports.
    pub alpha0: Option<RateThreshold>,
    /// `α₀¹, α₀²`, set for certified continuous-time reports.
    pub player_alpha0: Option<[RateThreshold; 2]>,
    pub notes: Vec<String>,
}

impl CertificationReport {
    pub fn verdict(&self, condition: &str) -> Option<&ConditionVerdict> {
        self.verdicts.iter().find(|v| v.condition == condition)
    }
}

/// Per-player thresholds `β₀ⁱ = max{0, defined bounds of player i}` and
/// their maximum.
#[derive(Clone, Debug, PartialEq)]
pub struct Beta0 {
    pub threshold: Rational,
    pub per_player: [Rational; 2],
    pub bounds: Vec<BoundEntry>,
}

/// Bounds for every non-equilibrium action of `(f, g)`, evaluated on a
/// discrete table (the game itself, or the uniformized one for `M`/`N`).
///
/// `sit_row` selects the reference: `Some(p)` compares with the
/// state-independent next-step law `p`; `None` compares with the deviating
/// state's own reward (all-absorbing chain).
pub(crate) fn deviation_bounds(
    game: &GameTables,
    f: &PureStrategy,
    g: &PureStrategy,
    sit_row: Option<&[Rational]>,
) -> Vec<BoundEntry> {
    let n = game.state_count();
    let eq_cell = |s: usize| (f.action(s), g.action(s));
    let mut out = Vec::new();
    for player in Player::BOTH {
        let w: Vec<Rational> = (0..n)
            .map(|s| {
                let (a1, a2) = eq_cell(s);
                game.reward(player, s, a1, a2).clone()
            })
            .collect();
        let reference = sit_row.map(|p| p.iter().zip(&w).map(|(a, b)| a * b).sum::<Rational>());
        for s in 0..n {
            let (e1, e2) = eq_cell(s);
            let own = match player {
                Player::One => e1,
                Player::Two => e2,
            };
            for a in 0..game.action_count(player, s) {
                if a == own {
                    continue;
                }
                let (a1, a2) = match player {
                    Player::One => (a, e2),
                    Player::Two => (e1, a),
                };
                let r_dev = game.reward(player, s, a1, a2);
                let next: Rational = game.law(s, a1, a2).iter().zip(&w).map(|(p, x)| p * x).sum();
                let numerator = r_dev - &w[s];
                let denominator = match &reference {
                    Some(e) => e - &next,
                    None => r_dev - &next,
                };
                out.push(BoundEntry::new(player, s, a, numerator, denominator));
            }
        }
    }
    out
}

/// Third-condition verdict: every denominator nonnegative.
pub(crate) fn inequality_verdict(set: ConditionSet, bounds: &[BoundEntry]) -> ConditionVerdict {
    let failing = bounds.iter().find(|b| b.denominator.is_negative());
    ConditionVerdict {
        condition: set.label(3),
        holds: failing.is_none(),
        detail: match failing {
            None => format!("all {} deviation inequalities hold", bounds.len()),
            Some(b) => format!(
                "{} at state {}, action {}: next-step reference falls short by {}",
                b.player,
                b.state,
                b.action,
                crate::numerics::format_rational(&-b.denominator.clone())
            ),
        },
        witness: failing.map(|b| VerdictWitness::Inequality {
            player: b.player,
            state: b.state,
            action: b.action,
            slack: b.denominator.clone(),
        }),
    }
}

/// Folds bounds into `β₀`. Errors on a deviation that is profitable for
/// every discount factor, or when the third condition fails.
pub(crate) fn fold_bounds(set: ConditionSet, bounds: Vec<BoundEntry>) -> Result<Beta0, CertificationError> {
    let mut per_player = [Rational::zero(), Rational::zero()];
    for b in &bounds {
        match &b.bound {
            Bound::Threshold(x) => {
                let slot = &mut per_player[b.player.index()];
                if x > slot {
                    *slot = x.clone();
                }
            }
            Bound::BetaIndependent | Bound::Undefined => {}
            Bound::Reversed(_) => {
                return Err(CertificationError::ConditionsNotMet {
                    condition: set.label(3),
                    reason: format!(
                        "{} deviation at state {} with action {} has negative denominator",
                        b.player, b.state, b.action
                    ),
                })
            }
            Bound::AlwaysProfitable => {
                return Err(CertificationError::InvalidCertificate {
                    player: b.player,
                    state: b.state,
                    action: b.action,
                    surplus: b.numerator.clone(),
                })
            }
        }
    }
    let threshold = per_player[0].clone().max(per_player[1].clone());
    Ok(Beta0 {
        threshold,
        per_player,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    #[test]
    fn bound_classification() {
        let e = |n, d| BoundEntry::new(Player::One, 0, 1, int(n), int(d)).bound;
        assert_eq!(e(3, 5), Bound::Threshold(rat(3, 5)));
        assert_eq!(e(-1, 2), Bound::Threshold(rat(-1, 2)));
        assert_eq!(e(0, 0), Bound::BetaIndependent);
        assert_eq!(e(-1, 0), Bound::Undefined);
        assert_eq!(e(1, 0), Bound::AlwaysProfitable);
        assert_eq!(e(1, -2), Bound::Reversed(rat(-1, 2)));
    }

    #[test]
    fn theta_changes_sign_at_bound() {
        let entry = BoundEntry::new(Player::Two, 0, 1, rat(3, 5), int(1));
        for set in [ConditionSet::C, ConditionSet::D] {
            let theta = entry.theta(set);
            assert_eq!(theta.eval(&rat(3, 5)), Some(int(0)));
            assert!(theta.eval(&rat(1, 2)).unwrap() > int(0));
            assert!(theta.eval(&rat(7, 10)).unwrap() < int(0));
        }
    }

    #[test]
    fn rate_threshold_conversion() {
        assert_eq!(RateThreshold::from_beta(&rat(2, 3), &int(1)), RateThreshold::Finite(rat(1, 2)));
        assert_eq!(RateThreshold::from_beta(&int(0), &int(1)), RateThreshold::Unbounded);
        let m = RateThreshold::Finite(int(1)).min(RateThreshold::Finite(rat(2, 3)));
        assert_eq!(m, RateThreshold::Finite(rat(2, 3)));
        assert_eq!(RateThreshold::Unbounded.min(m.clone()), m);
        assert!(m.covers(&rat(2, 3)) && !m.covers(&int(1)) && !m.covers(&int(0)));
    }
}
