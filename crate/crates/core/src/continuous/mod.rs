//! Continuous-time games: rate norms, uniformization, resolvent values, Nash
//! checks and Blackwell-Nash certification through the uniformized chain.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::blackwell::{
    certify_table, sc_ar_on_table, CertificationError, CertificationReport, ConditionSet, RateThreshold, ScArOutcome,
};
use crate::equilibrium::{best_response_mdp, verify_nash, EquilibriumError, NashReport};
use crate::game::{induced_rate_matrix, GameError, GameTables, Player, PureStrategy, StateTable, StationaryStrategy};
use crate::mdp::{Mdp, MdpError, Policy};
use crate::numerics::{
    format_rational, solve_linear_within, DenseMatrix, Field, OrderedField, Rational, DEFAULT_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContinuousError {
    #[error("all transition rates are zero; uniformization is undefined")]
    ZeroRates,
    #[error("discount rate must be positive, got {0}")]
    InvalidRate(String),
    #[error("invalid rates: {0}")]
    InvalidRates(String),
    #[error("condition set {0} is not a continuous-time family")]
    UnsupportedSet(ConditionSet),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}

/// Continuous-time MDP: `rewards[s][a]` and `rates[s][a][s']`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ctmdp<T> {
    inner: Mdp<T>,
}

impl<T: OrderedField> Ctmdp<T> {
    /// Checks shapes, nonnegative off-diagonal rates and zero row sums.
    pub fn new(rewards: Vec<Vec<T>>, rates: Vec<Vec<Vec<T>>>) -> Result<Self, ContinuousError> {
        let inner = Mdp::new(rewards, rates)?;
        for s in 0..inner.state_count() {
            for a in 0..inner.action_count(s) {
                let row = inner.transition(s, a);
                if let Some(t) = (0..row.len()).find(|&t| t != s && (-row[t].clone()).exceeds(DEFAULT_TOLERANCE)) {
                    return Err(ContinuousError::InvalidRates(format!(
                        "state {s}, action {a}: negative rate into state {t}"
                    )));
                }
                let sum = row.iter().cloned().fold(T::zero(), |x, y| x + y);
                if !sum.is_zero_within(DEFAULT_TOLERANCE) {
                    return Err(ContinuousError::InvalidRates(format!(
                        "state {s}, action {a}: rates sum to {sum:?}"
                    )));
                }
            }
        }
        Ok(Ctmdp { inner })
    }

    /// `‖μ‖`, the largest total exit rate.
    pub fn mu_norm(&self) -> Result<T, ContinuousError> {
        let mut norm = T::zero();
        for s in 0..self.state_count() {
            for a in 0..self.action_count(s) {
                norm = T::max_of(norm, exit_rate(self.rate(s, a), s));
            }
        }
        if norm.is_zero_within(DEFAULT_TOLERANCE) {
            return Err(ContinuousError::ZeroRates);
        }
        Ok(norm)
    }
}

impl<T: Field> Ctmdp<T> {
    pub fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    pub fn action_count(&self, s: usize) -> usize {
        self.inner.action_count(s)
    }

    pub fn reward(&self, s: usize, a: usize) -> &T {
        self.inner.reward(s, a)
    }

    pub fn rate(&self, s: usize, a: usize) -> &[T] {
        self.inner.transition(s, a)
    }

    /// `(Q_d, r_d)` for a policy.
    pub fn induced(&self, policy: &Policy<T>) -> Result<(DenseMatrix<T>, Vec<T>), ContinuousError> {
        Ok(self.inner.induced(policy)?)
    }
}

fn exit_rate<T: Field>(row: &[T], s: usize) -> T {
    row.iter()
        .enumerate()
        .filter(|&(t, _)| t != s)
        .fold(T::zero(), |acc, (_, x)| acc + x.clone())
}

/// `‖μ‖` of a game: the largest exit rate over all states and action pairs.
pub fn mu_norm(game: &GameTables) -> Result<Rational, ContinuousError> {
    let mut norm = Rational::zero();
    for s in 0..game.state_count() {
        let [n1, n2] = game.states[s].action_counts();
        for a1 in 0..n1 {
            for a2 in 0..n2 {
                let e = exit_rate(game.law(s, a1, a2), s);
                if e > norm {
                    norm = e;
                }
            }
        }
    }
    if norm.is_zero() {
        return Err(ContinuousError::ZeroRates);
    }
    Ok(norm)
}

/// `β = ‖μ‖ / (α + ‖μ‖)`.
pub fn beta_from_alpha<T: Field>(alpha: &T, norm: &T) -> T {
    norm.clone() / (alpha.clone() + norm.clone())
}

/// `α = ‖μ‖ (1 - β) / β`, for `β > 0`.
pub fn alpha_from_beta<T: Field>(beta: &T, norm: &T) -> T {
    norm.clone() * (T::one() - beta.clone()) / beta.clone()
}

fn check_alpha<T: OrderedField>(alpha: &T) -> Result<(), ContinuousError> {
    if !alpha.exceeds(0.0) {
        return Err(ContinuousError::InvalidRate(format!("{alpha:?}")));
    }
    Ok(())
}

/// A continuous-time MDP turned into an equivalent discrete one.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformizationResult<T> {
    /// Rewards `r / (‖μ‖ + α)`, transitions `μ / ‖μ‖ + δ`.
    pub dtmdp: Mdp<T>,
    pub beta: T,
    pub norm: T,
    pub alpha: T,
}

/// Uniformizes at the process's own `‖μ‖`.
pub fn uniformize<T: OrderedField>(ctmdp: &Ctmdp<T>, alpha: &T) -> Result<UniformizationResult<T>, ContinuousError> {
    let norm = ctmdp.mu_norm()?;
    uniformize_at(ctmdp, alpha, &norm)
}

/// Uniformizes at a caller-chosen norm, which must dominate every exit rate.
pub fn uniformize_at<T: OrderedField>(
    ctmdp: &Ctmdp<T>,
    alpha: &T,
    norm: &T,
) -> Result<UniformizationResult<T>, ContinuousError> {
    check_alpha(alpha)?;
    if !norm.exceeds(0.0) {
        return Err(ContinuousError::ZeroRates);
    }
    let n = ctmdp.state_count();
    let scale = norm.clone() + alpha.clone();
    let mut rewards = Vec::with_capacity(n);
    let mut transitions = Vec::with_capacity(n);
    for s in 0..n {
        let mut rs = Vec::new();
        let mut ps = Vec::new();
        for a in 0..ctmdp.action_count(s) {
            if exit_rate(ctmdp.rate(s, a), s).cmp_within(norm, DEFAULT_TOLERANCE) == std::cmp::Ordering::Greater {
                return Err(ContinuousError::InvalidRates(format!(
                    "state {s}, action {a}: exit rate exceeds the uniformization norm"
                )));
            }
            rs.push(ctmdp.reward(s, a).clone() / scale.clone());
            ps.push(uniform_row(ctmdp.rate(s, a), s, norm));
        }
        rewards.push(rs);
        transitions.push(ps);
    }
    Ok(UniformizationResult {
        dtmdp: Mdp::new(rewards, transitions)?,
        beta: beta_from_alpha(alpha, norm),
        norm: norm.clone(),
        alpha: alpha.clone(),
    })
}

fn uniform_row<T: Field>(rates: &[T], s: usize, norm: &T) -> Vec<T> {
    rates
        .iter()
        .enumerate()
        .map(|(t, x)| {
            let p = x.clone() / norm.clone();
            if t == s {
                p + T::one()
            } else {
                p
            }
        })
        .collect()
}

/// `v = (αI - Q_d)^{-1} r_d`, without uniformizing.
pub fn ct_policy_value<T: Field>(ctmdp: &Ctmdp<T>, policy: &Policy<T>, alpha: &T) -> Result<Vec<T>, ContinuousError> {
    ct_policy_value_within(ctmdp, policy, alpha, DEFAULT_TOLERANCE)
}

pub fn ct_policy_value_within<T: Field>(
    ctmdp: &Ctmdp<T>,
    policy: &Policy<T>,
    alpha: &T,
    tol: f64,
) -> Result<Vec<T>, ContinuousError> {
    let (q, r) = ctmdp.induced(policy)?;
    let system = DenseMatrix::identity(q.rows()).scale(alpha).sub(&q);
    Ok(solve_linear_within(&system, &r, tol).map_err(MdpError::from)?)
}

/// The continuous-time process `player` faces when the opponent plays
/// `opponent`.
pub fn best_response_ctmdp<T: Field>(
    game: &GameTables,
    opponent: &StationaryStrategy<T>,
    player: Player,
) -> Result<Ctmdp<T>, ContinuousError> {
    let mdp = best_response_mdp(game, opponent, player)?;
    Ok(Ctmdp { inner: mdp })
}

/// The discrete game with transitions `μ / ‖μ‖ + δ` and unscaled rewards.
pub fn uniformized_tables(game: &GameTables, norm: &Rational) -> GameTables {
    GameTables {
        states: game
            .states
            .iter()
            .enumerate()
            .map(|(s, st)| StateTable {
                rewards: st.rewards.clone(),
                law: st
                    .law
                    .iter()
                    .map(|row| row.iter().map(|rates| uniform_row(rates, s, norm)).collect())
                    .collect(),
            })
            .collect(),
    }
}

/// A continuous game uniformized at one discount rate, rewards included.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformizedGame {
    /// Rewards `r / (‖μ‖ + α)`, transitions `μ / ‖μ‖ + δ`.
    pub tables: GameTables,
    pub beta: Rational,
    pub norm: Rational,
    pub alpha: Rational,
}

/// Uniformizes a whole game with the shared norm `‖μ‖`; discounted values
/// of the result at `beta` equal the continuous-time values at `alpha`.
pub fn uniformized_game(game: &GameTables, alpha: &Rational) -> Result<UniformizedGame, ContinuousError> {
    check_alpha(alpha)?;
    let norm = mu_norm(game)?;
    let scale = &norm + alpha;
    let mut tables = uniformized_tables(game, &norm);
    for st in &mut tables.states {
        for table in &mut st.rewards {
            for row in table.iter_mut() {
                for x in row.iter_mut() {
                    *x = &*x / &scale;
                }
            }
        }
    }
    Ok(UniformizedGame {
        tables,
        beta: beta_from_alpha(alpha, &norm),
        norm,
        alpha: alpha.clone(),
    })
}

/// A continuous-time Nash check carried out on the uniformized game.
#[derive(Clone, Debug, PartialEq)]
pub struct CtNashReport<T> {
    /// Values, gaps and residuals in continuous-time units, which equal
    /// those of the uniformized game with rewards `r / (‖μ‖ + α)`.
    pub report: NashReport<T>,
    pub beta: T,
    pub norm: Rational,
    /// `1 / (‖μ‖ + α)`: unscaled uniformized quantities times this factor.
    pub scale: T,
}

/// `α`-discounted Nash check of a continuous game.
pub fn verify_nash_ct<T: OrderedField>(
    game: &GameTables,
    f: &StationaryStrategy<T>,
    g: &StationaryStrategy<T>,
    alpha: &T,
    tol: f64,
) -> Result<CtNashReport<T>, ContinuousError> {
    check_alpha(alpha)?;
    let norm = mu_norm(game)?;
    let table = uniformized_tables(game, &norm);
    let norm_t = T::from_rational(&norm);
    let beta = beta_from_alpha(alpha, &norm_t);
    let denom = norm_t + alpha.clone();
    let scale = T::one() / denom.clone();
    let inner_tol = tol * denom.to_f64().max(1.0);
    let raw = verify_nash(&table, f, g, &beta, inner_tol)?;
    let rescale = |v: Vec<T>| -> Vec<T> { v.into_iter().map(|x| x * scale.clone()).collect() };
    let [v1, v2] = raw.values;
    let [g1, g2] = raw.gaps;
    let [s1, s2] = raw.support_residuals;
    let report = NashReport {
        is_nash: raw.is_nash,
        values: [rescale(v1), rescale(v2)],
        gaps: [rescale(g1), rescale(g2)],
        support_residuals: [rescale(s1), rescale(s2)],
        witness: raw.witness.map(|mut d| {
            d.gain = d.gain * scale.clone();
            d
        }),
    };
    Ok(CtNashReport {
        report,
        beta,
        norm,
        scale,
    })
}

/// Blackwell-Nash pair of a continuous single-controller additive-reward
/// game, with `α₀ = ‖μ‖ (1 - β₀) / β₀`.
///
/// Player 2's Blackwell-optimal reply is computed on the transitions
/// `μ / ‖μ‖ + δ` with unscaled rewards; the positive reward scaling of each
/// uniformized process does not change which policy is optimal.
pub fn sc_ar_bne_ct(game: &GameTables) -> Result<ScArOutcome, CertificationError> {
    let norm = mu_norm(game)?;
    let mut out = sc_ar_on_table(&uniformized_tables(game, &norm))?;
    out.alpha0 = Some(RateThreshold::from_beta(&out.beta0, &norm));
    out.norm = Some(norm);
    Ok(out)
}

/// Conditions M1 to M3 or N1 to N3 for a pure pair, with the first checked
/// at `alpha_hat`.
pub fn certify_bne_ct(
    game: &GameTables,
    f: &PureStrategy,
    g: &PureStrategy,
    alpha_hat: &Rational,
    set: ConditionSet,
) -> Result<CertificationReport, CertificationError> {
    if !set.is_continuous() {
        return Err(ContinuousError::UnsupportedSet(set).into());
    }
    check_alpha(alpha_hat)?;
    let norm = mu_norm(game)?;
    let table = uniformized_tables(game, &norm);
    let beta_hat = beta_from_alpha(alpha_hat, &norm);
    let mut report = certify_table(set, &table, f, g, &beta_hat)?;
    report.reference = alpha_hat.clone();
    report.notes.push(format!(
        "‖μ‖ = {}; discount rate {} corresponds to β = {}",
        format_rational(&norm),
        format_rational(alpha_hat),
        format_rational(&beta_hat)
    ));
    if set == ConditionSet::M && !report.chain.sit {
        let fs = f.for_player::<Rational>(game, Player::One);
        let gs = g.for_player::<Rational>(game, Player::Two);
        let q = induced_rate_matrix(game, &fs, &gs)?;
        if let Some(c) = sit_generator_scale(&q) {
            report.notes.push(format!(
                "rate matrix equals c·(S - I) with c = {} instead of ‖μ‖ = {}",
                format_rational(&c),
                format_rational(&norm)
            ));
        }
    }
    if let (Some(b0), Some([b1, b2])) = (report.beta0.clone(), report.player_beta0.clone()) {
        let a1 = RateThreshold::from_beta(&b1, &norm);
        let a2 = RateThreshold::from_beta(&b2, &norm);
        report.alpha0 = Some(RateThreshold::from_beta(&b0, &norm));
        report.player_alpha0 = Some([a1, a2]);
    }
    Ok(report)
}

/// The positive `c` with `Q = c (S - I)` for a matrix `S` of identical
/// stochastic rows, if one exists.
fn sit_generator_scale(q: &DenseMatrix<Rational>) -> Option<Rational> {
    let n = q.rows();
    if n < 2 {
        return None;
    }
    let c = q.get(1, 0) - q.get(0, 0);
    if !c.is_positive() {
        return None;
    }
    for j in 0..n {
        let other = if j == 0 { 1 } else { 0 };
        let x = q.get(other, j);
        if (0..n).any(|i| i != j && q.get(i, j) != x) || x - q.get(j, j) != c {
            return None;
        }
    }
    Some(c)
}
