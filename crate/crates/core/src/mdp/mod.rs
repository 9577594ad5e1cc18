//! Single-controller decision processes: fixed-policy values, discounted
//! optimal policies by policy iteration, Blackwell-optimal policies by
//! symbolic enumeration, Cesàro limits and average values.

mod cesaro;
mod optimal;
mod sensitive;

use thiserror::Error;

use crate::game::{PureStrategy, StationaryStrategy};
use crate::numerics::{
    resolvent_inverse, solve_linear_within, DenseMatrix, Field, NumericsError, Rational,
    RationalFunction, DEFAULT_TOLERANCE,
};

pub use cesaro::{cesaro_limit, cesaro_limit_within};
pub use optimal::{optimal_policy, optimal_policy_within, q_values, OptimalPolicy};
pub use sensitive::{
    blackwell_optimal, blackwell_optimal_with_cap, BlackwellCertificate, BlackwellResult,
    PolicyComparison, DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MdpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("{count} deterministic policies exceed the enumeration cap of {cap}")]
    EnumerationCapExceeded { count: u128, cap: u128 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Finite MDP: `rewards[s][a]` and `transitions[s][a][s']`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mdp<T> {
    rewards: Vec<Vec<T>>,
    transitions: Vec<Vec<Vec<T>>>,
}

impl<T: Field> Mdp<T> {
    /// Checks shapes only; stochasticity of the rows is the caller's
    /// responsibility.
    pub fn new(rewards: Vec<Vec<T>>, transitions: Vec<Vec<Vec<T>>>) -> Result<Self, MdpError> {
        let n = rewards.len();
        if transitions.len() != n {
            return Err(MdpError::DimensionMismatch(format!(
                "{n} reward rows but {} transition rows",
                transitions.len()
            )));
        }
        for (s, (r, p)) in rewards.iter().zip(&transitions).enumerate() {
            if r.is_empty() {
                return Err(MdpError::DimensionMismatch(format!("state {s} has no actions")));
            }
            if r.len() != p.len() {
                return Err(MdpError::DimensionMismatch(format!(
                    "state {s}: {} rewards but {} transition rows",
                    r.len(),
                    p.len()
                )));
            }
            if let Some(a) = p.iter().position(|row| row.len() != n) {
                return Err(MdpError::DimensionMismatch(format!(
                    "state {s}, action {a}: transition row over {} states, expected {n}",
                    p[a].len()
                )));
            }
        }
        Ok(Mdp { rewards, transitions })
    }

    pub fn state_count(&self) -> usize {
        self.rewards.len()
    }

    pub fn action_count(&self, s: usize) -> usize {
        self.rewards[s].len()
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.rewards.iter().map(Vec::len).collect()
    }

    pub fn reward(&self, s: usize, a: usize) -> &T {
        &self.rewards[s][a]
    }

    pub fn rewards(&self) -> &[Vec<T>] {
        &self.rewards
    }

    pub fn transition(&self, s: usize, a: usize) -> &[T] {
        &self.transitions[s][a]
    }

    pub fn transitions(&self) -> &[Vec<Vec<T>>] {
        &self.transitions
    }

    /// Number of deterministic stationary policies.
    pub fn policy_count(&self) -> u128 {
        self.rewards.iter().map(|r| r.len() as u128).product()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Mdp<U> {
        Mdp {
            rewards: self.rewards.iter().map(|r| r.iter().map(&f).collect()).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|p| p.iter().map(|row| row.iter().map(&f).collect()).collect())
                .collect(),
        }
    }

    /// Same transitions, rewards replaced.
    pub fn with_rewards(&self, rewards: Vec<Vec<T>>) -> Result<Self, MdpError> {
        Mdp::new(rewards, self.transitions.clone())
    }

    /// `(P_d, r_d)` for a policy.
    pub fn induced(&self, policy: &Policy<T>) -> Result<(DenseMatrix<T>, Vec<T>), MdpError> {
        policy.check(self)?;
        let n = self.state_count();
        let mut rows = Vec::with_capacity(n);
        let mut r = Vec::with_capacity(n);
        for s in 0..n {
            let weights = policy.weights(s, self.action_count(s));
            let mut row = vec![T::zero(); n];
            let mut reward = T::zero();
            for (a, w) in weights.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                reward = reward + w.clone() * self.rewards[s][a].clone();
                for (t, p) in self.transitions[s][a].iter().enumerate() {
                    row[t] = row[t].clone() + w.clone() * p.clone();
                }
            }
            rows.push(row);
            r.push(reward);
        }
        Ok((DenseMatrix::from_rows(rows), r))
    }
}

/// A stationary policy of an [`Mdp`].
#[derive(Clone, Debug, PartialEq)]
pub enum Policy<T> {
    Deterministic(PureStrategy),
    Randomized(StationaryStrategy<T>),
}

impl<T: Field> Policy<T> {
    pub fn deterministic(actions: Vec<usize>) -> Self {
        Policy::Deterministic(PureStrategy::new(actions))
    }

    fn weights(&self, s: usize, n: usize) -> Vec<T> {
        match self {
            Policy::Deterministic(p) => (0..n)
                .map(|a| if a == p.action(s) { T::one() } else { T::zero() })
                .collect(),
            Policy::Randomized(f) => f.row(s).to_vec(),
        }
    }

    fn check(&self, mdp: &Mdp<T>) -> Result<(), MdpError> {
        let counts = mdp.action_counts();
        let (len, bad) = match self {
            Policy::Deterministic(p) => (
                p.actions().len(),
                p.actions()
                    .iter()
                    .zip(&counts)
                    .position(|(&a, &n)| a >= n),
            ),
            Policy::Randomized(f) => (
                f.state_count(),
                f.rows().iter().zip(&counts).position(|(r, &n)| r.len() != n),
            ),
        };
        if len != counts.len() {
            return Err(MdpError::DimensionMismatch(format!(
                "policy over {len} states, MDP has {}",
                counts.len()
            )));
        }
        match bad {
            Some(s) => Err(MdpError::InvalidPolicy(format!("does not fit the actions of state {s}"))),
            None => Ok(()),
        }
    }
}

/// `v = (I - βP_d)^{-1} r_d`.
pub fn policy_value<T: Field>(mdp: &Mdp<T>, policy: &Policy<T>, beta: &T) -> Result<Vec<T>, MdpError> {
    policy_value_within(mdp, policy, beta, DEFAULT_TOLERANCE)
}

pub fn policy_value_within<T: Field>(
    mdp: &Mdp<T>,
    policy: &Policy<T>,
    beta: &T,
    tol: f64,
) -> Result<Vec<T>, MdpError> {
    let (p, r) = mdp.induced(policy)?;
    let n = p.rows();
    let system = DenseMatrix::identity(n).sub(&p.scale(beta));
    Ok(solve_linear_within(&system, &r, tol)?)
}

/// Exact value as rational functions of β.
pub fn policy_value_symbolic(
    mdp: &Mdp<Rational>,
    policy: &Policy<Rational>,
) -> Result<Vec<RationalFunction>, MdpError> {
    let (p, r) = mdp.induced(policy)?;
    let resolvent = resolvent_inverse(&p)?;
    let r: Vec<RationalFunction> = r.into_iter().map(RationalFunction::constant).collect();
    Ok(resolvent.mul_vec(&r))
}

/// `P*_d r_d`, the long-run average reward per state.
pub fn average_value<T: Field>(mdp: &Mdp<T>, policy: &Policy<T>) -> Result<Vec<T>, MdpError> {
    let (p, r) = mdp.induced(policy)?;
    Ok(cesaro_limit(&p)?.mul_vec(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat, Polynomial};

    pub(super) fn two_state(rewards: [[i64; 2]; 2], stay: bool) -> Mdp<Rational> {
        let rw = rewards.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let go = |t: usize| if t == 0 { vec![int(1), int(0)] } else { vec![int(0), int(1)] };
        let tr = if stay {
            vec![vec![go(0), go(1)], vec![go(1), go(0)]]
        } else {
            vec![vec![go(1), go(0)], vec![go(0), go(1)]]
        };
        Mdp::new(rw, tr).unwrap()
    }

    #[test]
    fn zero_discount_value_is_reward() {
        let m = two_state([[3, 1], [2, 5]], true);
        let v = policy_value(&m, &Policy::deterministic(vec![0, 1]), &int(0)).unwrap();
        assert_eq!(v, vec![int(3), int(5)]);
    }

    #[test]
    fn symbolic_value_of_identity_chain() {
        let m = two_state([[3, 1], [2, 5]], true);
        let v = policy_value_symbolic(&m, &Policy::deterministic(vec![0, 0])).unwrap();
        let one_minus = Polynomial::from_i64s(&[1, -1]);
        assert_eq!(v[0], RationalFunction::new(Polynomial::from_i64s(&[3]), one_minus.clone()));
        assert_eq!(v[1], RationalFunction::new(Polynomial::from_i64s(&[2]), one_minus));
        let numeric = policy_value(&m, &Policy::deterministic(vec![0, 0]), &rat(1, 2)).unwrap();
        assert_eq!(v[0].eval(&rat(1, 2)).unwrap(), numeric[0]);
    }

    #[test]
    fn randomized_policy_mixes_rows() {
        let m = two_state([[2, 4], [0, 0]], true);
        let f = StationaryStrategy::new(vec![vec![rat(1, 2), rat(1, 2)], vec![int(1), int(0)]]);
        let (p, r) = m.induced(&Policy::Randomized(f)).unwrap();
        assert_eq!(r, vec![int(3), int(0)]);
        assert_eq!(p.row(0), &[rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn bad_shapes_are_rejected() {
        assert!(Mdp::new(vec![vec![int(1)]], vec![vec![vec![int(1), int(0)]]]).is_err());
        let m = two_state([[0, 0], [0, 0]], true);
        assert!(matches!(
            m.induced(&Policy::deterministic(vec![0, 2])),
            Err(MdpError::InvalidPolicy(_))
        ));
    }
}
