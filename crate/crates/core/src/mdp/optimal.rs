use std::cmp::Ordering;

use super::{policy_value_within, Mdp, MdpError, Policy};
use crate::game::PureStrategy;
use crate::numerics::{OrderedField, DEFAULT_TOLERANCE};

/// Result of policy iteration at a fixed discount factor.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalPolicy<T> {
    pub policy: PureStrategy,
    pub value: Vec<T>,
    /// Per state, every action whose one-step lookahead attains the optimum
    /// (within tolerance).
    pub optimal_actions: Vec<Vec<usize>>,
    pub iterations: usize,
}

/// `r(s,a) + β Σ p(s'|s,a) v(s')` for every state and action.
pub fn q_values<T: OrderedField>(mdp: &Mdp<T>, beta: &T, v: &[T]) -> Vec<Vec<T>> {
    (0..mdp.state_count())
        .map(|s| {
            (0..mdp.action_count(s))
                .map(|a| {
                    let next = mdp
                        .transition(s, a)
                        .iter()
                        .zip(v)
                        .fold(T::zero(), |acc, (p, x)| acc + p.clone() * x.clone());
                    mdp.reward(s, a).clone() + beta.clone() * next
                })
                .collect()
        })
        .collect()
}

/// Howard policy iteration from the all-zeros policy.
pub fn optimal_policy<T: OrderedField>(mdp: &Mdp<T>, beta: &T) -> Result<OptimalPolicy<T>, MdpError> {
    optimal_policy_within(mdp, beta, DEFAULT_TOLERANCE)
}

/// Policy iteration; an action replaces the incumbent only when it improves
/// by more than `tol`, and among improving actions the lowest index wins.
pub fn optimal_policy_within<T: OrderedField>(
    mdp: &Mdp<T>,
    beta: &T,
    tol: f64,
) -> Result<OptimalPolicy<T>, MdpError> {
    let n = mdp.state_count();
    let mut actions = vec![0usize; n];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let policy = Policy::deterministic(actions.clone());
        let value = policy_value_within(mdp, &policy, beta, tol)?;
        let q = q_values(mdp, beta, &value);
        let mut changed = false;
        for s in 0..n {
            let best = q[s].iter().cloned().reduce(T::max_of).expect("nonempty action set");
            if best.cmp_within(&q[s][actions[s]], tol) == Ordering::Greater {
                actions[s] = q[s]
                    .iter()
                    .position(|x| x.cmp_within(&best, tol) == Ordering::Equal)
                    .expect("maximum is attained");
                changed = true;
            }
        }
        if !changed {
            let optimal_actions = q
                .iter()
                .map(|row| {
                    let best = row.iter().cloned().reduce(T::max_of).expect("nonempty");
                    (0..row.len())
                        .filter(|&a| row[a].cmp_within(&best, tol) == Ordering::Equal)
                        .collect()
                })
                .collect();
            return Ok(OptimalPolicy {
                policy: PureStrategy::new(actions),
                value,
                optimal_actions,
                iterations,
            });
        }
    }
}
