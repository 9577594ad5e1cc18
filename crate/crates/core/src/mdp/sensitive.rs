use std::cmp::Ordering;

use num_traits::Zero;

use super::{policy_value_symbolic, Mdp, MdpError, Policy};
use crate::game::PureStrategy;
use crate::numerics::{compare_near_limit, largest_root_below_one, Rational, RationalFunction};

pub const DEFAULT_ENUMERATION_CAP: u128 = 4096;

/// How the returned policy's value compares with another policy's, per
/// state, as germs at `β -> 1-`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyComparison {
    pub policy: PureStrategy,
    pub per_state: Vec<Ordering>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlackwellCertificate {
    /// One entry per enumerated policy other than the winner.
    pub comparisons: Vec<PolicyComparison>,
    /// Other policies with identical symbolic values.
    pub equivalent: Vec<PureStrategy>,
    /// The winner is discount-optimal for every `β` in `[threshold, 1)`.
    pub threshold: Rational,
    /// `false` when `threshold` is a rational upper bound on an irrational
    /// root.
    pub threshold_exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlackwellResult {
    pub policy: PureStrategy,
    pub value: Vec<RationalFunction>,
    pub certificate: BlackwellCertificate,
}

pub fn blackwell_optimal(mdp: &Mdp<Rational>) -> Result<BlackwellResult, MdpError> {
    blackwell_optimal_with_cap(mdp, DEFAULT_ENUMERATION_CAP)
}

/// Enumerates deterministic policies, keeps the first (in lexicographic
/// order) whose symbolic value dominates every other near `β = 1`.
pub fn blackwell_optimal_with_cap(mdp: &Mdp<Rational>, cap: u128) -> Result<BlackwellResult, MdpError> {
    let count = mdp.policy_count();
    if count > cap {
        return Err(MdpError::EnumerationCapExceeded { count, cap });
    }
    let counts = mdp.action_counts();
    let candidates = PureStrategy::enumerate(&counts)
        .map(|d| {
            let v = policy_value_symbolic(mdp, &Policy::Deterministic(d.clone()))?;
            Ok((d, v))
        })
        .collect::<Result<Vec<_>, MdpError>>()?;

    let n = mdp.state_count();
    let best: Vec<&RationalFunction> = (0..n)
        .map(|s| {
            candidates
                .iter()
                .map(|(_, v)| &v[s])
                .reduce(|a, b| if compare_near_limit(b, a) == Ordering::Greater { b } else { a })
                .expect("at least one policy")
        })
        .collect();
    let winner = candidates
        .iter()
        .position(|(_, v)| (0..n).all(|s| compare_near_limit(&v[s], best[s]) == Ordering::Equal))
        .expect("a Blackwell-optimal deterministic policy exists for finite MDPs");
    let (policy, value) = candidates[winner].clone();

    let mut comparisons = Vec::with_capacity(candidates.len() - 1);
    let mut equivalent = Vec::new();
    for (i, (d, v)) in candidates.iter().enumerate() {
        if i == winner {
            continue;
        }
        let per_state: Vec<Ordering> = (0..n).map(|s| compare_near_limit(&value[s], &v[s])).collect();
        if per_state.iter().all(|o| *o == Ordering::Equal) {
            equivalent.push(d.clone());
        }
        comparisons.push(PolicyComparison {
            policy: d.clone(),
            per_state,
        });
    }

    let (threshold, threshold_exact) = optimality_threshold(mdp, &value);
    Ok(BlackwellResult {
        policy,
        value,
        certificate: BlackwellCertificate {
            comparisons,
            equivalent,
            threshold,
            threshold_exact,
        },
    })
}

/// Largest root in `(0, 1)` over all Bellman surpluses
/// `r(s,a) + β Σ p(s'|s,a) v(s') - v(s)` of the symbolic value `v`.
fn optimality_threshold(mdp: &Mdp<Rational>, value: &[RationalFunction]) -> (Rational, bool) {
    let beta = RationalFunction::var();
    let mut threshold = Rational::zero();
    let mut exact = true;
    for s in 0..mdp.state_count() {
        for a in 0..mdp.action_count(s) {
            let next = mdp
                .transition(s, a)
                .iter()
                .zip(value)
                .filter(|(p, _)| !p.is_zero())
                .fold(RationalFunction::zero(), |acc, (p, v)| {
                    acc + RationalFunction::constant(p.clone()) * v.clone()
                });
            let surplus = RationalFunction::constant(mdp.reward(s, a).clone()) + beta.clone() * next
                - value[s].clone();
            if let Some(root) = largest_root_below_one(surplus.num()) {
                if root.upper > threshold {
                    threshold = root.upper;
                    exact = root.exact.is_some();
                }
            }
        }
    }
    (threshold, exact)
}
