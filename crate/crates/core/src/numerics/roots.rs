//! Locating the last sign change of a polynomial before `x = 1`.
//!
//! Used to turn a Blackwell-optimality certificate into a concrete discount
//! threshold: beyond the largest root in `(0, 1)` of every Bellman surplus
//! numerator, the optimal policy no longer changes.

use num_traits::{One, Signed, Zero};

use super::{Polynomial, Rational};

/// Bisection stops once the bracket is narrower than `2^-BISECTION_BITS`.
const BISECTION_BITS: u32 = 48;

/// Bracket around the largest real root of a polynomial inside `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBracket {
    /// The root itself when it is rational and was recognised.
    pub exact: Option<Rational>,
    /// A rational `>=` the root; equals `exact` when that is known.
    pub upper: Rational,
}

fn sturm_chain(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_changes(chain: &[Polynomial], x: &Rational) -> usize {
    let signs: Vec<i8> = chain.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(a, b]`.
fn roots_in(chain: &[Polynomial], a: &Rational, b: &Rational) -> usize {
    sign_changes(chain, a).saturating_sub(sign_changes(chain, b))
}

/// Largest root of `p` in the open interval `(0, 1)`, or `None` when there
/// is none (or `p` is identically zero).
pub fn largest_root_below_one(p: &Polynomial) -> Option<RootBracket> {
    if p.is_zero() {
        return None;
    }
    let one = Rational::one();
    let zero = Rational::zero();
    let p = p.deflate_root(&one);
    if p.degree().unwrap_or(0) == 0 {
        return None;
    }
    let chain = sturm_chain(&p);
    if roots_in(&chain, &zero, &one) == 0 {
        return None;
    }
    // invariant: a root in (lo, hi], none in (hi, 1)
    let mut lo = zero;
    let mut hi = one;
    let eps = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(BISECTION_BITS));
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if roots_in(&chain, &mid, &hi) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if p.eval(&hi).is_zero() {
        return Some(RootBracket {
            exact: Some(hi.clone()),
            upper: hi,
        });
    }
    let candidate = simplest_between(&lo, &hi);
    if p.eval(&candidate).is_zero() && roots_in(&chain, &candidate, &hi) == 0 {
        return Some(RootBracket {
            exact: Some(candidate.clone()),
            upper: candidate,
        });
    }
    Some(RootBracket { exact: None, upper: hi })
}

/// The rational with the smallest denominator in `[lo, hi]`, for
/// `0 <= lo <= hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(!lo.is_negative() && lo <= hi);
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(
        &(Rational::one() / (hi - &fl)),
        &(Rational::one() / (lo - &fl)),
    );
    fl + Rational::one() / inner
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rational_root_is_recovered_exactly() {
        // (5x - 3)(x + 2)
        let p = &Polynomial::from_i64s(&[-3, 5]) * &Polynomial::from_i64s(&[2, 1]);
        let r = largest_root_below_one(&p).unwrap();
        assert_eq!(r.exact, Some(q(3, 5)));
        assert_eq!(r.upper, q(3, 5));
    }

    #[test]
    fn picks_the_largest_of_several() {
        // (4x - 1)(3x - 2)
        let p = &Polynomial::from_i64s(&[-1, 4]) * &Polynomial::from_i64s(&[-2, 3]);
        assert_eq!(largest_root_below_one(&p).unwrap().exact, Some(q(2, 3)));
    }

    #[test]
    fn irrational_root_gets_a_tight_upper_bound() {
        // 2x^2 - 1, root 1/sqrt(2)
        let p = Polynomial::from_i64s(&[-1, 0, 2]);
        let r = largest_root_below_one(&p).unwrap();
        assert!(r.exact.is_none());
        assert!(p.eval(&r.upper) > Rational::zero());
        let below = &r.upper - Rational::new(1.into(), num_bigint::BigInt::from(2).pow(40));
        assert!(p.eval(&below) < Rational::zero());
    }

    #[test]
    fn roots_at_one_and_outside_are_ignored() {
        // (x - 1)^2 (x + 3)
        let lin = Polynomial::from_i64s(&[-1, 1]);
        let p = &(&lin * &lin) * &Polynomial::from_i64s(&[3, 1]);
        assert_eq!(largest_root_below_one(&p), None);
        assert_eq!(largest_root_below_one(&Polynomial::from_i64s(&[7])), None);
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&q(3, 10), &q(7, 20)), q(1, 3));
        assert_eq!(simplest_between(&q(1, 2), &q(3, 2)), q(1, 1));
        assert_eq!(simplest_between(&q(59, 100), &q(61, 100)), q(3, 5));
    }
}
