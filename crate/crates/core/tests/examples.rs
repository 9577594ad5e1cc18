mod common;

use common::*;
use stochgame::blackwell::{
    check_conditions_c, sc_ar_bne_discrete, CertificationError, ConditionSet, RateThreshold, ScArWitness,
};
use stochgame::continuous::{
    best_response_ctmdp, certify_bne_ct, ct_policy_value, mu_norm, sc_ar_bne_ct, uniformize, verify_nash_ct,
    ContinuousError,
};
use stochgame::equilibrium::{enumerate_pure_nash, verify_nash};
use stochgame::game::{is_single_controller, Controller, Player};
use stochgame::mdp::Policy;
use stochgame::Rational;

#[test]
fn bundled_rate_games_have_unit_norm() {
    for name in ["ct-ex1", "ct-ex2", "ct-ex3"] {
        assert_eq!(mu_norm(&tables(name)).unwrap(), z(1), "{name}");
    }
    let mut still = tables("ct-ex2");
    for st in &mut still.states {
        for row in st.law.iter_mut().flatten() {
            row.iter_mut().for_each(|x| *x = z(0));
        }
    }
    assert_eq!(mu_norm(&still), Err(ContinuousError::ZeroRates));
}

#[test]
fn absorbing_pair_fails_the_state_independent_shape() {
    let game = tables("ex-sec-set");
    let report = check_conditions_c(&game, &pure(&[0, 0]), &pure(&[0, 0]), &q(3, 5)).unwrap();
    assert!(!report.verdict("C2").unwrap().holds);
    assert!(report.chain.identity && !report.chain.sit);
    assert!(!report.certified);
}

#[test]
fn absorbing_example_deviation_pays_below_threshold() {
    let game = tables("ex-sec-set");
    let f = stationary(&game, Player::One, &[0, 0]);
    let g = stationary(&game, Player::Two, &[0, 0]);
    let r = verify_nash(&game, &f, &g, &q(1, 2), 0.0).unwrap();
    assert!(!r.is_nash);
    assert_eq!(r.gap(Player::One)[0], z(0));
    assert_eq!(r.gap(Player::Two)[0], q(1, 5));
    for b in [q(3, 5), q(3, 4), q(9, 10), q(99, 100)] {
        assert!(verify_nash(&game, &f, &g, &b, 0.0).unwrap().is_nash);
    }
    let found = enumerate_pure_nash(&game, &q(3, 5)).unwrap();
    assert!(found.contains(&(pure(&[0, 0]), pure(&[0, 0]))));
}

#[test]
fn additive_check_game_construction() {
    let game = tables("ex-additive-check");
    assert_eq!(is_single_controller(&game), Controller::Player2);
    let out = sc_ar_bne_discrete(&game).unwrap();
    assert_eq!(out.f.action(0), 0);
    assert_eq!(out.decomposition.r1[0], vec![z(2), z(1)]);
    assert_eq!(out.decomposition.r2[0], vec![z(0), z(3)]);
    let f = out.f.for_player::<Rational>(&game, Player::One);
    let g = out.g.for_player::<Rational>(&game, Player::Two);
    for b in [out.beta0.clone(), q(9, 10), q(99, 100)] {
        assert!(verify_nash(&game, &f, &g, &b, 0.0).unwrap().is_nash);
    }
}

#[test]
fn counterexamples_are_not_scar() {
    let err = sc_ar_bne_discrete(&tables("ex1-discrete")).unwrap_err();
    assert!(matches!(err, CertificationError::NotScAr(ScArWitness::Rectangle(_))));
    let err = sc_ar_bne_ct(&tables("ct-ex1")).unwrap_err();
    let CertificationError::NotScAr(ScArWitness::Rectangle(w)) = err else {
        panic!("unexpected {err:?}");
    };
    assert_eq!((w.diagonal_sum(), w.anti_diagonal_sum()), (z(8), z(11)));
}

#[test]
fn uniformized_absorbing_example() {
    let game = tables("ct-ex2");
    let f = stationary(&game, Player::One, &[0, 0]);
    let ct = best_response_ctmdp(&game, &f, Player::Two).unwrap();
    let u = uniformize(&ct, &q(2, 3)).unwrap();
    assert_eq!(u.beta, q(3, 5));
    let (p1, _) = u.dtmdp.induced(&Policy::deterministic(vec![0, 0])).unwrap();
    let (p2, _) = u.dtmdp.induced(&Policy::deterministic(vec![1, 0])).unwrap();
    assert_eq!(p1.to_rows(), vec![vec![z(1), z(0)], vec![z(0), z(1)]]);
    assert_eq!(p2.to_rows(), vec![vec![z(0), z(1)], vec![z(0), z(1)]]);
    let v = ct_policy_value(&ct, &Policy::deterministic(vec![0, 0]), &q(2, 3)).unwrap();
    assert_eq!(v, vec![q(33, 5), z(6)]);
}

#[test]
fn rate_examples_are_equilibria() {
    let ex3 = tables("ct-ex3");
    let f = stationary(&ex3, Player::One, &[0, 0]);
    let g = stationary(&ex3, Player::Two, &[1, 0]);
    let r = verify_nash_ct(&ex3, &f, &g, &q(1, 2), 0.0).unwrap();
    assert!(r.report.is_nash);
    assert_eq!(r.scale, q(2, 3));
    let ex2 = tables("ct-ex2");
    let f = stationary(&ex2, Player::One, &[0, 0]);
    let g = stationary(&ex2, Player::Two, &[0, 0]);
    assert!(verify_nash_ct(&ex2, &f, &g, &q(2, 3), 0.0).unwrap().report.is_nash);
}

#[test]
fn absorbing_rate_pair_fails_the_state_independent_shape() {
    let game = tables("ct-ex2");
    let report = certify_bne_ct(&game, &pure(&[0, 0]), &pure(&[0, 0]), &q(2, 3), ConditionSet::M).unwrap();
    assert!(!report.verdict("M2").unwrap().holds);
    assert!(!report.certified);
    let n = certify_bne_ct(&game, &pure(&[0, 0]), &pure(&[0, 0]), &q(2, 3), ConditionSet::N).unwrap();
    assert_eq!(n.player_alpha0, Some([RateThreshold::Finite(z(1)), RateThreshold::Finite(q(2, 3))]));
}

#[test]
fn float_rate_check_agrees() {
    let game = tables("ct-ex1");
    let a = 1.0_f64;
    let p = (4.0 + a) / (12.0 + 7.0 * a);
    let f = stochgame::FloatStrategy::new(vec![vec![p, 1.0 - p], vec![1.0]]);
    let g = stochgame::FloatStrategy::new(vec![vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0]]);
    assert!(verify_nash_ct(&game, &f, &g, &a, 1e-9).unwrap().report.is_nash);
    let off = stochgame::FloatStrategy::new(vec![vec![0.9, 0.1], vec![1.0]]);
    assert!(!verify_nash_ct(&game, &off, &g, &a, 1e-9).unwrap().report.is_nash);
}
