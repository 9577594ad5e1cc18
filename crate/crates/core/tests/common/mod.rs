#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stochgame::game::{GameTables, Player, PureStrategy, StateTable, StationaryStrategy};
use stochgame::gamefile::bundled;
use stochgame::numerics::{int, rat};
use stochgame::Rational;

pub fn tables(name: &str) -> GameTables {
    bundled(name).unwrap().tables().clone()
}

pub fn pure(actions: &[usize]) -> PureStrategy {
    PureStrategy::new(actions.to_vec())
}

pub fn stationary(game: &GameTables, player: Player, actions: &[usize]) -> StationaryStrategy<Rational> {
    pure(actions).for_player(game, player)
}

/// `(x, 1 - x)` at the first state, the only action elsewhere.
pub fn split(game: &GameTables, x: Rational) -> StationaryStrategy<Rational> {
    let mut rows = vec![vec![x.clone(), Rational::one() - x]];
    for _ in 1..game.state_count() {
        rows.push(vec![Rational::one()]);
    }
    StationaryStrategy::new(rows)
}

pub fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    rat(rng.gen_range(lo * den..=hi * den), den)
}

/// A probability row with small rational entries.
pub fn random_row(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|x| rat(x, total)).collect();
        }
    }
}

pub fn random_game(rng: &mut ChaCha8Rng, states: usize, max_actions: usize) -> GameTables {
    GameTables {
        states: (0..states)
            .map(|_| {
                let n1 = rng.gen_range(1..=max_actions);
                let n2 = rng.gen_range(1..=max_actions);
                let mut grid = || -> Vec<Vec<Rational>> {
                    (0..n1)
                        .map(|_| (0..n2).map(|_| random_rational(rng, -5, 5, 2)).collect())
                        .collect()
                };
                let rewards = [grid(), grid()];
                let law = (0..n1)
                    .map(|_| (0..n2).map(|_| random_row(rng, states)).collect())
                    .collect();
                StateTable { rewards, law }
            })
            .collect(),
    }
}

/// Gauss-Jordan elimination on a dense rational system, kept separate from
/// the library's solver.
pub fn oracle_solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let k = a[r][col].clone();
                for j in 0..n {
                    let d = &k * &a[col][j];
                    a[r][j] -= d;
                }
                let d = &k * &b[col];
                b[r] -= d;
            }
        }
    }
    b
}

/// Discounted value of a pure pair for one player, straight from the tables.
pub fn oracle_value(game: &GameTables, f: &[usize], g: &[usize], player: Player, beta: &Rational) -> Vec<Rational> {
    let n = game.state_count();
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|s| {
            let p = game.law(s, f[s], g[s]);
            (0..n)
                .map(|t| {
                    let id = if s == t { Rational::one() } else { Rational::zero() };
                    id - beta * &p[t]
                })
                .collect()
        })
        .collect();
    let r = (0..n).map(|s| game.reward(player, s, f[s], g[s]).clone()).collect();
    oracle_solve(a, r)
}

/// Every pure strategy of a player as raw action vectors.
pub fn all_pure(game: &GameTables, player: Player) -> Vec<Vec<usize>> {
    PureStrategy::enumerate(&game.action_counts(player))
        .map(|p| p.actions().to_vec())
        .collect()
}

/// `k` equally spaced exact points `lo + i (hi - lo) / k` for `i` in `0..k`.
pub fn grid(lo: &Rational, hi: &Rational, k: i64) -> Vec<Rational> {
    (0..k).map(|i| lo + (hi - lo) * rat(i, k)).collect()
}

pub fn q(n: i64, d: i64) -> Rational {
    rat(n, d)
}

pub fn z(n: i64) -> Rational {
    int(n)
}
