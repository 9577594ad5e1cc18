use super::{GameError, GameTables, Player, StationaryStrategy};
use crate::numerics::{DenseMatrix, Field};

fn check_pair<T: Field>(
    game: &GameTables,
    f: &StationaryStrategy<T>,
    g: &StationaryStrategy<T>,
) -> Result<(), GameError> {
    f.check_shape(game, Player::One)?;
    g.check_shape(game, Player::Two)
}

/// `Σ_{a1,a2} f(s,a1) g(s,a2) x(a1,a2)` at state `s`.
fn mix<T: Field>(
    game: &GameTables,
    s: usize,
    f: &StationaryStrategy<T>,
    g: &StationaryStrategy<T>,
    mut x: impl FnMut(usize, usize) -> T,
) -> T {
    let [n1, n2] = game.states[s].action_counts();
    let mut acc = T::zero();
    for a1 in 0..n1 {
        let fa = f.prob(s, a1);
        if fa.is_zero() {
            continue;
        }
        for a2 in 0..n2 {
            let ga = g.prob(s, a2);
            if ga.is_zero() {
                continue;
            }
            acc = acc + fa.clone() * ga.clone() * x(a1, a2);
        }
    }
    acc
}

fn induced_law<T: Field>(
    game: &GameTables,
    f: &StationaryStrategy<T>,
    g: &StationaryStrategy<T>,
) -> Result<DenseMatrix<T>, GameError> {
    check_pair(game, f, g)?;
    let n = game.state_count();
    let rows = (0..n)
        .map(|s| {
            (0..n)
                .map(|t| mix(game, s, f, g, |a1, a2| T::from_rational(&game.law(s, a1, a2)[t])))
                .collect()
        })
        .collect();
    Ok(DenseMatrix::from_rows(rows))
}

/// `P(f, g)` of a discrete game.
pub fn induced_transition<T: Field>(
    game: &GameTables,
    f: &StationaryStrategy<T>,
    g: &StationaryStrategy<T>,
) -> Result<DenseMatrix<T>, GameError> {
    induced_law(game, f, g)
}

/// `Q(f, g)` of a continuous game.
pub fn induced_rate_matrix<T: Field>(
    game: &GameTables,
    f: &StationaryStrategy<T>,
    g: &StationaryStrategy<T>,
) -> Result<DenseMatrix<T>, GameError> {
    induced_law(game, f, g)
}

/// `r^i(f, g)`, one entry per state.
pub fn induced_rewards<T: Field>(
    game: &GameTables,
    f: &StationaryStrategy<T>,
    g: &StationaryStrategy<T>,
    player: Player,
) -> Result<Vec<T>, GameError> {
    check_pair(game, f, g)?;
    Ok((0..game.state_count())
        .map(|s| mix(game, s, f, g, |a1, a2| T::from_rational(game.reward(player, s, a1, a2))))
        .collect())
}

/// All rows identical (state-independent transitions).
pub fn is_sit<T: Field>(p: &DenseMatrix<T>, tol: f64) -> bool {
    (1..p.rows()).all(|i| {
        p.row(i)
            .iter()
            .zip(p.row(0))
            .all(|(a, b)| (a.clone() - b.clone()).is_zero_within(tol))
    })
}

pub fn is_identity<T: Field>(p: &DenseMatrix<T>, tol: f64) -> bool {
    p.is_square()
        && (0..p.rows()).all(|i| {
            (0..p.cols()).all(|j| {
                let want = if i == j { T::one() } else { T::zero() };
                (p.get(i, j).clone() - want).is_zero_within(tol)
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{PureStrategy, StateTable};
    use crate::numerics::{int, rat, Rational};

    fn coin_flip_game() -> GameTables {
        let r = |v: [[i64; 2]; 2]| v.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect();
        GameTables {
            states: vec![
                StateTable {
                    rewards: [r([[1, 2], [3, 4]]), r([[0, 1], [1, 0]])],
                    law: vec![
                        vec![vec![int(1), int(0)], vec![int(0), int(1)]],
                        vec![vec![rat(1, 2), rat(1, 2)], vec![int(1), int(0)]],
                    ],
                },
                StateTable {
                    rewards: [vec![vec![int(5)]], vec![vec![int(6)]]],
                    law: vec![vec![vec![rat(1, 3), rat(2, 3)]]],
                },
            ],
        }
    }

    #[test]
    fn mixed_pair_mixes_rows() {
        let game = coin_flip_game();
        let f = StationaryStrategy::new(vec![vec![rat(1, 2), rat(1, 2)], vec![int(1)]]);
        let g = StationaryStrategy::new(vec![vec![int(1), int(0)], vec![int(1)]]);
        let p = induced_transition(&game, &f, &g).unwrap();
        assert_eq!(p.row(0), &[rat(3, 4), rat(1, 4)]);
        assert_eq!(p.row(1), &[rat(1, 3), rat(2, 3)]);
        let r = induced_rewards(&game, &f, &g, Player::One).unwrap();
        assert_eq!(r, vec![int(2), int(5)]);
    }

    #[test]
    fn pure_pair_reads_cells() {
        let game = coin_flip_game();
        let f: StationaryStrategy<Rational> = PureStrategy::new(vec![1, 0]).to_stationary(&[2, 1]);
        let g: StationaryStrategy<Rational> = PureStrategy::new(vec![1, 0]).to_stationary(&[2, 1]);
        assert_eq!(induced_rewards(&game, &f, &g, Player::Two).unwrap(), vec![int(0), int(6)]);
        let p = induced_transition(&game, &f, &g).unwrap();
        assert_eq!(p.row(0), &[int(1), int(0)]);
    }

    #[test]
    fn wrong_shape_is_rejected() {
        let game = coin_flip_game();
        let f = StationaryStrategy::new(vec![vec![int(1), int(0)]]);
        let g = StationaryStrategy::new(vec![vec![int(1), int(0)], vec![int(1)]]);
        assert!(matches!(
            induced_transition(&game, &f, &g),
            Err(GameError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn sit_and_identity_shapes() {
        let sit = DenseMatrix::from_rows(vec![vec![rat(1, 4), rat(3, 4)]; 3]);
        assert!(is_sit(&sit, 0.0));
        assert!(!is_identity(&sit, 0.0));
        let id: DenseMatrix<Rational> = DenseMatrix::identity(2);
        assert!(!is_sit(&id, 0.0));
        assert!(is_identity(&id, 0.0));
        let one: DenseMatrix<Rational> = DenseMatrix::identity(1);
        assert!(is_sit(&one, 0.0) && is_identity(&one, 0.0));
        let near = DenseMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.5 + 1e-12, 0.5]]);
        assert!(is_sit(&near, 1e-9));
    }
}
