use std::collections::VecDeque;

use crate::numerics::{solve_linear_within, DenseMatrix, Field, NumericsError, DEFAULT_TOLERANCE};

/// Cesàro limit `P* = lim (1/N) Σ_{t<N} P^t` of a stochastic matrix.
///
/// Computed from the chain's structure: a stationary row for every closed
/// communicating class, and absorption probabilities for transient states.
/// Exact for exact fields; periodic chains need no special treatment.
pub fn cesaro_limit<T: Field>(p: &DenseMatrix<T>) -> Result<DenseMatrix<T>, NumericsError> {
    cesaro_limit_within(p, DEFAULT_TOLERANCE)
}

pub fn cesaro_limit_within<T: Field>(p: &DenseMatrix<T>, tol: f64) -> Result<DenseMatrix<T>, NumericsError> {
    if !p.is_square() {
        return Err(NumericsError::Shape(format!(
            "{}x{} transition matrix is not square",
            p.rows(),
            p.cols()
        )));
    }
    let n = p.rows();
    let reach = reachability(p, tol);
    let recurrent: Vec<bool> = (0..n)
        .map(|i| (0..n).all(|j| !reach[i][j] || reach[j][i]))
        .collect();

    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if recurrent[i] && class_of[i] == usize::MAX {
            let members: Vec<usize> = (0..n).filter(|&j| reach[i][j]).collect();
            for &j in &members {
                class_of[j] = classes.len();
            }
            classes.push(members);
        }
    }

    let mut out = DenseMatrix::zeros(n, n);
    let mut stationary = Vec::with_capacity(classes.len());
    for class in &classes {
        let pi = stationary_distribution(p, class, tol)?;
        for &i in class {
            for (&j, w) in class.iter().zip(&pi) {
                out.set(i, j, w.clone());
            }
        }
        stationary.push(pi);
    }

    let transient: Vec<usize> = (0..n).filter(|&i| !recurrent[i]).collect();
    if transient.is_empty() {
        return Ok(out);
    }
    let k = transient.len();
    let mut system = DenseMatrix::<T>::identity(k);
    for (a, &i) in transient.iter().enumerate() {
        for (b, &j) in transient.iter().enumerate() {
            let v = system.get(a, b).clone() - p.get(i, j).clone();
            system.set(a, b, v);
        }
    }
    for (c, class) in classes.iter().enumerate() {
        let rhs: Vec<T> = transient
            .iter()
            .map(|&i| {
                class
                    .iter()
                    .fold(T::zero(), |acc, &j| acc + p.get(i, j).clone())
            })
            .collect();
        let absorb = solve_linear_within(&system, &rhs, tol)?;
        for (a, &i) in transient.iter().enumerate() {
            for (&j, w) in class.iter().zip(&stationary[c]) {
                out.set(i, j, absorb[a].clone() * w.clone());
            }
        }
    }
    Ok(out)
}

fn reachability<T: Field>(p: &DenseMatrix<T>, tol: f64) -> Vec<Vec<bool>> {
    let n = p.rows();
    (0..n)
        .map(|start| {
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if !seen[j] && !p.get(i, j).is_zero_within(tol) {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Solves `π P_C = π`, `Σ π = 1` on a closed class.
fn stationary_distribution<T: Field>(
    p: &DenseMatrix<T>,
    class: &[usize],
    tol: f64,
) -> Result<Vec<T>, NumericsError> {
    let k = class.len();
    let mut a = DenseMatrix::zeros(k, k);
    for (r, &j) in class.iter().enumerate().take(k - 1) {
        for (c, &i) in class.iter().enumerate() {
            let delta = if i == j { T::one() } else { T::zero() };
            a.set(r, c, p.get(i, j).clone() - delta);
        }
    }
    for c in 0..k {
        a.set(k - 1, c, T::one());
    }
    let mut b = vec![T::zero(); k];
    b[k - 1] = T::one();
    solve_linear_within(&a, &b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat, Rational};

    fn m(rows: Vec<Vec<Rational>>) -> DenseMatrix<Rational> {
        DenseMatrix::from_rows(rows)
    }

    #[test]
    fn identity_is_fixed() {
        let id = DenseMatrix::<Rational>::identity(3);
        assert_eq!(cesaro_limit(&id).unwrap(), id);
    }

    #[test]
    fn absorbing_first_state() {
        let p = m(vec![vec![int(1), int(0)], vec![int(1), int(0)]]);
        assert_eq!(cesaro_limit(&p).unwrap(), p);
    }

    #[test]
    fn periodic_chain_averages() {
        let p = m(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        let half = rat(1, 2);
        assert_eq!(
            cesaro_limit(&p).unwrap(),
            m(vec![vec![half.clone(), half.clone()], vec![half.clone(), half]])
        );
    }

    #[test]
    fn transient_state_splits_between_classes() {
        let p = m(vec![
            vec![int(1), int(0), int(0), int(0)],
            vec![rat(1, 4), rat(1, 4), rat(1, 2), int(0)],
            vec![int(0), int(0), int(0), int(1)],
            vec![int(0), int(0), int(1), int(0)],
        ]);
        let star = cesaro_limit(&p).unwrap();
        assert_eq!(star.row(1), &[rat(1, 3), int(0), rat(1, 3), rat(1, 3)]);
        assert_eq!(star.mul(&p), star);
        assert_eq!(p.mul(&star), star);
        assert_eq!(star.mul(&star), star);
    }

    #[test]
    fn float_chain_within_tolerance() {
        let p = DenseMatrix::from_rows(vec![vec![0.5_f64, 0.5], vec![0.25, 0.75]]);
        let star = cesaro_limit(&p).unwrap();
        assert!((star.get(0, 0) - 1.0 / 3.0).abs() < 1e-12);
        assert!((star.get(1, 1) - 2.0 / 3.0).abs() < 1e-12);
    }
}
