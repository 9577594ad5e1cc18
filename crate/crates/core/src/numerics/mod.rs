//! Exact and floating-point scalar fields, dense linear algebra over them,
//! and germ comparison of rational functions at the discount limit.

mod matrix;
mod poly;
mod ratfunc;
mod roots;
mod scalar;

use thiserror::Error;

pub use matrix::{resolvent_inverse, solve_linear, solve_linear_within, DenseMatrix};
pub use poly::Polynomial;
pub use ratfunc::{compare_near_limit, LaurentSeries, RationalFunction};
pub use roots::{largest_root_below_one, simplest_between, RootBracket};
pub use scalar::{Field, OrderedField, DEFAULT_TOLERANCE};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("singular matrix: no nonzero pivot in column {column}")]
    SingularMatrix { column: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// `n / d` as an exact rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Integer as an exact rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `"n"`, `"n/d"`, or a finite decimal such as `"-4.25"` or `"1e-3"`
/// into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};

    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * ten.pow(scale as u32))
    } else {
        Rational::new(all, ten.pow(scale.unsigned_abs()))
    };
    if neg {
        value = -value;
    }
    debug_assert!(!neg || !value.is_positive());
    Some(value)
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/5"), Some(rat(3, 5)));
        assert_eq!(parse_rational("-6/4"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("4.4"), Some(rat(22, 5)));
        assert_eq!(parse_rational("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1e-3"), Some(rat(1, 1000)));
        assert_eq!(parse_rational(".5"), Some(rat(1, 2)));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "1.2.3", "--1", "-", "."] {
            assert_eq!(parse_rational(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn formatting_round_trips() {
        for q in [rat(3, 5), int(-2), rat(-22, 7), int(0)] {
            assert_eq!(parse_rational(&format_rational(&q)), Some(q));
        }
    }
}
