use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::poly::{fmt_in, Polynomial};
use super::Rational;

/// Quotient of two rational polynomials in one indeterminate (the discount
/// factor β, the discount rate α, or a strategy parameter).
///
/// Always kept in normal form: numerator and denominator coprime, the
/// denominator monic, and zero represented as `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// Leading terms of a Laurent expansion in powers of `(1 - x)` at `x -> 1-`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    /// Exponent of `(1 - x)` attached to the first coefficient.
    pub order: i64,
    pub coefficients: Vec<Rational>,
}

impl LaurentSeries {
    /// Coefficient of `(1 - x)^k`.
    pub fn coefficient(&self, k: i64) -> Rational {
        usize::try_from(k - self.order)
            .ok()
            .and_then(|i| self.coefficients.get(i).cloned())
            .unwrap_or_else(Rational::zero)
    }
}

impl RationalFunction {
    /// Builds `num / den` in normal form. Panics when `den` is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = Polynomial::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = den.leading();
        let inv = Rational::one() / lead;
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self::new(p, Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial(Polynomial::constant(c))
    }

    /// The indeterminate.
    pub fn var() -> Self {
        Self::polynomial(Polynomial::x())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rational::zero()),
            (Some(0), Some(0)) => Some(self.num.coeff(0)),
            _ => None,
        }
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &RationalFunction) -> RationalFunction {
        let lift = |p: &Polynomial| {
            p.coeffs()
                .iter()
                .rev()
                .fold(RationalFunction::zero(), |acc, c| {
                    acc * inner.clone() + RationalFunction::constant(c.clone())
                })
        };
        lift(&self.num) / lift(&self.den)
    }

    /// First `k` Laurent coefficients in the variable `t = 1 - x`, lowest
    /// order first. The zero function reports order 0 and `k` zeros.
    pub fn series_at_limit(&self, k: usize) -> LaurentSeries {
        if self.is_zero() {
            return LaurentSeries {
                order: 0,
                coefficients: vec![Rational::zero(); k],
            };
        }
        let n = self.num.reflect_at_one();
        let d = self.den.reflect_at_one();
        let vn = n.valuation().expect("nonzero numerator");
        let vd = d.valuation().expect("nonzero denominator");
        let nc = &n.coeffs()[vn..];
        let dc = &d.coeffs()[vd..];
        let mut out: Vec<Rational> = Vec::with_capacity(k);
        for i in 0..k {
            let mut acc = nc.get(i).cloned().unwrap_or_else(Rational::zero);
            for j in 1..=i.min(dc.len().saturating_sub(1)) {
                acc -= &dc[j] * &out[i - j];
            }
            out.push(acc / &dc[0]);
        }
        LaurentSeries {
            order: vn as i64 - vd as i64,
            coefficients: out,
        }
    }

    /// Sign of `self` on `(x0, 1)` for every `x0` close enough to 1.
    pub fn sign_near_limit(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let lead = &self.series_at_limit(1).coefficients[0];
        if lead.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Renders with the given variable name.
    pub fn render(&self, var: &str) -> String {
        struct In<'a>(&'a Polynomial, &'a str);
        impl fmt::Display for In<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_in(self.0, self.1, f)
            }
        }
        if self.den.degree() == Some(0) {
            format!("{}", In(&self.num, var))
        } else {
            format!("({}) / ({})", In(&self.num, var), In(&self.den, var))
        }
    }
}

/// Orders two germs at `x -> 1-`: the sign of `f - g` on some interval
/// `(x0, 1)`. `Equal` exactly when `f` and `g` are identical.
pub fn compare_near_limit(f: &RationalFunction, g: &RationalFunction) -> Ordering {
    (f.clone() - g.clone()).sign_near_limit()
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den);
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        self + (-rhs)
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for RationalFunction {
    type Output = RationalFunction;

    fn div(self, rhs: RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "rational function division by zero");
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den,
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}
