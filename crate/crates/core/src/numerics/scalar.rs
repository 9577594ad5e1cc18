//! Scalar fields the solvers are generic over.
//!
//! Exact instances ([`Rational`], [`RationalFunction`]) satisfy the field
//! axioms exactly; the float instances answer zero tests against an
//! absolute tolerance.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::ratfunc::RationalFunction;
use super::Rational;

/// Absolute tolerance used for float zero tests unless a caller supplies one.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A commutative field with an exact or tolerant zero test.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// `true` for fields whose arithmetic is exact.
    const EXACT: bool;

    /// Zero test; `tol` is ignored by exact fields.
    fn is_zero_within(&self, tol: f64) -> bool;

    /// Embeds an exact rational.
    fn from_rational(q: &Rational) -> Self;

    /// Magnitude used for partial pivoting. Exact fields return `None`,
    /// which selects first-nonzero pivoting.
    fn pivot_weight(&self) -> Option<f64> {
        None
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }
}

/// A totally ordered field.
pub trait OrderedField: Field + PartialOrd {
    /// Rendering for reports and tolerance comparisons.
    fn to_f64(&self) -> f64;

    /// `self > tol`, with `tol` embedded in the field.
    fn exceeds(&self, tol: f64) -> bool;

    /// Three-way comparison that treats differences within `tol` as equal.
    fn cmp_within(&self, other: &Self, tol: f64) -> Ordering {
        let d = self.clone() - other.clone();
        if d.is_zero_within(tol) {
            Ordering::Equal
        } else if d > Self::zero() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn is_zero_within(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl OrderedField for Rational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn exceeds(&self, tol: f64) -> bool {
        if tol == 0.0 {
            return self.is_positive();
        }
        match Rational::from_f64(tol) {
            Some(t) => *self > t,
            None => false,
        }
    }
}

impl Field for RationalFunction {
    const EXACT: bool = true;

    fn is_zero_within(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn from_rational(q: &Rational) -> Self {
        RationalFunction::constant(q.clone())
    }
}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            const EXACT: bool = false;

            fn is_zero_within(&self, tol: f64) -> bool {
                (*self as f64).abs() <= tol
            }

            fn from_rational(q: &Rational) -> Self {
                ToPrimitive::to_f64(q).unwrap_or(f64::NAN) as $t
            }

            fn pivot_weight(&self) -> Option<f64> {
                Some((*self as f64).abs())
            }
        }

        impl OrderedField for $t {
            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn exceeds(&self, tol: f64) -> bool {
                (*self as f64) > tol
            }
        }
    };
}

float_field!(f64);
float_field!(f32);
