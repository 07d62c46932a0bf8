//! Exact rationals.
//!
//! `BigRational` already keeps the denominator positive and the fraction in
//! lowest terms, so this module only adds the conveniences the rest of the
//! crate needs.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_one(q: &Rational) -> bool {
    q.is_one()
}

pub fn is_minus_one(q: &Rational) -> bool {
    q.is_negative() && (-q).is_one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `1/n!` for small `n`.
pub fn inv_factorial(n: usize) -> Rational {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    Rational::new(BigInt::one(), f)
}

/// Canonical text form: `p` or `p/q`, sign on the numerator.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
