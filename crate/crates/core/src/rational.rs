//! Exact rational scalar used throughout the algebra.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Signed;

/// Arbitrary-precision rational; every exact quantity in this crate is one.
///
/// `num_rational::BigRational` keeps values in canonical form: positive
/// denominator, fully reduced.
pub type Rational = num_rational::BigRational;

/// Shorthand for small literals: `rat(3, 2)` is `3/2`. Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer-valued rational.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Floor of `x / p` as a big integer, for `p > 0`.
pub fn floor_div(x: &Rational, p: &Rational) -> BigInt {
    debug_assert!(p.is_positive());
    (x / p).floor().to_integer()
}

/// `x` reduced modulo `p` into `[0, p)`, for `p > 0`.
pub fn mod_pos(x: &Rational, p: &Rational) -> Rational {
    let r = x - p * Rational::from_integer(floor_div(x, p));
    debug_assert!(!r.is_negative() && r < *p);
    r
}

/// Least common multiple of two positive rationals:
/// `lcm(a/b, c/d) = lcm(a, c) / gcd(b, d)` on reduced fractions.
pub fn lcm_positive(a: &Rational, b: &Rational) -> Rational {
    debug_assert!(a.is_positive() && b.is_positive());
    let numer = a.numer().lcm(b.numer());
    let denom = a.denom().gcd(b.denom());
    Rational::new(numer, denom)
}

/// The larger of |numerator| and denominator, used by the period guard.
pub fn magnitude(r: &Rational) -> BigUint {
    r.numer().magnitude().max(r.denom().magnitude()).clone()
}
