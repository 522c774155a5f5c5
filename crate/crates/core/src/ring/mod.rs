//! Exact arithmetic: rationals, Laurent polynomials in `a` and `(a, xi)`,
//! invariants over powers of `1 - xi^2`, and polynomials in `T`.

mod invariant;
mod laurent;
mod poly;

pub use invariant::RationalInvariant;
pub use laurent::{Laurent2, LaurentA};
pub use poly::{binom_poly, interpolate, PolyT};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("numerator has an odd xi-exponent {0}; the invariant was not substituted or is malformed")]
    OddXiPower(i32),
    #[error("duplicate interpolation abscissa T = {0}")]
    DuplicateAbscissa(i64),
    #[error("interpolation needs at least one point")]
    NoPoints,
}

/// `binom(n, r)` for integers, zero unless `0 <= r <= n`.
pub fn binomial(n: i64, r: i64) -> BigInt {
    if r < 0 || n < r {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(30, 15), BigInt::from(155117520u64));
    }
}
