use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::{binomial, Laurent2, LaurentA, Rational, RingError};

/// `num / (1 - xi^2)^dpow`, kept normalized: `num` is not divisible by
/// `1 - xi^2` unless `dpow == 0`.
#[derive(Clone, Debug)]
pub struct RationalInvariant {
    num: Laurent2,
    dpow: u32,
}

impl RationalInvariant {
    pub fn new(num: Laurent2, dpow: u32) -> Self {
        Self { num, dpow }.normalize()
    }

    pub fn from_laurent(num: Laurent2) -> Self {
        Self { num, dpow: 0 }
    }

    pub fn zero() -> Self {
        Self::from_laurent(Laurent2::zero())
    }

    /// Builds without normalizing; for tests of [`Self::normalize`].
    pub fn raw(num: Laurent2, dpow: u32) -> Self {
        Self { num, dpow }
    }

    pub fn num(&self) -> &Laurent2 {
        &self.num
    }

    pub fn dpow(&self) -> u32 {
        self.dpow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.dpow = 0;
            return self;
        }
        while self.dpow > 0 {
            match self.num.div_one_minus_xi2() {
                Some(q) => {
                    self.num = q;
                    self.dpow -= 1;
                }
                None => break,
            }
        }
        self
    }

    fn lift_to(&self, dpow: u32) -> Laurent2 {
        debug_assert!(dpow >= self.dpow);
        let factor = Laurent2::one_minus_xi2().pow(dpow - self.dpow);
        &self.num * &factor
    }

    /// Multiplies by a Laurent polynomial in `(a, xi)`.
    pub fn mul_laurent(&self, p: &Laurent2) -> Self {
        Self::new(&self.num * p, self.dpow)
    }

    /// Divides by `xi^-1 - xi = xi^-1 (1 - xi^2)`.
    pub fn div_xi_inv_minus_xi(&self) -> Self {
        Self::new(self.num.shift(0, 1), self.dpow + 1)
    }

    /// Applies `a -> a*xi`; the denominator has no `a` and is unchanged.
    pub fn substitute_alpha_to_alphaxi(&self) -> Self {
        Self::new(self.num.substitute_alpha_to_alphaxi(), self.dpow)
    }

    /// Coefficients `c_T` of `sum_T c_T xi^(2T)` for `tmin <= T <= tmax`.
    ///
    /// The value must already be substituted so that only even xi-powers occur.
    pub fn series_coefficients(&self, tmin: i64, tmax: i64) -> Result<Vec<LaurentA>, RingError> {
        let mut by_power: Vec<(i64, LaurentA)> = Vec::new();
        for (k, coeff) in self.num.by_xi() {
            if k % 2 != 0 {
                return Err(RingError::OddXiPower(k));
            }
            by_power.push(((k / 2) as i64, coeff));
        }
        let d = self.dpow as i64;
        let mut out = Vec::new();
        for t in tmin..=tmax {
            let mut c = LaurentA::zero();
            for (m, coeff) in &by_power {
                let s = t - m;
                if s < 0 {
                    continue;
                }
                let weight: BigInt = if d == 0 {
                    if s == 0 {
                        1.into()
                    } else {
                        0.into()
                    }
                } else {
                    binomial(s + d - 1, d - 1)
                };
                if weight != BigInt::from(0) {
                    c += &coeff.scale(&Rational::from_integer(weight));
                }
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Smallest `T` with a possibly nonzero series coefficient, if any.
    pub fn min_t(&self) -> Option<i64> {
        self.num.by_xi().keys().next().map(|k| (*k as i64).div_euclid(2))
    }

    /// Largest xi-power of the numerator halved; `c_T` agrees with its
    /// eventual polynomial for every `T > max_t() - dpow`.
    pub fn max_t(&self) -> Option<i64> {
        self.num.by_xi().keys().next_back().map(|k| (*k as i64).div_euclid(2))
    }
}

impl PartialEq for RationalInvariant {
    fn eq(&self, other: &Self) -> bool {
        let d = self.dpow.max(other.dpow);
        self.lift_to(d) == other.lift_to(d)
    }
}

impl Eq for RationalInvariant {}

impl Add<&RationalInvariant> for &RationalInvariant {
    type Output = RationalInvariant;
    fn add(self, rhs: &RationalInvariant) -> RationalInvariant {
        let d = self.dpow.max(rhs.dpow);
        RationalInvariant::new(self.lift_to(d) + rhs.lift_to(d), d)
    }
}

impl Sub<&RationalInvariant> for &RationalInvariant {
    type Output = RationalInvariant;
    fn sub(self, rhs: &RationalInvariant) -> RationalInvariant {
        let d = self.dpow.max(rhs.dpow);
        RationalInvariant::new(self.lift_to(d) - rhs.lift_to(d), d)
    }
}

impl Mul<&RationalInvariant> for &RationalInvariant {
    type Output = RationalInvariant;
    fn mul(self, rhs: &RationalInvariant) -> RationalInvariant {
        RationalInvariant::new(&self.num * &rhs.num, self.dpow + rhs.dpow)
    }
}

impl Neg for &RationalInvariant {
    type Output = RationalInvariant;
    fn neg(self) -> RationalInvariant {
        RationalInvariant {
            num: -&self.num,
            dpow: self.dpow,
        }
    }
}

impl fmt::Display for RationalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / (1 - xi^2)^{}", self.num, self.dpow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn f_unknot() -> RationalInvariant {
        RationalInvariant::new(Laurent2::term(1, -1, 1), 1)
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(
            f_unknot().substitute_alpha_to_alphaxi(),
            RationalInvariant::new(Laurent2::term(1, -1, 0), 1)
        );
        let v = RationalInvariant::new(Laurent2::term(1, 1, 1), 1);
        assert_eq!(
            v.substitute_alpha_to_alphaxi(),
            RationalInvariant::new(Laurent2::term(1, 1, 2), 1)
        );
        let one = RationalInvariant::from_laurent(Laurent2::one());
        assert_eq!(one.substitute_alpha_to_alphaxi(), one);
    }

    #[test]
    fn normalize_examples() {
        let a = RationalInvariant::raw(Laurent2::one_minus_xi2(), 1).normalize();
        assert_eq!((a.num().clone(), a.dpow()), (Laurent2::one(), 0));
        let b = RationalInvariant::raw(Laurent2::term(1, 0, 1) - Laurent2::term(1, 0, 3), 2).normalize();
        assert_eq!((b.num().clone(), b.dpow()), (Laurent2::term(1, 0, 1), 1));
        let c = RationalInvariant::raw(Laurent2::term(1, 1, 0), 0).normalize();
        assert_eq!((c.num().clone(), c.dpow()), (Laurent2::term(1, 1, 0), 0));
    }

    #[test]
    fn geometric_series() {
        let v = RationalInvariant::new(Laurent2::one(), 1);
        let c = v.series_coefficients(-1, 2).unwrap();
        let one = LaurentA::one();
        assert_eq!(c, vec![LaurentA::zero(), one.clone(), one.clone(), one]);
    }

    #[test]
    fn shifted_series_starts_at_minus_one() {
        // a^-2 xi^-2 / (1 - xi^2) = a^-2 (xi^-2 + 1 + xi^2 + ...)
        let v = RationalInvariant::new(Laurent2::term(1, -2, -2), 1);
        let c = v.series_coefficients(-3, 2).unwrap();
        let a2 = LaurentA::alpha(-2);
        assert_eq!(
            c,
            vec![LaurentA::zero(), LaurentA::zero(), a2.clone(), a2.clone(), a2.clone(), a2]
        );
    }

    #[test]
    fn cancellation_leaves_constant() {
        let v = RationalInvariant::new(Laurent2::one_minus_xi2(), 1);
        let c = v.series_coefficients(-1, 2).unwrap();
        assert_eq!(c, vec![LaurentA::zero(), LaurentA::one(), LaurentA::zero(), LaurentA::zero()]);
    }

    #[test]
    fn odd_power_rejected() {
        assert_eq!(f_unknot().series_coefficients(0, 1), Err(RingError::OddXiPower(1)));
    }

    #[test]
    fn double_pole_series_is_linear() {
        let v = RationalInvariant::new(Laurent2::one(), 2);
        let c = v.series_coefficients(0, 3).unwrap();
        let expect: Vec<_> = (1..=4).map(LaurentA::from_int).collect();
        assert_eq!(c, expect);
        assert_eq!(c[0].coeff(0), rat(1));
    }

    #[test]
    fn cross_multiplied_equality() {
        let a = RationalInvariant::raw(Laurent2::term(1, 0, 1), 1);
        let b = RationalInvariant::raw(&Laurent2::term(1, 0, 1) * &Laurent2::one_minus_xi2(), 2);
        assert_eq!(a, b);
        assert_ne!(a, RationalInvariant::raw(Laurent2::term(1, 0, 1), 2));
    }
}
