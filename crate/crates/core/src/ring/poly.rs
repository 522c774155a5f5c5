use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{rat, LaurentA, Rational, RingError};

/// Dense polynomial in `T` whose coefficients live in `Q[a, a^-1]`.
///
/// Trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients and [`PolyT::degree`] returns `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyT {
    coeffs: Vec<LaurentA>,
}

impl PolyT {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: LaurentA) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `T`.
    pub fn t() -> Self {
        Self::from_coeffs(vec![LaurentA::zero(), LaurentA::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<LaurentA>) -> Self {
        while coeffs.last().is_some_and(LaurentA::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[LaurentA] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, power: usize) -> LaurentA {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&LaurentA> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: i64) -> LaurentA {
        let t = rat(t);
        self.coeffs
            .iter()
            .rev()
            .fold(LaurentA::zero(), |acc, c| &acc.scale(&t) + c)
    }

    pub fn scale_laurent(&self, c: &LaurentA) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    /// `T -> T + by`.
    pub fn shift(&self, by: i64) -> Self {
        let lin = Self::from_coeffs(vec![LaurentA::from_int(by), LaurentA::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &lin) + &Self::constant(c.clone()))
    }

    /// Specializes `a = 1`, giving rational coefficients by `T`-power.
    pub fn eval_alpha_one(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.coeffs.iter().map(LaurentA::eval_one).collect();
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Keeps only the terms of `T`-degree at least `min_power`.
    pub fn truncate_below(&self, min_power: usize) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i < min_power { LaurentA::zero() } else { c.clone() })
                .collect(),
        )
    }
}

impl Add<&PolyT> for &PolyT {
    type Output = PolyT;
    fn add(self, rhs: &PolyT) -> PolyT {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyT::from_coeffs((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub<&PolyT> for &PolyT {
    type Output = PolyT;
    fn sub(self, rhs: &PolyT) -> PolyT {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyT::from_coeffs((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl Mul<&PolyT> for &PolyT {
    type Output = PolyT;
    fn mul(self, rhs: &PolyT) -> PolyT {
        if self.is_zero() || rhs.is_zero() {
            return PolyT::zero();
        }
        let mut out = vec![LaurentA::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        PolyT::from_coeffs(out)
    }
}

impl Neg for &PolyT {
    type Output = PolyT;
    fn neg(self) -> PolyT {
        PolyT::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for PolyT {
    /// `(<coeff>)*T^p` terms ascending in `p`, `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*T^{p}")?;
        }
        Ok(())
    }
}

/// `binom(T + shift, degree) = (T+c)(T+c-1)...(T+c-d+1) / d!`.
pub fn binom_poly(shift: i64, degree: usize) -> PolyT {
    let mut acc = PolyT::constant(LaurentA::one());
    let mut fact = Rational::one();
    for i in 0..degree {
        let lin = PolyT::from_coeffs(vec![LaurentA::from_int(shift - i as i64), LaurentA::one()]);
        acc = &acc * &lin;
        fact *= rat(i as i64 + 1);
    }
    acc.scale(&fact.recip())
}

/// Unique polynomial of degree below `points.len()` through the given points,
/// by Newton divided differences.
pub fn interpolate(points: &[(i64, LaurentA)]) -> Result<PolyT, RingError> {
    if points.is_empty() {
        return Err(RingError::NoPoints);
    }
    let mut xs: Vec<i64> = points.iter().map(|p| p.0).collect();
    xs.sort_unstable();
    if let Some(w) = xs.windows(2).find(|w| w[0] == w[1]) {
        return Err(RingError::DuplicateAbscissa(w[0]));
    }
    let xs: Vec<i64> = points.iter().map(|p| p.0).collect();
    let mut dd: Vec<LaurentA> = points.iter().map(|p| p.1.clone()).collect();
    let n = dd.len();
    for level in 1..n {
        for i in (level..n).rev() {
            let denom = rat(xs[i] - xs[i - level]).recip();
            dd[i] = (&dd[i] - &dd[i - 1]).scale(&denom);
        }
    }
    let mut out = PolyT::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = PolyT::from_coeffs(vec![LaurentA::from_int(-xs[i]), LaurentA::one()]);
        out = &(&out * &lin) + &PolyT::constant(dd[i].clone());
    }
    Ok(out)
}
