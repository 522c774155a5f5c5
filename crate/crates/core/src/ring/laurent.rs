//! Sparse Laurent polynomials with exact rational coefficients.
//!
//! [`LaurentA`] lives in `Q[a, a^-1]`, [`Laurent2`] in `Q[a^±1, xi^±1]`. Both
//! keep a sorted exponent table and never store a zero coefficient, so derived
//! equality and hashing agree with ring equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::Rational;

macro_rules! forward_ring_ops {
    ($ty:ident) => {
        impl Add for $ty {
            type Output = $ty;
            fn add(mut self, rhs: $ty) -> $ty {
                self += &rhs;
                self
            }
        }
        impl Add<&$ty> for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                let mut out = self.clone();
                out += rhs;
                out
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(mut self, rhs: $ty) -> $ty {
                self -= &rhs;
                self
            }
        }
        impl Sub<&$ty> for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                let mut out = self.clone();
                out -= rhs;
                out
            }
        }
        impl Mul for $ty {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                &self * &rhs
            }
        }
        impl Neg for $ty {
            type Output = $ty;
            fn neg(mut self) -> $ty {
                for c in self.terms.values_mut() {
                    *c = -c.clone();
                }
                self
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                -self.clone()
            }
        }
        impl AddAssign<&$ty> for $ty {
            fn add_assign(&mut self, rhs: &$ty) {
                for (e, c) in &rhs.terms {
                    self.add_term(*e, c.clone());
                }
            }
        }
        impl SubAssign<&$ty> for $ty {
            fn sub_assign(&mut self, rhs: &$ty) {
                for (e, c) in &rhs.terms {
                    self.add_term(*e, -c.clone());
                }
            }
        }
    };
}

/// Element of `Q[a, a^-1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentA {
    terms: BTreeMap<i32, Rational>,
}

impl LaurentA {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    pub fn monomial(coeff: Rational, exp: i32) -> Self {
        let mut out = Self::zero();
        out.add_term(exp, coeff);
        out
    }

    /// `a^exp` with coefficient one.
    pub fn alpha(exp: i32) -> Self {
        Self::monomial(Rational::one(), exp)
    }

    pub fn from_int(c: i64) -> Self {
        Self::monomial(Rational::from_integer(c.into()), 0)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i32) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exp: i32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by `a^by`.
    pub fn shift(&self, by: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + by, v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Value at `a = 1`.
    pub fn eval_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }
}

forward_ring_ops!(LaurentA);

impl Mul<&LaurentA> for &LaurentA {
    type Output = LaurentA;
    fn mul(self, rhs: &LaurentA) -> LaurentA {
        let mut out = LaurentA::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentA {
    /// Terms ascending by exponent: `-1*a^-2 + 1*a^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*a^{e}")?;
        }
        Ok(())
    }
}

/// Element of `Q[a^±1, xi^±1]`, keyed by `(a-exponent, xi-exponent)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent2 {
    terms: BTreeMap<(i32, i32), Rational>,
}

impl Laurent2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0, 0)
    }

    pub fn monomial(coeff: Rational, a_exp: i32, xi_exp: i32) -> Self {
        let mut out = Self::zero();
        out.add_term((a_exp, xi_exp), coeff);
        out
    }

    /// Monomial `c * a^j * xi^k` with an integer coefficient.
    pub fn term(c: i64, a_exp: i32, xi_exp: i32) -> Self {
        Self::monomial(Rational::from_integer(c.into()), a_exp, xi_exp)
    }

    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    /// `xi^-1 - xi`.
    pub fn xi_inv_minus_xi() -> Self {
        Self::term(1, 0, -1) + Self::term(-1, 0, 1)
    }

    /// `1 - xi^2`.
    pub fn one_minus_xi2() -> Self {
        Self::term(1, 0, 0) + Self::term(-1, 0, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, a_exp: i32, xi_exp: i32) -> Rational {
        self.terms
            .get(&(a_exp, xi_exp))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exp: (i32, i32), coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by `a^da * xi^dk`.
    pub fn shift(&self, da: i32, dk: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|((j, k), v)| ((j + da, k + dk), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `a^j xi^k -> a^j xi^(j+k)`, the substitution `a -> a*xi`.
    pub fn substitute_alpha_to_alphaxi(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|((j, k), v)| ((*j, j + k), v.clone()))
                .collect(),
        }
    }

    /// True when every stored xi-exponent is even.
    pub fn has_even_xi(&self) -> bool {
        self.terms.keys().all(|(_, k)| k % 2 == 0)
    }

    /// Exact division by `1 - xi^2`, or `None` if it does not divide.
    pub fn div_one_minus_xi2(&self) -> Option<Self> {
        // Each (a-exponent, xi-parity) class divides independently; within a
        // class the quotient is the running sum of the coefficients.
        let mut classes: BTreeMap<(i32, i32), Vec<(i32, &Rational)>> = BTreeMap::new();
        for ((j, k), c) in &self.terms {
            classes.entry((*j, k.rem_euclid(2))).or_default().push((*k, c));
        }
        let mut out = Self::zero();
        for ((j, _), entries) in classes {
            let lo = entries[0].0;
            let hi = entries[entries.len() - 1].0;
            let mut idx = 0;
            let mut running = Rational::zero();
            let mut k = lo;
            while k <= hi {
                if idx < entries.len() && entries[idx].0 == k {
                    running += entries[idx].1;
                    idx += 1;
                }
                if k == hi {
                    if !running.is_zero() {
                        return None;
                    }
                } else {
                    out.add_term((j, k), running.clone());
                }
                k += 2;
            }
        }
        Some(out)
    }

    /// Groups the terms by xi-exponent: `sum_k coeff_k(a) xi^k`.
    pub fn by_xi(&self) -> BTreeMap<i32, LaurentA> {
        let mut out: BTreeMap<i32, LaurentA> = BTreeMap::new();
        for ((j, k), c) in &self.terms {
            out.entry(*k).or_default().add_term(*j, c.clone());
        }
        out
    }
}

forward_ring_ops!(Laurent2);

impl Mul<&Laurent2> for &Laurent2 {
    type Output = Laurent2;
    fn mul(self, rhs: &Laurent2) -> Laurent2 {
        let mut out = Laurent2::zero();
        for ((j1, k1), c1) in &self.terms {
            for ((j2, k2), c2) in &rhs.terms {
                out.add_term((j1 + j2, k1 + k2), c1 * c2);
            }
        }
        out
    }
}

impl From<&LaurentA> for Laurent2 {
    fn from(p: &LaurentA) -> Self {
        Laurent2::from_terms(p.terms().map(|(j, c)| ((j, 0), c.clone())))
    }
}

impl fmt::Display for Laurent2 {
    /// Terms sorted by `(j, k)` ascending: `1*a^-1*xi^1 + -1*a^0*xi^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, ((j, k), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*a^{j}*xi^{k}")?;
        }
        Ok(())
    }
}
