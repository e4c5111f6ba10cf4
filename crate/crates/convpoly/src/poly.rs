//! Dense univariate polynomials over a [`Coeff`] ring.
//!
//! The indeterminate is abstract: the same type serves as a polynomial in
//! `x` (convolution family rows), in `q` (parametrized matrix powers), in
//! `y` (extended matrix entries) and in `n` (asymptotic expansions).
//! `XPolynomial<T>` implements [`Coeff`] itself, so truncated series may
//! take polynomial coefficients; that is how `exp(x f(z))` is expanded.
//!
//! Invariant: the coefficient vector never ends in a zero (the zero
//! polynomial is the empty vector), so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::util::factorial_rat;
use crate::{Rat, Result};

#[derive(Clone, PartialEq)]
pub struct XPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> XPolynomial<T> {
    /// Build from coefficients `coeffs[k] = [x^k]`, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self {
            coeffs: vec![T::zero(), T::one()],
        }
    }

    /// The monomial `c x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    /// Degree of the polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.scale_rat(r)).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            (1..self.coeffs.len())
                .map(|k| self.coeffs[k].scale_rat(&Rat::from_integer(k.into())))
                .collect(),
        )
    }

    /// Substitute `x -> x + c` (Taylor shift, by Horner on `x + c`).
    pub fn shift(&self, c: &T) -> Self {
        let mut acc = Self::zero();
        let linear = Self {
            coeffs: vec![c.clone(), T::one()],
        };
        for k in (0..self.coeffs.len()).rev() {
            acc = acc * linear.clone() + Self::constant(self.coeffs[k].clone());
        }
        acc
    }

    /// Substitute another polynomial for the indeterminate.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for k in (0..self.coeffs.len()).rev() {
            acc = acc * inner.clone() + Self::constant(self.coeffs[k].clone());
        }
        acc
    }

    /// Exact division by the monic linear factor `x - root`; returns the
    /// quotient when the remainder vanishes.
    pub fn div_linear(&self, root: &T) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut quot = vec![T::zero(); self.coeffs.len() - 1];
        let mut carry = T::zero();
        for k in (1..self.coeffs.len()).rev() {
            carry = self.coeffs[k].clone() + carry * root.clone();
            quot[k - 1] = carry.clone();
        }
        let rem = self.coeffs[0].clone() + carry * root.clone();
        if !rem.is_zero() {
            return Err(crate::Error::InvalidArgument(
                "polynomial not divisible by the linear factor".into(),
            ));
        }
        Ok(Self::from_coeffs(quot))
    }

    /// Falling factorial `x (x-1) ... (x-k+1)` as a polynomial.
    pub fn falling_factorial(k: usize) -> Self {
        let mut acc = Self::one();
        for i in 0..k {
            let factor = Self {
                coeffs: vec![T::from_int(-(i as i64)), T::one()],
            };
            acc = acc * factor;
        }
        acc
    }

    /// Rising factorial `x (x+1) ... (x+k-1)` as a polynomial.
    pub fn rising_factorial(k: usize) -> Self {
        let mut acc = Self::one();
        for i in 0..k {
            let factor = Self {
                coeffs: vec![T::from_int(i as i64), T::one()],
            };
            acc = acc * factor;
        }
        acc
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> XPolynomial<U> {
        XPolynomial::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

/// Binomial coefficient `C(q, k)` as a polynomial in `q`.
pub fn binomial_poly(k: usize) -> XPolynomial<Rat> {
    XPolynomial::falling_factorial(k).scale_rat(&factorial_rat(k).recip())
}

/// Binomial coefficient `C(q - a, k)` as a polynomial in `q`.
pub fn binomial_poly_shifted(a: i64, k: usize) -> XPolynomial<Rat> {
    binomial_poly(k).shift(&Rat::from_integer((-a).into()))
}

impl<T: Coeff> Zero for XPolynomial<T> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Coeff> One for XPolynomial<T> {
    fn one() -> Self {
        Self {
            coeffs: vec![T::one()],
        }
    }

    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl<T: Coeff> Add for XPolynomial<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(T::zero);
            let b = rhs.coeffs.get(k).cloned().unwrap_or_else(T::zero);
            coeffs.push(a + b);
        }
        Self::from_coeffs(coeffs)
    }
}

impl<T: Coeff> Sub for XPolynomial<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Coeff> Neg for XPolynomial<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<T: Coeff> Mul for XPolynomial<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(coeffs)
    }
}

impl<T: Coeff> Coeff for XPolynomial<T> {
    fn from_rat(r: &Rat) -> Self {
        if num_traits::Zero::is_zero(r) {
            Self::zero()
        } else {
            Self::constant(T::from_rat(r))
        }
    }

    fn try_inv(&self) -> Option<Self> {
        if self.coeffs.len() == 1 {
            self.coeffs[0].try_inv().map(Self::constant)
        } else {
            None
        }
    }
}

impl<T: Coeff> fmt::Display for XPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl<T: Coeff> fmt::Debug for XPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XPoly[{self}]")
    }
}
