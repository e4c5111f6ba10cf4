//! Truncated formal power series over a [`Coeff`] ring.
//!
//! A series stores its coefficients `[z^0] .. [z^N]` densely; `N` is the
//! truncation order. Binary operations on series of different orders
//! succeed and return the smaller order, so precision narrows silently but
//! is always tracked. All arithmetic is exact in the coefficient ring.
//!
//! Two coefficient conventions coexist in the literature: ordinary
//! coefficients `[z^n] f` and exponential coefficients `f_n = n! [z^n] f`
//! (so that `f(z) = f_1 z + f_2 z^2/2! + ...`). Storage is always ordinary;
//! [`TruncatedSeries::exp_coeff`] and
//! [`TruncatedSeries::from_exp_coeffs`] provide the exponential view.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::Coeff;
use crate::util::factorial_rat;
use crate::{Error, Rat, Result};

/// Dense truncated power series; `coeffs[i]` is the coefficient of `z^i`
/// and the truncation order is `coeffs.len() - 1`.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> TruncatedSeries<T> {
    /// Build a series from ordinary coefficients. The vector must be
    /// nonempty; its length fixes the truncation order to `len - 1`.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "series needs at least the z^0 coefficient"
        );
        Self { coeffs }
    }

    /// Build a series from exponential coefficients `f_0, f_1, ...` where
    /// `f_n = n! [z^n] f`.
    pub fn from_exp_coeffs(exp: Vec<T>) -> Self {
        let coeffs = exp
            .into_iter()
            .enumerate()
            .map(|(n, c)| c.scale_rat(&factorial_rat(n).recip()))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// The zero series truncated at `order`.
    pub fn zero_series(order: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    /// The constant-one series truncated at `order`.
    pub fn one_series(order: usize) -> Self {
        let mut s = Self::zero_series(order);
        s.coeffs[0] = T::one();
        s
    }

    /// The identity series `z` truncated at `order >= 1`.
    pub fn z(order: usize) -> Self {
        assert!(order >= 1, "identity series needs order >= 1");
        let mut s = Self::zero_series(order);
        s.coeffs[1] = T::one();
        s
    }

    /// `c * z^k` truncated at `order`.
    pub fn monomial(c: T, k: usize, order: usize) -> Self {
        assert!(k <= order, "monomial degree exceeds order");
        let mut s = Self::zero_series(order);
        s.coeffs[k] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> T {
        if i < self.coeffs.len() {
            self.coeffs[i].clone()
        } else {
            T::zero()
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Exponential-convention coefficient `n! [z^n] f`.
    pub fn exp_coeff(&self, n: usize) -> T {
        self.coeff(n).scale_rat(&factorial_rat(n))
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Drop (or zero-pad) to the requested truncation order.
    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    /// Apply a map to every coefficient (e.g. a ring homomorphism).
    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries<U> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.scale_rat(r)).collect(),
        }
    }

    /// Substitute `z -> c z`, scaling coefficient `n` by `c^n`.
    pub fn scale_var(&self, c: &T) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut power = T::one();
        for a in &self.coeffs {
            coeffs.push(a.clone() * power.clone());
            power = power * c.clone();
        }
        Self { coeffs }
    }

    /// Multiply by `z^k`, keeping the truncation order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        let mut coeffs = vec![T::zero(); n];
        let kept = n.saturating_sub(k);
        coeffs[k..k + kept].clone_from_slice(&self.coeffs[..kept]);
        Self { coeffs }
    }

    /// Divide by `z^k`; the first `k` coefficients must be zero. The order
    /// drops by `k`.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(self.coeffs.len() > k, "order too small for shift_down");
        assert!(
            self.coeffs[..k].iter().all(|c| c.is_zero()),
            "shift_down would drop nonzero coefficients"
        );
        Self {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    fn min_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul_series(&self, other: &Self) -> Self {
        let order = self.min_order(other);
        let mut coeffs = vec![T::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs }
    }

    /// Multiplicative inverse `1/f`; the constant term must be invertible
    /// in the coefficient ring.
    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].try_inv().ok_or(Error::NotInvertible)?;
        let order = self.order();
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = inv0.clone();
        for n in 1..=order {
            let mut acc = T::zero();
            for j in 1..=n {
                if self.coeffs[j].is_zero() || coeffs[n - j].is_zero() {
                    continue;
                }
                acc = acc + self.coeffs[j].clone() * coeffs[n - j].clone();
            }
            coeffs[n] = -(inv0.clone() * acc);
        }
        Ok(Self { coeffs })
    }

    /// `self / other` truncated at the smaller order.
    pub fn div_series(&self, other: &Self) -> Result<Self> {
        let order = self.min_order(other);
        Ok(self
            .truncated(order)
            .mul_series(&other.truncated(order).inverse()?))
    }

    /// Series exponential; requires a zero constant term. Computed by the
    /// order-by-order recurrence from `b' = a' b`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTermNotZero);
        }
        let order = self.order();
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = T::one();
        for n in 1..=order {
            let mut acc = T::zero();
            for j in 1..=n {
                if self.coeffs[j].is_zero() || coeffs[n - j].is_zero() {
                    continue;
                }
                let term = self.coeffs[j].clone() * coeffs[n - j].clone();
                acc = acc + term.scale_rat(&Rat::from_integer(j.into()));
            }
            coeffs[n] = acc.div_int(n as i64);
        }
        Ok(Self { coeffs })
    }

    /// Series logarithm; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let order = self.order();
        let mut coeffs = vec![T::zero(); order + 1];
        for n in 1..=order {
            let mut acc = T::zero();
            for j in 1..n {
                if coeffs[j].is_zero() || self.coeffs[n - j].is_zero() {
                    continue;
                }
                let term = coeffs[j].clone() * self.coeffs[n - j].clone();
                acc = acc + term.scale_rat(&Rat::from_integer(j.into()));
            }
            coeffs[n] = self.coeffs[n].clone() - acc.div_int(n as i64);
        }
        Ok(Self { coeffs })
    }

    /// Raise to an arbitrary scalar exponent; requires constant term 1.
    /// Uses the recurrence from `p' a = e a' p`, which agrees with
    /// `exp(e * log self)` and with repeated multiplication for integer
    /// exponents.
    pub fn pow(&self, e: &T) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let order = self.order();
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = T::one();
        for n in 1..=order {
            let mut acc = T::zero();
            for j in 1..=n {
                if self.coeffs[j].is_zero() || coeffs[n - j].is_zero() {
                    continue;
                }
                // ((e + 1) j - n) a_j p_{n-j}
                let weight = (e.clone() + T::one()).scale_rat(&Rat::from_integer(j.into()))
                    - T::from_int(n as i64);
                acc = acc + weight * self.coeffs[j].clone() * coeffs[n - j].clone();
            }
            coeffs[n] = acc.div_int(n as i64);
        }
        Ok(Self { coeffs })
    }

    /// Raise to an exact rational exponent (convenience over [`Self::pow`]).
    pub fn pow_rat(&self, e: &Rat) -> Result<Self> {
        self.pow(&T::from_rat(e))
    }

    /// Composition `self(inner(z))`; the inner series must have zero
    /// constant term. Horner evaluation costs `O(N^2)` multiplications,
    /// i.e. `O(N^3)` coefficient operations -- fine at desk scale.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::ConstantTermNotZero);
        }
        let order = self.min_order(inner);
        let inner = inner.truncated(order);
        let mut acc = Self::zero_series(order);
        for k in (0..=order.min(self.order())).rev() {
            acc = acc.mul_series(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Formal derivative; the order drops by one (an order-0 series
    /// differentiates to the order-0 zero series).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero_series(0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|n| self.coeffs[n].scale_rat(&Rat::from_integer(n.into())))
            .collect();
        Self { coeffs }
    }

    /// Formal antiderivative with zero constant term; the order grows by
    /// one.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.div_int(n as i64 + 1));
        }
        Self { coeffs }
    }

    /// Evaluate the truncated polynomial at a point by Horner's rule.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Serialize as JSON: `{"order": N, "coeffs": ["c0", "c1", ...]}`.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(|c| format!("\"{c}\"")).collect();
        format!(
            "{{\"order\": {}, \"coeffs\": [{}]}}",
            self.order(),
            body.join(", ")
        )
    }
}

impl TruncatedSeries<Rat> {
    /// Convert every coefficient to the nearest `f64`.
    pub fn to_f64(&self) -> TruncatedSeries<f64> {
        self.map(crate::coeff::rat_to_f64)
    }
}

impl<T: Coeff> fmt::Display for TruncatedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl<T: Coeff> fmt::Debug for TruncatedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{}; O(z^{})]", self, self.order() + 1)
    }
}

impl<T: Coeff> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        let order = self.min_order(rhs);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone())
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl<T: Coeff> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        let order = self.min_order(rhs);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].clone() - rhs.coeffs[i].clone())
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl<T: Coeff> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn mul(self, rhs: Self) -> TruncatedSeries<T> {
        self.mul_series(rhs)
    }
}

impl<T: Coeff> Neg for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn neg(self) -> TruncatedSeries<T> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rat_int, Int, Series};
    use num_traits::{One, Zero};

    fn s(vals: &[(i64, i64)]) -> Series {
        Series::from_coeffs(vals.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    /// Catalan numbers 1, 1, 2, 5, ... as printed for B_2(z).
    fn catalan_series(order: usize) -> Series {
        let mut c = vec![Rat::from_integer(1.into())];
        for n in 1..=order {
            // C_n = C(2n, n)/(n+1)
            c.push(crate::util::binomial_rat(&rat_int(2 * n as i64), n) / rat_int(n as i64 + 1));
        }
        Series::from_coeffs(c)
    }

    #[test]
    fn binomial_square() {
        let one_plus_z = s(&[(1, 1), (1, 1), (0, 1)]);
        let sq = &one_plus_z * &one_plus_z;
        assert_eq!(sq, s(&[(1, 1), (2, 1), (1, 1)]));
    }

    #[test]
    fn exp_times_exp_is_exp_twice() {
        // e^z * e^z vs 2^n/n! through N = 8
        let ez = Series::z(8).exp().unwrap();
        let prod = &ez * &ez;
        for n in 0..=8 {
            let expected = Rat::from_integer(Int::from(1u32 << n)) / factorial_rat(n);
            assert_eq!(prod.coeff(n), expected, "coefficient {n}");
        }
    }

    #[test]
    fn catalan_reciprocal_matches_displayed_coefficients() {
        // 1/B_2(z) must be B_{-1}(-z) = 1 - z - z^2 - 2z^3 - 5z^4 - 14z^5;
        // predicted by series division, pinned from the printed Catalan
        // coefficients of B_2 and B_{-1}.
        let b2 = catalan_series(5);
        let recip = b2.inverse().unwrap();
        let expected = s(&[(1, 1), (-1, 1), (-1, 1), (-2, 1), (-5, 1), (-14, 1)]);
        assert_eq!(recip, expected);
        let prod = &b2 * &expected;
        assert_eq!(prod, Series::one_series(5));
    }

    #[test]
    fn exp_of_zero_and_z() {
        assert_eq!(Series::zero_series(4).exp().unwrap(), Series::one_series(4));
        let e = Series::z(4).exp().unwrap();
        assert_eq!(e, s(&[(1, 1), (1, 1), (1, 2), (1, 6), (1, 24)]));
    }

    #[test]
    fn exp_of_exp_minus_one_gives_bell_numbers() {
        let mut em1 = Series::z(5).exp().unwrap();
        em1 = &em1 - &Series::one_series(5);
        let bell = em1.exp().unwrap();
        // b_n = 1, 1, 2, 5, 15, 52 over n!
        let expected = [(1, 1), (1, 1), (2, 2), (5, 6), (15, 24), (52, 120)];
        assert_eq!(bell, s(&expected));
    }

    #[test]
    fn exp_rejects_nonzero_constant() {
        assert_eq!(Series::one_series(3).exp(), Err(Error::ConstantTermNotZero));
    }

    #[test]
    fn log_of_one_and_geometric() {
        assert_eq!(Series::one_series(4).log().unwrap(), Series::zero_series(4));
        // ln 1/(1-z) = z + z^2/2 + z^3/3 + ...
        let geom = Series::from_coeffs(vec![Rat::one(); 6]);
        let lg = geom.log().unwrap();
        let expected = s(&[(0, 1), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5)]);
        assert_eq!(lg, expected);
    }

    #[test]
    fn log_rejects_other_constants() {
        assert_eq!(Series::zero_series(3).log(), Err(Error::ConstantTermNotOne));
    }

    #[test]
    fn log_exp_round_trip_fixed_random() {
        let mut rng = crate::rng::SplitMix64::new(0xC0FFEE);
        let mut coeffs = vec![Rat::zero()];
        for _ in 0..10 {
            coeffs.push(rng.next_rat(20, 9));
        }
        let a = Series::from_coeffs(coeffs);
        assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }

    #[test]
    fn pow_geometric_and_negative_binomial() {
        let one_plus_z = s(&[(1, 1), (1, 1), (0, 1), (0, 1), (0, 1)]);
        let inv = one_plus_z.pow_rat(&rat_int(-1)).unwrap();
        assert_eq!(inv, s(&[(1, 1), (-1, 1), (1, 1), (-1, 1), (1, 1)]));

        // (1-z)^{-3}: coefficients C(n+2, 2) = 1, 3, 6, 10
        let one_minus_z = s(&[(1, 1), (-1, 1), (0, 1), (0, 1)]);
        let p = one_minus_z.pow_rat(&rat_int(-3)).unwrap();
        assert_eq!(p, s(&[(1, 1), (3, 1), (6, 1), (10, 1)]));
    }

    #[test]
    fn pow_square_root_round_trip() {
        let b2 = catalan_series(10);
        let root = b2.pow_rat(&rat(1, 2)).unwrap();
        assert_eq!(&root * &root, b2);
    }

    #[test]
    fn pow_agrees_with_exp_log_and_addition_law() {
        let mut rng = crate::rng::SplitMix64::new(7);
        let mut coeffs = vec![Rat::one()];
        for _ in 0..8 {
            coeffs.push(rng.next_rat(12, 7));
        }
        let a = Series::from_coeffs(coeffs);
        let e1 = rat(2, 3);
        let e2 = rat(-5, 4);
        let via_recurrence = a.pow_rat(&(e1.clone() + e2.clone())).unwrap();
        let via_exp_log = a
            .log()
            .unwrap()
            .scale_rat(&(e1.clone() + e2.clone()))
            .exp()
            .unwrap();
        assert_eq!(via_recurrence, via_exp_log);
        let split = &a.pow_rat(&e1).unwrap() * &a.pow_rat(&e2).unwrap();
        assert_eq!(via_recurrence, split);
    }

    #[test]
    fn compose_identity_and_inverse_pair() {
        let a = s(&[(1, 1), (3, 2), (-2, 7), (5, 3)]);
        assert_eq!(a.compose(&Series::z(3)).unwrap(), a);

        // (e^z - 1) o ln(1+z) = z
        let n = 9;
        let em1 = &Series::z(n).exp().unwrap() - &Series::one_series(n);
        let ln1p = (&Series::one_series(n) + &Series::z(n)).log().unwrap();
        assert_eq!(em1.compose(&ln1p).unwrap(), Series::z(n));
    }

    #[test]
    fn compose_rejects_nonzero_inner_constant() {
        let a = Series::z(3);
        assert_eq!(
            a.compose(&Series::one_series(3)),
            Err(Error::ConstantTermNotZero)
        );
    }

    #[test]
    fn compose_stirling_pair_gives_preferential_arrangement_counts() {
        // ln(1/(1-z)) o (e^z - 1) = ln(1/(2 - e^z)); exponential
        // coefficients 1, 2, 6, 26, 150 (first column of the product
        // matrix of the two Stirling triangles).
        let n = 6;
        let em1 = &Series::z(n).exp().unwrap() - &Series::one_series(n);
        let geom_log = {
            let mut one_minus_z = Series::one_series(n);
            one_minus_z = &one_minus_z - &Series::z(n);
            -&one_minus_z.log().unwrap()
        };
        let fg = geom_log.compose(&em1).unwrap();
        let expected = [0i64, 1, 2, 6, 26, 150, 1082];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(fg.exp_coeff(k), rat_int(*e), "exp coefficient {k}");
        }
    }

    #[test]
    fn derivative_of_constant_and_fixed_point_relation() {
        assert_eq!(Series::one_series(0).derivative(), Series::zero_series(0));

        // B = 1 + z B^2 implies z B'(1 - 2zB) = z B^2 exactly.
        let b2 = catalan_series(9);
        let zb_prime = b2.derivative().truncated(8).shift_up(1);
        let left = {
            let mut t = Series::one_series(8);
            t = &t - &b2.truncated(7).shift_up(1).scale_rat(&rat_int(2));
            &zb_prime * &t
        };
        let right = (&b2 * &b2).truncated(7).shift_up(1);
        assert_eq!(left.truncated(7), right.truncated(7));
    }

    #[test]
    fn composition_associativity() {
        let mut rng = crate::rng::SplitMix64::new(99);
        let n = 8;
        let mk = |rng: &mut crate::rng::SplitMix64, unit_const: bool| {
            let mut coeffs = vec![if unit_const { Rat::one() } else { Rat::zero() }];
            for _ in 0..n {
                coeffs.push(rng.next_rat(9, 5));
            }
            Series::from_coeffs(coeffs)
        };
        let a = mk(&mut rng, true);
        let b = mk(&mut rng, false);
        let c = mk(&mut rng, false);
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn exponential_view_round_trip() {
        let a = s(&[(0, 1), (1, 1), (3, 1), (5, 2)]);
        assert_eq!(a.exp_coeff(2), rat_int(6));
        let back = Series::from_exp_coeffs((0..=3).map(|n| a.exp_coeff(n)).collect());
        assert_eq!(back, a);
    }

    #[test]
    fn mixed_order_operations_narrow() {
        let a = Series::one_series(8);
        let b = Series::z(3);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!(a.compose(&b).unwrap().order(), 3);
    }

    #[test]
    fn json_shape() {
        let a = s(&[(1, 1), (-1, 2)]);
        assert_eq!(a.to_json(), "{\"order\": 1, \"coeffs\": [\"1\", \"-1/2\"]}");
    }
}
