//! Coefficient scalar abstraction.
//!
//! Everything in the series and matrix layers is written against [`Coeff`],
//! a commutative ring containing the rationals. The exact layer instantiates
//! it with [`Rat`], the numeric layer with `f64`, and the symbolic layers
//! with polynomial rings whose base field is `Rat`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::{Int, Rat};

/// A commutative ring with a canonical embedding of the rationals.
///
/// `try_inv` returns the multiplicative inverse when one exists in the
/// ring; polynomial rings only invert nonzero constants.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_rat(r: &Rat) -> Self;

    fn try_inv(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_rat(&Rat::from_integer(Int::from(n)))
    }

    /// Multiply by an exact rational scalar.
    fn scale_rat(&self, r: &Rat) -> Self {
        self.clone() * Self::from_rat(r)
    }

    /// Exact division by a nonzero integer (always possible: the ring
    /// contains the rationals).
    fn div_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero integer");
        self.scale_rat(&Rat::new(Int::one(), Int::from(n)))
    }
}

impl Coeff for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn scale_rat(&self, r: &Rat) -> Self {
        self * r
    }
}

impl Coeff for f64 {
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }

    fn try_inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

/// Convert an exact rational to the nearest `f64`, falling back to a
/// bit-length scaling when numerator or denominator overflow the direct
/// conversion.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() || r.numer().bits() < 1000 {
            return v;
        }
    }
    // Scale both parts down by a common power of two.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(64);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Natural logarithm of a positive rational, exact in structure even when
/// the value itself overflows `f64`.
pub fn rat_ln(r: &Rat) -> f64 {
    assert!(
        r.numer().sign() == num_bigint::Sign::Plus,
        "rat_ln of non-positive value"
    );
    big_ln(r.numer()) - big_ln(r.denom())
}

fn big_ln(x: &Int) -> f64 {
    let bits = x.bits();
    if bits <= 900 {
        x.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().unwrap();
        top.ln() + (shift as f64) * std::f64::consts::LN_2
    }
}
