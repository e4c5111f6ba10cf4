//! Exact-arithmetic toolkit for convolution polynomial families.
//!
//! A family of polynomials `F_0(x), F_1(x), ...` with `deg F_n <= n` is a
//! *convolution family* when `F_n(x+y) = sum_k F_k(x) F_{n-k}(y)` for all
//! `x`, `y`, `n`; equivalently `F_n(x) = [z^n] F(z)^x` for a power series
//! with `F(0) = 1`. This crate builds such families from their log series,
//! verifies the defining and derived identities exactly over arbitrary
//! precision rationals, manipulates the associated lower-triangular
//! coefficient matrices (composition, fractional iteration, reversion,
//! extension to negative indices), and approximates `F_n(x)` for large `x`
//! by a saddle-point formula with an exact ratio power series.
//!
//! Core arithmetic is generic over the coefficient scalar via the
//! [`Coeff`](coeff::Coeff)
//! trait, so the same series code runs over [`Rat`] (exact), [`f64`]
//! (numeric evaluation), univariate polynomials (parametrized matrix
//! powers) and small multivariate polynomials (identities with symbolic
//! series coefficients). Concrete aliases for the common instantiations
//! live at the crate root.

//! # Example
//!
//! ```
//! use convpoly::family::{catalog, check_convolution};
//! use convpoly::triangle::{iterate_series, ConvolutionTriangle};
//! use convpoly::{rat, rat_int};
//!
//! // Bell numbers: the family of exp(x (e^z - 1))
//! let bell = catalog("bell", 8, None)?;
//! assert!(num_traits::Zero::is_zero(&check_convolution(
//!     &bell, 5, &rat(1, 2), &rat(-3, 7),
//! )));
//!
//! // its coefficient matrix holds the Stirling subset numbers
//! let f = bell.log_series();
//! let matrix = ConvolutionTriangle::from_series(&f, 8)?;
//! assert_eq!(matrix.entry(4, 2), rat_int(7));
//!
//! // functional square root of e^z - 1
//! let half = iterate_series(&f, &rat(1, 2), 8)?;
//! assert_eq!(half.coeff(2), rat(1, 4));
//! # Ok::<(), convpoly::Error>(())
//! ```

// Index loops are kept where they mirror convolution/triangle index
// arithmetic (coeffs[n-j], 1-based f_{nk}); iterator forms read worse.
#![allow(clippy::needless_range_loop)]

pub mod asympt;
pub mod coeff;
pub mod family;
pub mod mpoly;
pub mod poly;
pub mod rng;
pub mod series;
pub mod triangle;
pub mod util;

mod error;

pub use error::{Error, Result};

/// Arbitrary-precision rational scalar used by the exact layer.
pub type Rat = num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;

/// Truncated power series with exact rational coefficients.
pub type Series = series::TruncatedSeries<Rat>;

/// Truncated power series with double-precision coefficients.
pub type SeriesF = series::TruncatedSeries<f64>;

/// Dense univariate polynomial with exact rational coefficients.
pub type XPoly = poly::XPolynomial<Rat>;

/// Convenience constructor for an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Convenience constructor for an exact rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(Int::from(num))
}
