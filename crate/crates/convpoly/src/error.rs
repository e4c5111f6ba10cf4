use std::fmt;

/// Errors reported by series, matrix and asymptotics operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation required a zero constant term (exp, compose inner).
    ConstantTermNotZero,
    /// An operation required a unit constant term (log, pow, inverse).
    ConstantTermNotOne,
    /// The leading coefficient is zero, so no compositional inverse exists.
    ZeroLinearCoefficient,
    /// The operation is only defined for series with `f'(0) = 1`
    /// (unit-diagonal convolution matrices).
    LinearCoefficientNotOne,
    /// The constant term (or leading scalar) has no multiplicative inverse
    /// in the coefficient ring.
    NotInvertible,
    /// Name not present in the family catalog.
    UnknownFamily(String),
    /// The catalog family requires a parameter that was not supplied.
    MissingParameter(&'static str),
    /// Invalid argument described by the message.
    InvalidArgument(String),
    /// Newton iteration for the saddle point failed to converge; the
    /// payload carries the last iterate.
    SaddleDiverged { last: f64, residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ConstantTermNotZero => {
                write!(f, "series must have zero constant term")
            }
            Error::ConstantTermNotOne => {
                write!(f, "series must have constant term 1")
            }
            Error::ZeroLinearCoefficient => {
                write!(
                    f,
                    "series has zero linear coefficient; no compositional inverse"
                )
            }
            Error::LinearCoefficientNotOne => {
                write!(f, "operation requires f'(0) = 1 (unit diagonal)")
            }
            Error::NotInvertible => {
                write!(f, "coefficient is not invertible in its ring")
            }
            Error::UnknownFamily(name) => write!(f, "unknown family: {name}"),
            Error::MissingParameter(p) => write!(f, "family requires parameter {p}"),
            Error::InvalidArgument(msg) => write!(f, "{msg}"),
            Error::SaddleDiverged { last, residual } => write!(
                f,
                "saddle-point iteration did not converge (last s = {last}, residual = {residual})"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
