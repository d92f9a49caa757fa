//! Exact sparse multivariate polynomials over ℚ and 𝔽_p.

mod jet;
mod monomial;
mod parse;
mod polynomial;
mod ring;

use thiserror::Error;

pub use jet::{
    hasse_schmidt, jet_index, jet_ring, jet_variable_name, order_along_jet, series_mul,
    series_order, substitute_numeric, substitute_series, JetOrder,
};
pub use monomial::Monomial;
pub use parse::{identifiers, parse_polynomial};
pub use polynomial::{compare_leading, Polynomial};
pub use ring::{inv_mod, is_prime, mul_mod, pow_mod, reduce_mod_p, Domain, MonomialOrder, Ring};

/// Exact rationals, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate or empty variable name `{0}`")]
    DuplicateVariable(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent")]
    NegativeExponent,
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),
    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
}
