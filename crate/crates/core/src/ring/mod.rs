//! Coefficient rings and sparse multivariate polynomials.

mod parse;
mod poly;
mod scalar;

pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub use poly::{Monomial, MultiPoly, PolyRing, PseudoDivision};
pub use scalar::{is_prime, CoeffRing, Field, Fp, NotPrime, Scalar};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("polynomials live in different rings: {left} vs {right}")]
    Mismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("`{0}` is not a valid variable name")]
    InvalidName(String),
    #[error("variable `{0}` has weight 0")]
    ZeroWeight(String),
    #[error("{vars} variables but {weights} weights")]
    WeightCount { vars: usize, weights: usize },
    #[error("divisor is zero or constant in `{0}`")]
    ConstantDivisor(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Reduces integer coefficients modulo `P`.
pub fn reduce_char<const P: u32>(f: &MultiPoly<BigInt>) -> MultiPoly<Fp<P>> {
    f.map_coeffs(Fp::<P>::from_integer)
}

/// Gcd of the coefficients, taken positive; zero for the zero polynomial.
pub fn content(f: &MultiPoly<BigInt>) -> BigInt {
    f.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
}

/// `f` divided by its content, with a positive leading coefficient.
pub fn primitive_part(f: &MultiPoly<BigInt>) -> MultiPoly<BigInt> {
    if f.is_zero() {
        return f.clone();
    }
    let mut g = content(f);
    if f.leading_term().is_some_and(|(_, c)| Signed::is_negative(c)) {
        g = -g;
    }
    f.map_coeffs(|c| c / &g)
}

/// Smallest positive multiple of `f` with integer coefficients, divided by its content.
pub fn clear_denominators(f: &MultiPoly<BigRational>) -> MultiPoly<BigInt> {
    let lcm = f.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let scaled = f.map_coeffs(|c| (c * BigRational::from_integer(lcm.clone())).to_integer());
    let g = content(&scaled);
    if g.is_zero() {
        scaled
    } else {
        scaled.map_coeffs(|c| c / &g)
    }
}

pub fn to_rational(f: &MultiPoly<BigInt>) -> MultiPoly<BigRational> {
    f.map_coeffs(|c| BigRational::from_integer(c.clone()))
}

/// Converts to integer coefficients, failing if some coefficient is not integral.
pub fn to_integer(f: &MultiPoly<BigRational>) -> Option<MultiPoly<BigInt>> {
    if f.terms().any(|(_, c)| !c.is_integer()) {
        return None;
    }
    Some(f.map_coeffs(|c| c.to_integer()))
}

/// Reads integer coefficients into any scalar type.
pub fn from_integer_poly<C: Scalar>(f: &MultiPoly<BigInt>) -> MultiPoly<C> {
    f.map_coeffs(C::from_integer)
}
