//! Graded rings of invariants for linear group actions, computed by slicing
//! the action groupoid and intersecting per-component equalizers.
//!
//! All arithmetic is exact. The polynomial and linear-algebra core is generic
//! over the coefficient type; the aliases below name the three instances used
//! in practice.

pub mod action;
pub mod invariants;
pub mod linalg;
pub mod models;
pub mod ring;
pub mod slicing;

pub use ring::{CoeffRing, Field, Fp, Monomial, MultiPoly, PolyRing, Scalar};

pub type Integer = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;
pub type F2 = Fp<2>;

pub type IntPoly = MultiPoly<Integer>;
pub type RatPoly = MultiPoly<Rational>;
pub type F2Poly = MultiPoly<F2>;
