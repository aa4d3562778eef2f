//! Exact coefficient types.
//!
//! Polynomial code is generic over [`Scalar`]; three families implement it:
//! arbitrary-precision integers, reduced rationals, and prime fields `Fp<P>`
//! with the modulus fixed at compile time.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Tag describing the coefficient ring of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Integer,
    Rational,
    PrimeField(u32),
}

impl CoeffRing {
    /// Validates a runtime prime modulus (`p < 2^31`, checked by trial division).
    pub fn prime_field(p: u64) -> Result<Self, NotPrime> {
        if p < (1 << 31) && is_prime(p as u32) {
            Ok(CoeffRing::PrimeField(p as u32))
        } else {
            Err(NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            CoeffRing::Integer | CoeffRing::Rational => 0,
            CoeffRing::PrimeField(p) => p,
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integer => write!(f, "Z"),
            CoeffRing::Rational => write!(f, "Q"),
            CoeffRing::PrimeField(2) => write!(f, "F2"),
            CoeffRing::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0} is not a prime below 2^31")]
pub struct NotPrime(pub u64);

/// Trial division primality test, usable in constant evaluation.
pub const fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// An exact commutative coefficient ring.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn coeff_ring() -> CoeffRing;

    /// Image of an integer under the canonical map `Z -> Self`.
    fn from_integer(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }

    /// `num / den` if it exists in this ring.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;

    /// Exact quotient `self / other`, when `other` divides `self`.
    fn div_exact(&self, other: &Self) -> Option<Self>;

    /// Whether the canonical printed form carries a leading minus sign.
    fn is_negative_sign(&self) -> bool;

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn is_unit(&self) -> bool {
        Self::one().div_exact(self).is_some()
    }
}

/// A [`Scalar`] in which every nonzero element is invertible.
pub trait Field: Scalar + Div<Output = Self> {
    fn inv(&self) -> Option<Self>;
}

impl Scalar for BigInt {
    fn coeff_ring() -> CoeffRing {
        CoeffRing::Integer
    }

    fn from_integer(n: &BigInt) -> Self {
        n.clone()
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (q, r) = num.div_rem(den);
        r.is_zero().then_some(q)
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        Self::from_ratio(self, other)
    }

    fn is_negative_sign(&self) -> bool {
        Signed::is_negative(self)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

impl Scalar for BigRational {
    fn coeff_ring() -> CoeffRing {
        CoeffRing::Rational
    }

    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        (!den.is_zero()).then(|| BigRational::new(num.clone(), den.clone()))
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }

    fn is_negative_sign(&self) -> bool {
        Signed::is_negative(self)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

/// Element of the prime field with `P` elements, stored in `[0, P)`.
///
/// Instantiating `Fp<P>` with a composite `P` (or `P >= 2^31`) fails to compile.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const VALID_MODULUS: () = assert!(P < (1 << 31) && is_prime(P), "modulus must be a prime below 2^31");

    pub fn new(value: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::VALID_MODULUS;
        Fp((value % P as u64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub const fn modulus() -> u32 {
        P
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::new(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp::new(self.0 as u64 + rhs.0 as u64)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp::new(self.0 as u64 + P as u64 - rhs.0 as u64)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp::new(self.0 as u64 * rhs.0 as u64)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp::new(P as u64 - self.0 as u64)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in prime field")
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u32> Scalar for Fp<P> {
    fn coeff_ring() -> CoeffRing {
        CoeffRing::PrimeField(P)
    }

    fn from_integer(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(P));
        Fp::new(r.to_u64().expect("residue fits in u64"))
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        let d = Self::from_integer(den);
        d.inv().map(|d| Self::from_integer(num) * d)
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| *self * i)
    }

    fn is_negative_sign(&self) -> bool {
        false
    }

    fn is_unit(&self) -> bool {
        self.0 != 0
    }
}

impl<const P: u32> Field for Fp<P> {
    fn inv(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P as u64 - 2))
    }
}
