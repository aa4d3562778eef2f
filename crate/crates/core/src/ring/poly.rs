use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::scalar::{CoeffRing, Scalar};
use super::RingError;

/// Variables with names and positive integer grading weights.
///
/// The declared order of the variables fixes the graded-lexicographic
/// monomial order used everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
    weights: Vec<u32>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric())
}

impl PolyRing {
    /// Ring with every variable of weight one.
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>, RingError> {
        let names: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        let weights = vec![1; names.len()];
        Self::with_weights(names, weights)
    }

    pub fn with_weights<S: AsRef<str>>(
        names: impl IntoIterator<Item = S>,
        weights: impl IntoIterator<Item = u32>,
    ) -> Result<Arc<Self>, RingError> {
        let names: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        let weights: Vec<u32> = weights.into_iter().collect();
        if names.len() != weights.len() {
            return Err(RingError::WeightCount { vars: names.len(), weights: weights.len() });
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(RingError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(RingError::DuplicateVariable(name.clone()));
            }
            if weights[i] == 0 {
                return Err(RingError::ZeroWeight(name.clone()));
            }
        }
        Ok(Arc::new(PolyRing { names, weights }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, RingError> {
        self.index_of(name).ok_or_else(|| RingError::UnknownVariable(name.to_string()))
    }

    pub fn monomial(&self, exps: impl Into<Box<[u32]>>) -> Monomial {
        let exps = exps.into();
        assert_eq!(exps.len(), self.nvars(), "exponent vector length does not match the ring");
        let degree = exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum();
        Monomial { degree, exps }
    }

    pub fn one_monomial(&self) -> Monomial {
        self.monomial(vec![0; self.nvars()])
    }

    pub fn var_monomial(&self, index: usize) -> Monomial {
        let mut exps = vec![0; self.nvars()];
        exps[index] = 1;
        self.monomial(exps)
    }

    /// All monomials of weighted degree exactly `d`, in descending graded-lex order.
    pub fn graded_basis(&self, d: u32) -> Vec<Monomial> {
        let n = self.nvars();
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        self.enumerate_into(0, d, &mut exps, &mut out);
        out
    }

    // Variables are filled left to right with the largest exponent first,
    // which produces the lexicographically descending order directly.
    fn enumerate_into(&self, i: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = self.nvars();
        if i == n {
            if remaining == 0 {
                out.push(self.monomial(exps.clone()));
            }
            return;
        }
        let w = self.weights[i];
        for e in (0..=remaining / w).rev() {
            exps[i] = e;
            self.enumerate_into(i + 1, remaining - e * w, exps, out);
        }
        exps[i] = 0;
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (n, w)) in self.names.iter().zip(&self.weights).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if *w == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}:{w}")?;
            }
        }
        write!(f, "]")
    }
}

/// Exponent vector together with its weighted degree.
///
/// The derived order compares degree first, then exponents lexicographically,
/// which is the graded-lex order with the first variable largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.exps[index]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial { degree: self.degree + other.degree, exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| b - a).collect();
        Monomial { degree: other.degree - self.degree, exps }
    }

    /// Copy with one exponent replaced; `weight` is that variable's weight.
    fn with_exp(&self, index: usize, e: u32, weight: u32) -> Monomial {
        let mut exps = self.exps.clone();
        let old = exps[index];
        exps[index] = e;
        Monomial { degree: self.degree - old * weight + e * weight, exps }
    }
}

/// Quotient and remainder of a pseudo-division: `lc^lc_power * f = quotient * g + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoDivision<C: Scalar> {
    pub quotient: MultiPoly<C>,
    pub remainder: MultiPoly<C>,
    pub lc_power: u32,
}

/// Sparse multivariate polynomial in canonical form: no zero coefficients,
/// terms keyed by monomial in graded-lex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<C: Scalar> {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        MultiPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: C) -> Self {
        Self::term(ring, ring.one_monomial(), c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, C::one())
    }

    pub fn var(ring: &Arc<PolyRing>, name: &str) -> Result<Self, RingError> {
        Ok(Self::var_at(ring, ring.require(name)?))
    }

    pub fn var_at(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::term(ring, ring.var_monomial(index), C::one())
    }

    pub fn term(ring: &Arc<PolyRing>, m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial) -> Self {
        Self::term(ring, m, C::one())
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn coeff_ring(&self) -> CoeffRing {
        C::coeff_ring()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&self.ring.one_monomial())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Maximal weighted degree of a term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// The common degree of all terms, if the polynomial is homogeneous.
    /// The zero polynomial is homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    fn check_ring(&self, other: &Self) -> Result<(), RingError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(RingError::Mismatch { left: self.ring.to_string(), right: other.ring.to_string() })
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul_ref(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, x)| {
                let y = x.mul_ref(c);
                (!y.is_zero()).then(|| (m.clone(), y))
            })
            .collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Same terms, reinterpreted in an identical ring with a different handle.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Result<Self, RingError> {
        if **ring != *self.ring {
            return Err(RingError::Mismatch { left: self.ring.to_string(), right: ring.to_string() });
        }
        Ok(MultiPoly { ring: ring.clone(), terms: self.terms.clone() })
    }

    /// Maps each variable to the variable of the same name in `target`.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<Self, RingError> {
        let map: Vec<usize> =
            self.ring.names().iter().map(|n| target.require(n)).collect::<Result<_, _>>()?;
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.nvars()];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[map[i]] += e;
            }
            out.add_term(target.monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Drops variables that do not occur, moving into `target` by name.
    /// Fails if a variable that occurs has no counterpart in `target`.
    pub fn restrict_to(&self, target: &Arc<PolyRing>) -> Result<Self, RingError> {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.nvars()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    exps[target.require(self.ring.name(i))?] = e;
                }
            }
            out.add_term(target.monomial(exps), c.clone());
        }
        Ok(out)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    /// Coefficients as a polynomial in `var`: entry `k` multiplies `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let w = self.ring.weights()[var];
        let mut out = vec![Self::zero(&self.ring); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            let k = m.exp(var) as usize;
            out[k].terms.insert(m.with_exp(var, 0, w), c.clone());
        }
        out
    }

    /// Sets the listed variables to zero.
    pub fn kill_vars(&self, vars: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| vars.iter().all(|&v| m.exp(v) == 0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    /// Substitutes `value` for the variable `var`.
    pub fn substitute(&self, var: usize, value: &Self) -> Self {
        // Horner in `var`.
        let mut acc = Self::zero(&self.ring);
        for c in self.coefficients_in(var).into_iter().rev() {
            acc = &(&acc * value) + &c;
        }
        acc
    }

    /// Ring map sending variable `i` to `images[i]`, all in the ring `target`.
    pub fn compose(&self, target: &Arc<PolyRing>, images: &[Self]) -> Self {
        assert_eq!(images.len(), self.ring.nvars(), "one image per variable is required");
        let mut powers: Vec<Vec<Self>> = images.iter().map(|g| vec![Self::one(target), g.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            for (k, v) in t.terms {
                out.add_term(k, v);
            }
        }
        out
    }

    /// Evaluates at a point with one coordinate per variable.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                for _ in 0..e {
                    t = t.mul_ref(x);
                }
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Pseudo-division by `divisor` as polynomials in the variable `var`.
    pub fn pseudo_divide(&self, divisor: &Self, var: &str) -> Result<PseudoDivision<C>, RingError> {
        let v = self.ring.require(var)?;
        self.pseudo_divide_at(divisor, v)
    }

    pub fn pseudo_divide_at(&self, divisor: &Self, var: usize) -> Result<PseudoDivision<C>, RingError> {
        self.check_ring(divisor)?;
        let m = divisor.degree_in(var);
        if divisor.is_zero() || m == 0 {
            return Err(RingError::ConstantDivisor(self.ring.name(var).to_string()));
        }
        let w = self.ring.weights()[var];
        let lc = divisor.coefficients_in(var).pop().expect("positive degree");
        let mut quotient = Self::zero(&self.ring);
        let mut remainder = self.clone();
        let mut lc_power = 0;
        while !remainder.is_zero() && remainder.degree_in(var) >= m {
            let k = remainder.degree_in(var);
            let top = remainder.coefficients_in(var).pop().expect("nonzero");
            let shift = self.ring.one_monomial().with_exp(var, k - m, w);
            let s = top.mul_monomial(&shift);
            remainder = &(&lc * &remainder) - &(&s * divisor);
            quotient = &(&lc * &quotient) + &s;
            lc_power += 1;
        }
        Ok(PseudoDivision { quotient, remainder, lc_power })
    }

    /// Exact quotient `self / divisor` if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if !self.same_ring(divisor) || divisor.is_zero() {
            return None;
        }
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut q = Self::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let coeff = c.div_exact(&lc)?;
            let t = Self::term(&self.ring, lm.quotient_of(&m), coeff);
            rem = &rem - &(&t * divisor);
            q = &q + &t;
        }
        Some(q)
    }

    /// `Some(c)` when `self == c * other` for a scalar `c`.
    pub fn scalar_ratio(&self, other: &Self) -> Option<C> {
        if !self.same_ring(other) || self.len() != other.len() {
            return None;
        }
        let (m, a) = self.leading_term()?;
        let b = other.terms.get(m)?;
        let c = a.div_exact(b)?;
        (other.scale(&c) == *self).then_some(c)
    }
}

impl<C: Scalar> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}{}", self, self.coeff_ring(), self.ring)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<C: Scalar> $tr<&MultiPoly<C>> for &MultiPoly<C> {
            type Output = MultiPoly<C>;
            /// Panics when the operands live in different rings; use the
            /// `try_` methods to handle a mismatch.
            fn $method(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<C: Scalar> $tr for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<C: Scalar> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }
}

impl<C: Scalar> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        -&self
    }
}
