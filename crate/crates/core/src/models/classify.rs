//! Stability of a pair of binary quadratic forms.

use std::fmt;
use std::sync::Arc;

use crate::action::ActionMap;
use crate::ring::{parse_poly, Field, MultiPoly, ParseError, PolyRing, Scalar};

use super::kontsevich::{classical_invariants, source_ring};

/// `(s1, s2)` stored as coefficients `[A1, B1, C1, A2, B2, C2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionPair<F: Scalar> {
    pub coeffs: [F; 6],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("`{0}` is not a quadratic form in x, y")]
    NotQuadratic(String),
}

impl<F: Scalar> SectionPair<F> {
    /// Reads two quadratic forms in `x, y`.
    pub fn parse(s1: &str, s2: &str) -> Result<Self, FormError> {
        let ring = PolyRing::new(["x", "y"]).expect("valid names");
        let [a1, b1, c1] = quadratic_coeffs::<F>(&ring, s1)?;
        let [a2, b2, c2] = quadratic_coeffs::<F>(&ring, s2)?;
        Ok(SectionPair { coeffs: [a1, b1, c1, a2, b2, c2] })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

fn quadratic_coeffs<F: Scalar>(ring: &Arc<PolyRing>, text: &str) -> Result<[F; 3], FormError> {
    let f: MultiPoly<F> = parse_poly(ring, text)?;
    if !f.is_homogeneous_of(2) {
        return Err(FormError::NotQuadratic(text.to_string()));
    }
    let c = |e: [u32; 2]| f.coefficient(&ring.monomial(e.to_vec()));
    Ok([c([2, 0]), c([1, 1]), c([0, 2])])
}

impl<F: Field> SectionPair<F> {
    /// Image of the pair under the group element `(a, b, c, d)`.
    ///
    /// Returns `None` when the element is singular.
    pub fn transform(&self, action: &ActionMap<F>, g: [F; 4]) -> Option<Self> {
        let mut point: Vec<F> = self.coeffs.to_vec();
        point.extend(g);
        let det = action.det().eval(&point);
        let inv = det.inv()?;
        let coeffs = std::array::from_fn(|i| {
            let img = &action.images()[i];
            let mut v = img.numerator.eval(&point);
            for _ in 0..img.powers[0] {
                v = v.mul_ref(&inv);
            }
            v
        });
        Some(SectionPair { coeffs })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    Unstable,
    StrictlySemistable,
    ProperlyStable,
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityClass::Unstable => "unstable",
            StabilityClass::StrictlySemistable => "strictly-semistable",
            StabilityClass::ProperlyStable => "properly-stable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification<F: Scalar> {
    pub class: StabilityClass,
    /// Invariants evaluated at the pair, by name.
    pub values: Vec<(&'static str, F)>,
    /// Both forms are zero, which is classified unstable by convention.
    pub zero_pair: bool,
}

/// Classifies a pair over the algebraic closure of `F`.
///
/// The pair is unstable when every invariant of positive degree vanishes.
/// In odd or zero characteristic the invariants are generated by the two
/// discriminants and `Gamma`; in characteristic two by `B1`, `B2` and
/// `Lambda`. A semistable pair is properly stable iff `Lambda` is nonzero.
pub fn classify_point<F: Field>(p: &SectionPair<F>) -> Classification<F> {
    let ring = source_ring();
    let inv = classical_invariants::<F>(&ring);
    let at = |f: &MultiPoly<F>| f.eval(&p.coeffs);
    let lambda = at(&inv.lambda);
    let char2 = F::coeff_ring().characteristic() == 2;
    let (values, semistable) = if char2 {
        let b1 = p.coeffs[1].clone();
        let b2 = p.coeffs[4].clone();
        let ss = !(b1.is_zero() && b2.is_zero() && lambda.is_zero());
        (vec![("B1", b1), ("B2", b2), ("Lambda", lambda.clone())], ss)
    } else {
        let d1 = at(&inv.delta1);
        let d2 = at(&inv.delta2);
        let g = at(&inv.gamma);
        let ss = !(d1.is_zero() && d2.is_zero() && g.is_zero());
        (vec![("Delta1", d1), ("Delta2", d2), ("Gamma", g), ("Lambda", lambda.clone())], ss)
    };
    let class = if !semistable {
        StabilityClass::Unstable
    } else if lambda.is_zero() {
        StabilityClass::StrictlySemistable
    } else {
        StabilityClass::ProperlyStable
    };
    Classification { class, values, zero_pair: p.is_zero() }
}
