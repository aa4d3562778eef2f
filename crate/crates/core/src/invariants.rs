//! Graded pieces of invariant rings as kernels of equalizer maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::action::ActionMap;
use crate::linalg::{self, ExactField, SparseVec};
use crate::ring::{self, Monomial, MultiPoly, PolyRing, RingError, Scalar};

/// Basis of the degree-`degree` invariants inside `ring`.
///
/// Over a field the basis is in reduced row echelon form with respect to the
/// descending graded-lex monomial order; over the integers it is the Hermite
/// normal form of a saturated lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis<C: Scalar> {
    pub ring: Arc<PolyRing>,
    pub degree: u32,
    pub basis: Vec<MultiPoly<C>>,
}

impl<C: Scalar> GradedBasis<C> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.ring.graded_basis(self.degree)
    }

    fn from_rows(ring: &Arc<PolyRing>, degree: u32, monos: &[Monomial], rows: Vec<Vec<C>>) -> Self {
        let basis = rows.into_iter().map(|r| vector_to_poly(ring, monos, &r)).collect();
        GradedBasis { ring: ring.clone(), degree, basis }
    }
}

impl<F: ExactField> GradedBasis<F> {
    /// Span membership over the field.
    pub fn contains(&self, f: &MultiPoly<F>) -> bool {
        if f.is_zero() {
            return true;
        }
        if !f.is_homogeneous_of(self.degree) {
            return false;
        }
        let monos = self.monomials();
        let mut rows: Vec<Vec<F>> = self.basis.iter().map(|b| poly_to_vector(b, &monos)).collect();
        let before = self.dim();
        rows.push(poly_to_vector(f, &monos));
        linalg::rank(&rows) == before
    }

    pub fn contains_span(&self, other: &[MultiPoly<F>]) -> bool {
        other.iter().all(|f| self.contains(f))
    }
}

impl GradedBasis<BigInt> {
    /// Membership in the integer lattice spanned by the basis.
    pub fn contains(&self, f: &MultiPoly<BigInt>) -> bool {
        if f.is_zero() {
            return true;
        }
        if !f.is_homogeneous_of(self.degree) {
            return false;
        }
        let monos = self.monomials();
        let mut rows: Vec<Vec<BigInt>> = self.basis.iter().map(|b| poly_to_vector(b, &monos)).collect();
        let before = linalg::hermite_normal_form(&rows);
        rows.push(poly_to_vector(f, &monos));
        linalg::hermite_normal_form(&rows) == before
    }
}

/// Coefficient vector over `monos`; terms outside `monos` are ignored.
pub fn poly_to_vector<C: Scalar>(f: &MultiPoly<C>, monos: &[Monomial]) -> Vec<C> {
    monos.iter().map(|m| f.coefficient(m)).collect()
}

pub fn vector_to_poly<C: Scalar>(ring: &Arc<PolyRing>, monos: &[Monomial], v: &[C]) -> MultiPoly<C> {
    MultiPoly::from_terms(ring, monos.iter().cloned().zip(v.iter().cloned()))
}

/// Shared kernel of several linear maps given column by column.
///
/// `maps[k][j]` is the image of basis vector `j` under map `k`; images of
/// different maps are never combined.
pub fn common_kernel<F: ExactField>(ncols: usize, maps: &[Vec<MultiPoly<F>>]) -> Vec<Vec<F>> {
    let mut rows: BTreeMap<(usize, Monomial), SparseVec<F>> = BTreeMap::new();
    for (k, cols) in maps.iter().enumerate() {
        for (j, col) in cols.iter().enumerate() {
            for (m, c) in col.terms() {
                rows.entry((k, m.clone())).or_default().push((j, c.clone()));
            }
        }
    }
    F::null_space(ncols, rows.into_values())
}

/// Degree-`d` invariants of `action`, computed in its source ring.
pub fn invariant_basis<F: ExactField>(action: &ActionMap<F>, d: u32) -> GradedBasis<F> {
    let monos = action.source().graded_basis(d);
    let cols = action.equalizer_columns(&monos);
    let kernel = common_kernel(monos.len(), &[cols]);
    GradedBasis::from_rows(action.source(), d, &monos, kernel)
}

pub fn hilbert_function<F: ExactField>(action: &ActionMap<F>, d_max: u32) -> Vec<usize> {
    (0..=d_max).map(|d| invariant_basis(action, d).dim()).collect()
}

/// Saturated integer lattice `span_Q(basis) ∩ Z[x]_d`, in Hermite normal form.
pub fn integer_saturate(basis: &GradedBasis<BigRational>) -> GradedBasis<BigInt> {
    let monos = basis.monomials();
    let sat = saturate_on(&basis.basis, &monos);
    GradedBasis { ring: basis.ring.clone(), degree: basis.degree, basis: sat }
}

/// The same saturation for polynomials supported on `monos`.
pub fn saturate_on(polys: &[MultiPoly<BigRational>], monos: &[Monomial]) -> Vec<MultiPoly<BigInt>> {
    let Some(first) = polys.first() else {
        return Vec::new();
    };
    let rows: Vec<Vec<BigInt>> = polys.iter().map(|b| poly_to_vector(&ring::clear_denominators(b), monos)).collect();
    linalg::saturate(&rows).iter().map(|r| vector_to_poly(first.ring(), monos, r)).collect()
}

/// Re-saturates an integer basis; a saturated basis comes back unchanged.
pub fn integer_resaturate(basis: &GradedBasis<BigInt>) -> GradedBasis<BigInt> {
    let monos = basis.monomials();
    let rows: Vec<Vec<BigInt>> = basis.basis.iter().map(|b| poly_to_vector(b, &monos)).collect();
    let sat = if rows.is_empty() { rows } else { linalg::saturate(&rows) };
    GradedBasis::from_rows(&basis.ring, basis.degree, &monos, sat)
}

/// Integer lattice spanned by the given degree-`d` polynomials, in Hermite normal form.
pub fn integer_span(ring: &Arc<PolyRing>, d: u32, polys: &[MultiPoly<BigInt>]) -> GradedBasis<BigInt> {
    let monos = ring.graded_basis(d);
    let rows: Vec<Vec<BigInt>> = polys.iter().map(|b| poly_to_vector(b, &monos)).collect();
    let h = if rows.is_empty() { rows } else { linalg::hermite_normal_form(&rows) };
    GradedBasis::from_rows(ring, d, &monos, h)
}

/// Span over a field of the given degree-`d` polynomials, in reduced echelon form.
pub fn field_span<F: ExactField>(ring: &Arc<PolyRing>, d: u32, polys: &[MultiPoly<F>]) -> GradedBasis<F> {
    let monos = ring.graded_basis(d);
    let rows: Vec<Vec<F>> = polys.iter().map(|b| poly_to_vector(b, &monos)).collect();
    GradedBasis::from_rows(ring, d, &monos, linalg::rref(&rows))
}

/// Dimension of the span of `polys`, all supported on `monos`.
pub fn span_rank<F: ExactField>(polys: &[MultiPoly<F>], monos: &[Monomial]) -> usize {
    let mut seen = std::collections::HashSet::new();
    let rows: Vec<Vec<F>> = polys.iter().filter(|p| seen.insert(*p)).map(|p| poly_to_vector(p, monos)).collect();
    linalg::rank(&rows)
}

/// Named homogeneous generators and relations among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation<C: Scalar> {
    /// Polynomial ring on the generator names, weighted by generator degree.
    pub symbols: Arc<PolyRing>,
    pub generators: Vec<MultiPoly<C>>,
    pub relations: Vec<MultiPoly<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("generator `{0}` is not homogeneous of positive degree")]
    BadGenerator(String),
    #[error("generators live in different rings")]
    MixedRings,
}

impl<C: Scalar> Presentation<C> {
    pub fn new(names: &[&str], generators: Vec<MultiPoly<C>>) -> Result<Self, PresentationError> {
        let mut weights = Vec::new();
        for (n, g) in names.iter().zip(&generators) {
            match g.homogeneous_degree() {
                Some(d) if d > 0 => weights.push(d),
                _ => return Err(PresentationError::BadGenerator(n.to_string())),
            }
        }
        if generators.windows(2).any(|w| !w[0].same_ring(&w[1])) || generators.is_empty() {
            return Err(PresentationError::MixedRings);
        }
        let symbols = PolyRing::with_weights(names.iter().copied(), weights)?;
        Ok(Presentation { symbols, generators, relations: Vec::new() })
    }

    pub fn target(&self) -> &Arc<PolyRing> {
        self.generators[0].ring()
    }

    /// Substitutes the generators into a polynomial in the generator symbols.
    pub fn evaluate(&self, f: &MultiPoly<C>) -> MultiPoly<C> {
        f.compose(self.target(), &self.generators)
    }

    /// Every stored relation expands to zero.
    pub fn relations_hold(&self) -> bool {
        self.relations.iter().all(|r| self.evaluate(r).is_zero())
    }

    /// Products of generators of total degree `d`, expanded.
    pub fn products(&self, d: u32) -> Vec<MultiPoly<C>> {
        let monos = self.symbols.graded_basis(d);
        monos.iter().map(|m| self.evaluate(&MultiPoly::monomial(&self.symbols, m.clone()))).collect()
    }
}

impl<F: ExactField> Presentation<F> {
    /// Span of the degree-`d` generator products, i.e. the degree-`d` part of
    /// the subalgebra the generators produce.
    pub fn span(&self, d: u32) -> GradedBasis<F> {
        field_span(self.target(), d, &self.products(d))
    }

    /// Replaces the relations by all relations of the given degrees.
    pub fn with_relations_through(mut self, degrees: impl IntoIterator<Item = u32>) -> Self {
        let mut rels = Vec::new();
        for d in degrees {
            rels.extend(relation_search(&self, d));
        }
        self.relations = rels;
        self
    }
}

/// Basis of the kernel of the evaluation map from degree-`d` polynomials in
/// the generator symbols to the target ring.
pub fn relation_search<F: ExactField>(p: &Presentation<F>, d: u32) -> Vec<MultiPoly<F>> {
    let monos = p.symbols.graded_basis(d);
    let images = p.products(d);
    let kernel = common_kernel(monos.len(), &[images]);
    kernel.iter().map(|v| vector_to_poly(&p.symbols, &monos, v)).collect()
}

/// Number of monomials of weighted degree `d`, by direct counting.
pub fn monomial_count(weights: &[u32], d: u32) -> usize {
    let mut ways = vec![0usize; d as usize + 1];
    ways[0] = 1;
    for &w in weights {
        for t in w as usize..=d as usize {
            ways[t] += ways[t - w as usize];
        }
    }
    ways[d as usize]
}
