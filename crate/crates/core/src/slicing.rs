//! Restriction of an action groupoid to a slice and the per-component
//! equalizers whose intersection gives the invariants.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::action::{ActionError, ActionMap};
use crate::invariants::{common_kernel, integer_saturate, GradedBasis};
use crate::linalg::ExactField;
use crate::ring::{parse_poly, MultiPoly, PolyRing, RingError, Scalar};

/// The slice `W`: some source variables vanish, and each avoid-set lists
/// variables that may not vanish simultaneously on `W`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SliceSpec {
    pub vanish: Vec<String>,
    pub avoid: Vec<Vec<String>>,
}

impl SliceSpec {
    pub fn new<S: AsRef<str>>(vanish: &[S], avoid: &[&[S]]) -> Self {
        SliceSpec {
            vanish: vanish.iter().map(|s| s.as_ref().to_string()).collect(),
            avoid: avoid.iter().map(|set| set.iter().map(|s| s.as_ref().to_string()).collect()).collect(),
        }
    }
}

/// One irreducible component of the restricted groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceComponent<C: Scalar> {
    /// `(relation, leading variable)` in the mixed ring of the unrestricted action.
    pub relations: Vec<(MultiPoly<C>, usize)>,
    pub action: ActionMap<C>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicedGroupoid<C: Scalar> {
    pub slice: SliceSpec,
    pub components: Vec<SliceComponent<C>>,
    /// Polynomial ring on the surviving source variables.
    pub ring: Arc<PolyRing>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SliceError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("components {0} and {1} have the same relations")]
    DuplicateComponent(usize, usize),
    #[error("component {index}: {source}")]
    Component { index: usize, source: ActionError },
    #[error("relation {0} involves no group variable")]
    NoLead(String),
    #[error("slice specification: {0}")]
    Syntax(String),
    #[error("factor {0} is zero or constant")]
    BadFactor(String),
}

/// Default leading variable: the first group variable the relation involves.
pub fn default_lead<C: Scalar>(action: &ActionMap<C>, relation: &MultiPoly<C>) -> Result<usize, SliceError> {
    let s = action.source().nvars();
    (s..action.mixed().nvars())
        .find(|&v| relation.involves(v))
        .ok_or_else(|| SliceError::NoLead(relation.to_string()))
}

/// Builds the sliced groupoid from explicitly supplied components.
///
/// Each component is a list of relations with optional leading variables.
/// With no components supplied, the slice carries the single component
/// without relations.
pub fn build_slice<C: Scalar>(
    action: &ActionMap<C>,
    spec: &SliceSpec,
    components: &[Vec<(MultiPoly<C>, Option<usize>)>],
) -> Result<SlicedGroupoid<C>, SliceError> {
    let kill = spec.vanish.iter().map(|v| action.source().require(v)).collect::<Result<Vec<_>, _>>()?;
    for set in &spec.avoid {
        for v in set {
            action.source().require(v)?;
        }
    }
    let supplied: Vec<Vec<(MultiPoly<C>, Option<usize>)>> =
        if components.is_empty() { vec![Vec::new()] } else { components.to_vec() };
    let mut out = Vec::new();
    for (index, comp) in supplied.iter().enumerate() {
        let mut rels = Vec::new();
        for (p, lead) in comp {
            let p = p.with_ring(action.mixed()).or_else(|_| p.embed(action.mixed()))?;
            let lead = match lead {
                Some(v) => *v,
                None => default_lead(action, &p)?,
            };
            rels.push((p, lead));
        }
        for (j, prev) in out.iter().enumerate() {
            let prev: &SliceComponent<C> = prev;
            if same_relations(&prev.relations, &rels) {
                return Err(SliceError::DuplicateComponent(j, index));
            }
        }
        let restricted = action.restrict(&rels, &kill).map_err(|source| SliceError::Component { index, source })?;
        out.push(SliceComponent { relations: rels, action: restricted });
    }
    let ring = out[0].action.source().clone();
    Ok(SlicedGroupoid { slice: spec.clone(), components: out, ring })
}

fn same_relations<C: Scalar>(a: &[(MultiPoly<C>, usize)], b: &[(MultiPoly<C>, usize)]) -> bool {
    let assoc = |p: &MultiPoly<C>, q: &MultiPoly<C>| p.scalar_ratio(q).is_some() || q.scalar_ratio(p).is_some();
    a.len() == b.len()
        && a.iter().all(|(p, _)| b.iter().any(|(q, _)| assoc(p, q)))
        && b.iter().all(|(q, _)| a.iter().any(|(p, _)| assoc(p, q)))
}

pub fn component_equalizer_basis<F: ExactField>(c: &SliceComponent<F>, d: u32) -> GradedBasis<F> {
    crate::invariants::invariant_basis(&c.action, d)
}

/// Degree-`d` sections invariant on every component.
pub fn intersect_equalizers<F: ExactField>(g: &SlicedGroupoid<F>, d: u32) -> GradedBasis<F> {
    intersect_selected(g, d, &(0..g.components.len()).collect::<Vec<_>>())
}

/// Intersection over the listed components only, in the given order.
pub fn intersect_selected<F: ExactField>(g: &SlicedGroupoid<F>, d: u32, which: &[usize]) -> GradedBasis<F> {
    let monos = g.ring.graded_basis(d);
    let maps: Vec<Vec<MultiPoly<F>>> = which.iter().map(|&i| g.components[i].action.equalizer_columns(&monos)).collect();
    let kernel = common_kernel(monos.len(), &maps);
    let basis = kernel
        .iter()
        .map(|v| MultiPoly::from_terms(&g.ring, monos.iter().cloned().zip(v.iter().cloned())))
        .collect();
    GradedBasis { ring: g.ring.clone(), degree: d, basis }
}

/// Integer invariants on the slice: the rational intersection, saturated.
pub fn intersect_equalizers_integral(g: &SlicedGroupoid<BigRational>, d: u32) -> GradedBasis<BigInt> {
    integer_saturate(&intersect_equalizers(g, d))
}

/// Result of the associated-point test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport<C: Scalar> {
    /// The test polynomial is divisible by none of the factors.
    pub passed: bool,
    /// The pulled slice polynomial vanishes identically at this fiber.
    pub degenerate: bool,
    pub pulled_slice: MultiPoly<C>,
    pub pulled_test: MultiPoly<C>,
    /// Per factor: whether it divides the pulled test polynomial.
    pub divisible: Vec<bool>,
}

/// Checks that the pulled `test_poly` vanishes at none of the associated
/// points of the fiber of the pulled `slice_poly`, given as principal
/// factors. `fiber` lists source variables set to zero first.
pub fn flatness_check<C: Scalar>(
    action: &ActionMap<C>,
    fiber: &[&str],
    slice_poly: &MultiPoly<C>,
    factors: &[MultiPoly<C>],
    test_poly: &MultiPoly<C>,
) -> Result<FlatnessReport<C>, SliceError> {
    let kill = fiber.iter().map(|v| action.mixed().require(v)).collect::<Result<Vec<_>, _>>()?;
    let pulled_slice = action.act_on_poly(slice_poly)?.numerator.kill_vars(&kill);
    let pulled_test = action.act_on_poly(test_poly)?.numerator.kill_vars(&kill);
    let mut divisible = Vec::new();
    for g in factors {
        let g = g.with_ring(action.mixed()).or_else(|_| g.embed(action.mixed()))?;
        if g.is_constant() {
            return Err(SliceError::BadFactor(g.to_string()));
        }
        divisible.push(divides(&g, &pulled_test));
    }
    let degenerate = pulled_slice.is_zero();
    let passed = !degenerate && !divisible.iter().any(|&b| b);
    Ok(FlatnessReport { passed, degenerate, pulled_slice, pulled_test, divisible })
}

/// Divisibility by an irreducible `g`, decided by a zero pseudo-remainder.
pub fn divides<C: Scalar>(g: &MultiPoly<C>, f: &MultiPoly<C>) -> bool {
    if f.is_zero() {
        return true;
    }
    let v = (0..g.ring().nvars()).find(|&v| g.involves(v)).expect("non-constant factor");
    f.pseudo_divide_at(g, v).is_ok_and(|r| r.remainder.is_zero())
}

/// Parses `vanish: A1, C2 / avoid: {B1,C1}, {A2,B2} / components: [b; c], [c; A2*b+B2*d @ b]`.
///
/// Sections may appear in any order, be separated by `/` or newlines, and be
/// omitted. Inside a component, relations are separated by `;` and `@ v`
/// names the leading variable.
#[allow(clippy::type_complexity)]
pub fn parse_slice_spec<C: Scalar>(
    action: &ActionMap<C>,
    text: &str,
) -> Result<(SliceSpec, Vec<Vec<(MultiPoly<C>, Option<usize>)>>), SliceError> {
    const KEYS: [&str; 3] = ["vanish:", "avoid:", "components:"];
    let mut found: Vec<(usize, &str)> = KEYS.iter().filter_map(|k| text.find(k).map(|p| (p, *k))).collect();
    found.sort();
    if found.is_empty() && !text.trim().is_empty() {
        return Err(SliceError::Syntax("expected `vanish:`, `avoid:` or `components:`".into()));
    }
    if let Some((first, _)) = found.first() {
        if !text[..*first].trim().is_empty() {
            return Err(SliceError::Syntax(format!("unexpected `{}`", text[..*first].trim())));
        }
    }
    let mut spec = SliceSpec::default();
    let mut comps = Vec::new();
    for (i, (pos, key)) in found.iter().enumerate() {
        let end = found.get(i + 1).map_or(text.len(), |(p, _)| *p);
        let body = text[pos + key.len()..end].trim().trim_end_matches('/').trim();
        match *key {
            "vanish:" => spec.vanish = split_names(body),
            "avoid:" => {
                for group in braces(body, '{', '}')? {
                    spec.avoid.push(split_names(&group));
                }
            }
            _ => {
                for group in braces(body, '[', ']')? {
                    let mut rels = Vec::new();
                    for part in group.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                        let (expr, lead) = match part.split_once('@') {
                            Some((e, v)) => (e.trim(), Some(action.mixed().require(v.trim())?)),
                            None => (part, None),
                        };
                        let p = parse_poly(action.mixed(), expr).map_err(RingError::from)?;
                        rels.push((p, lead));
                    }
                    comps.push(rels);
                }
            }
        }
    }
    Ok((spec, comps))
}

fn split_names(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
}

fn braces(s: &str, open: char, close: char) -> Result<Vec<String>, SliceError> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix(open) else {
            return Err(SliceError::Syntax(format!("expected `{open}` at `{rest}`")));
        };
        let Some(end) = body.find(close) else {
            return Err(SliceError::Syntax(format!("missing `{close}`")));
        };
        out.push(body[..end].to_string());
        rest = body[end + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    Ok(out)
}
