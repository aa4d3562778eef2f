use gslice::invariants::{invariant_basis, saturate_on};
use gslice::linalg::ExactField;
use gslice::models::kontsevich::{classical_invariants, kontsevich_action, kontsevich_slice, restrict_to_slice};
use gslice::models::ordered_points::{hmsv_first_slice, invariants_on, multigraded_basis, ordered_points_action};
use gslice::ring::{clear_denominators, primitive_part, to_integer, MultiPoly, Scalar};
use gslice::slicing::intersect_equalizers;
use gslice::{Integer, Monomial, Rational};

use crate::field::{dispatch, FieldJob, FieldTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Kontsevich,
    OrderedPoints(usize),
}

impl std::str::FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "kontsevich" {
            return Ok(Model::Kontsevich);
        }
        if let Some(n) = s.strip_prefix("ordered-points:") {
            let n: usize = n.parse().map_err(|_| format!("bad point count in `{s}`"))?;
            if n < 2 {
                return Err("ordered-points needs at least 2 points".into());
            }
            return Ok(Model::OrderedPoints(n));
        }
        Err(format!("unknown model `{s}` (expected kontsevich or ordered-points:<n>)"))
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::Kontsevich => write!(f, "kontsevich"),
            Model::OrderedPoints(n) => write!(f, "ordered-points:{n}"),
        }
    }
}

/// One report line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeLine {
    pub degree: u32,
    pub basis: Vec<String>,
}

/// One degree: the support monomials and a basis of the invariants on them.
struct Degree<F: ExactField> {
    d: u32,
    monos: Vec<Monomial>,
    basis: Vec<MultiPoly<F>>,
}

/// Bases per degree together with the named invariants used to label them.
struct Computed<F: ExactField> {
    bases: Vec<Degree<F>>,
    names: Vec<(String, MultiPoly<F>)>,
}

struct Job {
    model: Model,
    sliced: bool,
    max_degree: u32,
}

impl FieldJob for Job {
    type Output = Result<Vec<DegreeLine>, String>;

    fn run<F: ExactField>(self) -> Self::Output {
        let c = compute_over::<F>(self.model, self.sliced, self.max_degree)?;
        Ok(c.bases.iter().map(|b| DegreeLine { degree: b.d, basis: label(&b.basis, &c.names) }).collect())
    }
}

pub fn compute(model: Model, field: FieldTag, max_degree: u32, sliced: bool) -> Result<Vec<DegreeLine>, String> {
    if !matches!(field, FieldTag::Z | FieldTag::Q) {
        return dispatch(field, Job { model, sliced, max_degree });
    }
    let c = compute_over::<Rational>(model, sliced, max_degree)?;
    let names: Vec<(String, MultiPoly<Integer>)> =
        c.names.iter().filter_map(|(n, p)| to_integer(p).map(|q| (n.clone(), q))).collect();
    Ok(c.bases
        .iter()
        .map(|b| {
            let basis = if field == FieldTag::Z {
                // The rational answer, saturated in the integer lattice.
                saturate_on(&b.basis, &b.monos)
            } else {
                // Echelon rows shown as primitive integer polynomials.
                b.basis.iter().map(|f| primitive_part(&clear_denominators(f))).collect()
            };
            DegreeLine { degree: b.d, basis: label(&basis, &names) }
        })
        .collect())
}

fn compute_over<F: ExactField>(model: Model, sliced: bool, max_degree: u32) -> Result<Computed<F>, String> {
    match model {
        Model::Kontsevich => Ok(kontsevich_bases(sliced, max_degree)),
        Model::OrderedPoints(n) => ordered_points_bases(n, sliced, max_degree),
    }
}

fn label<C: Scalar>(basis: &[MultiPoly<C>], names: &[(String, MultiPoly<C>)]) -> Vec<String> {
    basis.iter().map(|f| name_of(f, names)).collect()
}

/// The name of a matching invariant up to a scalar, or else the printed polynomial.
fn name_of<C: Scalar>(f: &MultiPoly<C>, names: &[(String, MultiPoly<C>)]) -> String {
    for (n, g) in names {
        if g.is_constant() {
            continue;
        }
        if let Some(k) = f.scalar_ratio(g) {
            return if k.is_one() {
                n.clone()
            } else if (-k.clone()).is_one() {
                format!("-{n}")
            } else {
                format!("{k}*{n}")
            };
        }
    }
    f.to_string()
}

fn degree_of<F: ExactField>(d: u32, b: gslice::invariants::GradedBasis<F>) -> Degree<F> {
    Degree { d, monos: b.monomials(), basis: b.basis }
}

fn kontsevich_bases<F: ExactField>(sliced: bool, max_degree: u32) -> Computed<F> {
    let action = kontsevich_action::<F>();
    let classical = classical_invariants::<F>(action.source());
    let named = classical.named();
    if sliced {
        let g = kontsevich_slice(&action);
        let names = named.into_iter().map(|(n, p)| (n.to_string(), restrict_to_slice(p, &g))).collect();
        let bases = (0..=max_degree).map(|d| degree_of(d, intersect_equalizers(&g, d))).collect();
        Computed { bases, names }
    } else {
        let names = named.into_iter().map(|(n, p)| (n.to_string(), p.clone())).collect();
        let bases = (0..=max_degree).map(|d| degree_of(d, invariant_basis(&action, d))).collect();
        Computed { bases, names }
    }
}

/// Degree `d` stands for multidegree `(d, ..., d)`. The sliced variant works
/// on the slice `P_1 = 0`, `P_n = inf` under its torus.
fn ordered_points_bases<F: ExactField>(n: usize, sliced: bool, max_degree: u32) -> Result<Computed<F>, String> {
    let action = if sliced {
        let first = hmsv_first_slice::<F>(n, 0).map_err(|e| e.to_string())?;
        first.groupoid.components[0].action.clone()
    } else {
        ordered_points_action::<F>(n)
    };
    let ring = action.source().clone();
    let blocks: Vec<Vec<usize>> = (1..=n)
        .map(|i| [format!("x{i}"), format!("y{i}")].iter().filter_map(|v| ring.index_of(v)).collect())
        .collect();
    let bases = (0..=max_degree)
        .map(|d| {
            let monos = multigraded_basis(&ring, &blocks, &vec![d; n]);
            let basis = invariants_on(&action, &monos);
            Degree { d, monos, basis }
        })
        .collect();
    Ok(Computed { bases, names: Vec::new() })
}

pub fn text_lines(lines: &[DegreeLine]) -> Vec<String> {
    lines
        .iter()
        .map(|l| format!("d={} dim={} basis=[{}]", l.degree, l.basis.len(), l.basis.join(", ")))
        .collect()
}

pub fn json_document(model: Model, field: FieldTag, sliced: bool, lines: &[DegreeLine]) -> String {
    let degrees: Vec<serde_json::Value> = lines
        .iter()
        .map(|l| serde_json::json!({ "d": l.degree, "dim": l.basis.len(), "basis": l.basis }))
        .collect();
    let doc = serde_json::json!({
        "model": model.to_string(),
        "field": field.to_string(),
        "mode": if sliced { "sliced" } else { "unsliced" },
        "degrees": degrees,
    });
    serde_json::to_string_pretty(&doc).expect("json values serialize")
}
