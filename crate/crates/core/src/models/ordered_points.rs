//! Ordered points on the projective line under the special linear group, and
//! two torus slices near the configuration `(0, ..., 0, inf, ..., inf)`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::action::{reduce_modulo, torus_action, ActionMap, DetConvention, Relation};
use crate::invariants::{common_kernel, span_rank, vector_to_poly, Presentation};
use crate::linalg::ExactField;
use crate::ring::{MultiPoly, Monomial, PolyRing, Scalar};
use crate::slicing::{build_slice, SliceSpec, SlicedGroupoid};

pub fn point_vars(n: usize) -> Vec<String> {
    (1..=n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect()
}

/// `x_i -> a x_i + b y_i`, `y_i -> c x_i + d y_i` with `ad - bc = 1`.
pub fn ordered_points_action<C: Scalar>(n: usize) -> ActionMap<C> {
    assert!(n >= 2, "need at least two points");
    let source = PolyRing::new(point_vars(n)).expect("valid names");
    let group = PolyRing::new(["a", "b", "c", "d"]).expect("valid names");
    let mixed = crate::action::mixed_ring(&source, &group).expect("disjoint names");
    let v = |s: &str| MultiPoly::<C>::var(&mixed, s).expect("declared");
    let (a, b, c, d) = (v("a"), v("b"), v("c"), v("d"));
    let mut images = Vec::new();
    for i in 1..=n {
        let (x, y) = (v(&format!("x{i}")), v(&format!("y{i}")));
        images.push((&(&a * &x) + &(&b * &y), 0));
        images.push((&(&c * &x) + &(&d * &y), 0));
    }
    let det = &(&a * &d) - &(&b * &c);
    ActionMap::new(&source, &group, images, det, DetConvention::Unimodular).expect("linear images")
}

/// Directed multigraph on points `1..=n` with every vertex of the same degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInvariantSpec {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is a loop or leaves 1..={2}")]
    BadEdge(usize, usize, usize),
    #[error("vertex degrees differ: {0:?}")]
    Irregular(Vec<usize>),
}

impl GraphInvariantSpec {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut deg = vec![0usize; n];
        for &(i, j) in edges {
            if i == j || i == 0 || j == 0 || i > n || j > n {
                return Err(GraphError::BadEdge(i, j, n));
            }
            deg[i - 1] += 1;
            deg[j - 1] += 1;
        }
        if deg.windows(2).any(|w| w[0] != w[1]) {
            return Err(GraphError::Irregular(deg));
        }
        Ok(GraphInvariantSpec { n, edges: edges.to_vec() })
    }

    /// Common vertex degree.
    pub fn degree(&self) -> usize {
        2 * self.edges.len() / self.n
    }
}

/// `prod_{(i,j)} (x_i y_j - x_j y_i)` in the source ring of `ordered_points_action(n)`.
pub fn graph_invariant<C: Scalar>(spec: &GraphInvariantSpec, ring: &Arc<PolyRing>) -> MultiPoly<C> {
    let v = |s: String| MultiPoly::<C>::var(ring, &s).expect("point variable");
    let mut out = MultiPoly::one(ring);
    for &(i, j) in &spec.edges {
        let bracket = &(&v(format!("x{i}")) * &v(format!("y{j}"))) - &(&v(format!("x{j}")) * &v(format!("y{i}")));
        out = &out * &bracket;
    }
    out
}

/// Monomials with degree `degrees[k]` in the variables `blocks[k]` and zero
/// in every other variable, in descending graded-lex order.
pub fn multigraded_basis(ring: &Arc<PolyRing>, blocks: &[Vec<usize>], degrees: &[u32]) -> Vec<Monomial> {
    let total = degrees.iter().sum();
    ring.graded_basis(total)
        .into_iter()
        .filter(|m| {
            let covered: u32 = blocks.iter().flatten().map(|&v| m.exp(v)).sum();
            covered == total
                && blocks.iter().zip(degrees).all(|(b, &d)| b.iter().map(|&v| m.exp(v)).sum::<u32>() == d)
        })
        .collect()
}

/// Invariants inside the span of `monos`, which must be stable under the action.
pub fn invariants_on<F: ExactField>(action: &ActionMap<F>, monos: &[Monomial]) -> Vec<MultiPoly<F>> {
    let cols = action.equalizer_columns(monos);
    common_kernel(monos.len(), &[cols]).iter().map(|v| vector_to_poly(action.source(), monos, v)).collect()
}

/// One degree of a dimension comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: u32,
    /// Invariants computed from the sliced groupoid.
    pub computed: usize,
    /// Weight-zero monomials, counted by enumeration.
    pub weight_zero: usize,
    /// Predicted by the presentation, or by a closed-form count.
    pub presentation: usize,
    /// Rank of the span of generator products.
    pub generated: usize,
}

impl DegreeCheck {
    pub fn agrees(&self) -> bool {
        self.computed == self.weight_zero && self.computed == self.presentation && self.computed == self.generated
    }
}

/// Number of monomials in the given variables whose torus weight is zero.
pub fn weight_zero_count(weights: &[i32], d: u32) -> usize {
    fn rec(w: &[i32], left: u32, acc: i32) -> usize {
        match w.split_first() {
            None => usize::from(left == 0 && acc == 0),
            Some((&first, rest)) => (0..=left).map(|e| rec(rest, left - e, acc + first * e as i32)).sum(),
        }
    }
    rec(weights, d, 0)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointsError {
    #[error("the number of points must be even and at least 4, got {0}")]
    BadCount(usize),
}

/// Slice `P_1 = 0`, `P_n = inf` and the rank-one matrix presentation of its torus invariants.
#[derive(Clone, Debug)]
pub struct FirstSlice<F: ExactField> {
    pub groupoid: SlicedGroupoid<F>,
    /// Torus action on the affine coordinates `x_2..x_m, y_{m+1}..y_{n-1}`.
    pub chart: ActionMap<F>,
    /// Generators `W_ij = x_i y_j` with the 2x2 minor relations.
    pub presentation: Presentation<F>,
    pub checks: Vec<DegreeCheck>,
}

pub fn hmsv_first_slice<F: ExactField>(n: usize, max_degree: u32) -> Result<FirstSlice<F>, PointsError> {
    if n < 4 || n % 2 == 1 {
        return Err(PointsError::BadCount(n));
    }
    let m = n / 2;
    let action = ordered_points_action::<F>(n);
    let spec = SliceSpec::new(&["x1".to_string(), format!("y{n}")], &[]);
    let b = MultiPoly::var(action.mixed(), "b").expect("group variable");
    let c = MultiPoly::var(action.mixed(), "c").expect("group variable");
    let groupoid = build_slice(&action, &spec, &[vec![(b, None), (c, None)]]).expect("components restrict");
    let xs: Vec<String> = (2..=m).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (m + 1..n).map(|j| format!("y{j}")).collect();
    let chart_vars: Vec<&str> = xs.iter().chain(&ys).map(String::as_str).collect();
    let chart = groupoid.components[0].action.sub_action(&chart_vars).expect("diagonal images");

    let ring = chart.source().clone();
    let mut names = Vec::new();
    let mut gens = Vec::new();
    for i in 2..=m {
        for j in m + 1..n {
            names.push(format!("W{i}{j}"));
            let x = MultiPoly::var(&ring, &format!("x{i}")).expect("chart variable");
            let y = MultiPoly::var(&ring, &format!("y{j}")).expect("chart variable");
            gens.push(&x * &y);
        }
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut presentation = Presentation::new(&name_refs, gens).expect("homogeneous generators");
    let w = |i: usize, j: usize| MultiPoly::var(&presentation.symbols, &format!("W{i}{j}")).expect("generator");
    let mut relations = Vec::new();
    for i in 2..=m {
        for k in i + 1..=m {
            for j in m + 1..n {
                for l in j + 1..n {
                    relations.push(&(&w(i, j) * &w(k, l)) - &(&w(i, l) * &w(k, j)));
                }
            }
        }
    }
    presentation.relations = relations;

    let weights: Vec<i32> = xs.iter().map(|_| 1).chain(ys.iter().map(|_| -1)).collect();
    let side = (m - 1) as u64;
    let checks = (0..=max_degree)
        .map(|d| {
            let computed = crate::invariants::invariant_basis(&chart, d).dim();
            let presentation_count = if d % 2 == 0 {
                let k = u64::from(d / 2);
                binomial(k + side - 1, k).pow(2) as usize
            } else {
                0
            };
            let generated = if d % 2 == 0 { presentation.span(d).dim() } else { 0 };
            DegreeCheck {
                degree: d,
                computed,
                weight_zero: weight_zero_count(&weights, d),
                presentation: presentation_count,
                generated,
            }
        })
        .collect();
    Ok(FirstSlice { groupoid, chart, presentation, checks })
}

/// Slice `P_1 = 0`, `P_2 = inf` with the pairs `(P_i, P_{i+1})`, `i = 3, 5, ..., n-1`,
/// in Pluecker coordinates.
#[derive(Clone, Debug)]
pub struct SecondSlice<F: ExactField> {
    pub n: usize,
    pub groupoid: SlicedGroupoid<F>,
    /// Torus action `A_i -> t^2 A_i`, `D_i -> t^-2 D_i` on the pair coordinates.
    pub torus: ActionMap<F>,
    /// Generators `B_i, C_i, F_ij = A_i D_j` in the pair coordinates.
    pub presentation: Presentation<F>,
    /// `A_i D_i - B_i C_i` and `B_i - C_i - 1`.
    pub chart_relations: Vec<MultiPoly<F>>,
    /// Relations of the presentation, in the generator symbols.
    pub stated_relations: Vec<MultiPoly<F>>,
    /// Per pair-degree `k`: invariants of multidegree `(k, ..., k)` in points `3..n`.
    pub checks: Vec<DegreeCheck>,
}

impl<F: ExactField> SecondSlice<F> {
    /// Every stated relation lies in the ideal of the chart relations.
    pub fn relations_hold(&self) -> bool {
        let ring = self.presentation.target();
        let mut rels = Vec::new();
        for i in pair_starts(self.n) {
            let v = |s: &str| MultiPoly::<F>::var(ring, &format!("{s}{i}")).expect("pair variable");
            let b_rel = &(&v("B") - &v("C")) - &MultiPoly::one(ring);
            rels.push(Relation::new(b_rel, ring.require(&format!("B{i}")).expect("declared")).expect("linear"));
        }
        for i in pair_starts(self.n) {
            let v = |s: &str| MultiPoly::<F>::var(ring, &format!("{s}{i}")).expect("pair variable");
            let c = v("C");
            let a_rel = &(&v("A") * &v("D")) - &(&c * &(&c + &MultiPoly::one(ring)));
            rels.push(Relation::new(a_rel, ring.require(&format!("A{i}")).expect("declared")).expect("linear"));
        }
        self.stated_relations.iter().all(|r| reduce_modulo(&rels, &self.presentation.evaluate(r)).0.is_zero())
    }
}

fn pair_starts(n: usize) -> impl Iterator<Item = usize> {
    (3..n).step_by(2)
}

pub fn hmsv_second_slice<F: ExactField>(n: usize, max_pair_degree: u32) -> Result<SecondSlice<F>, PointsError> {
    if n < 4 || n % 2 == 1 {
        return Err(PointsError::BadCount(n));
    }
    let action = ordered_points_action::<F>(n);
    let spec = SliceSpec::new(&["x1", "y2"], &[]);
    let b = MultiPoly::var(action.mixed(), "b").expect("group variable");
    let c = MultiPoly::var(action.mixed(), "c").expect("group variable");
    let groupoid = build_slice(&action, &spec, &[vec![(b, None), (c, None)]]).expect("components restrict");

    // Pair coordinates and their torus action.
    let pairs: Vec<usize> = pair_starts(n).collect();
    let names: Vec<String> = pairs.iter().flat_map(|i| ["A", "B", "C", "D"].map(|s| format!("{s}{i}"))).collect();
    let source = PolyRing::new(&names).expect("valid names");
    let weights: Vec<i32> = names
        .iter()
        .map(|s| match &s[..1] {
            "A" => 2,
            "D" => -2,
            _ => 0,
        })
        .collect();
    let torus = torus_action(&source, &weights).expect("one weight per variable");

    let v = |s: String| MultiPoly::<F>::var(&source, &s).expect("pair variable");
    let mut gen_names = Vec::new();
    let mut gens = Vec::new();
    for &i in &pairs {
        gen_names.push(format!("B{i}"));
        gens.push(v(format!("B{i}")));
        gen_names.push(format!("C{i}"));
        gens.push(v(format!("C{i}")));
    }
    for &i in &pairs {
        for &j in &pairs {
            gen_names.push(format!("F{i}{j}"));
            gens.push(&v(format!("A{i}")) * &v(format!("D{j}")));
        }
    }
    let refs: Vec<&str> = gen_names.iter().map(String::as_str).collect();
    let presentation = Presentation::new(&refs, gens).expect("homogeneous generators");
    let sym = |s: String| MultiPoly::<F>::var(&presentation.symbols, &s).expect("generator");
    let one = MultiPoly::one(&presentation.symbols);
    let mut stated = Vec::new();
    for &i in &pairs {
        stated.push(&sym(format!("F{i}{i}")) - &(&sym(format!("B{i}")) * &sym(format!("C{i}"))));
        stated.push(&(&sym(format!("B{i}")) - &sym(format!("C{i}"))) - &one);
    }
    for &i in &pairs {
        for &k in &pairs {
            for &j in &pairs {
                for &l in &pairs {
                    if i < k && j < l {
                        let f = |p: usize, q: usize| sym(format!("F{p}{q}"));
                        stated.push(&(&f(i, j) * &f(k, l)) - &(&f(i, l) * &f(k, j)));
                    }
                }
            }
        }
    }
    let mut chart_relations = Vec::new();
    for &i in &pairs {
        let w = |s: &str| v(format!("{s}{i}"));
        chart_relations.push(&(&w("A") * &w("D")) - &(&w("B") * &w("C")));
        chart_relations.push(&(&w("B") - &w("C")) - &MultiPoly::one(&source));
    }

    // Graded comparison on the slice itself.
    let comp = &groupoid.components[0].action;
    let ring = comp.source().clone();
    let blocks: Vec<Vec<usize>> = (3..=n)
        .map(|i| vec![ring.require(&format!("x{i}")).expect("slice variable"), ring.require(&format!("y{i}")).expect("slice variable")])
        .collect();
    let plucker: Vec<[MultiPoly<F>; 4]> = pairs
        .iter()
        .map(|&i| {
            let x = |k: usize| MultiPoly::<F>::var(&ring, &format!("x{k}")).expect("slice variable");
            let y = |k: usize| MultiPoly::<F>::var(&ring, &format!("y{k}")).expect("slice variable");
            [&x(i) * &x(i + 1), &x(i) * &y(i + 1), &y(i) * &x(i + 1), &y(i) * &y(i + 1)]
        })
        .collect();
    let mut lifted = Vec::new();
    for p in &plucker {
        lifted.push(p[1].clone());
        lifted.push(p[2].clone());
    }
    for p in &plucker {
        for q in &plucker {
            lifted.push(&p[0] * &q[3]);
        }
    }
    let lifted_pres = Presentation::new(&refs, lifted).expect("homogeneous generators");
    let checks = (0..=max_pair_degree)
        .map(|k| {
            let monos = multigraded_basis(&ring, &blocks, &vec![k; blocks.len()]);
            let computed = invariants_on(comp, &monos).len();
            let weight_zero = monos.iter().filter(|mo| {
                blocks.iter().map(|b| mo.exp(b[0]) as i64 - mo.exp(b[1]) as i64).sum::<i64>() == 0
            }).count();
            // Products of generators: pair-degree k in every pair.
            let wanted: HashSet<&Monomial> = monos.iter().collect();
            let products: Vec<MultiPoly<F>> = lifted_pres
                .products(k * (n as u32 - 2))
                .into_iter()
                .filter(|p| p.terms().next().is_some_and(|(mo, _)| wanted.contains(mo)))
                .collect();
            let generated = span_rank(&products, &monos);
            let presentation = multidegree_weight_zero(n - 2, k);
            DegreeCheck { degree: k, computed, weight_zero, presentation, generated }
        })
        .collect();
    Ok(SecondSlice { n, groupoid, torus, presentation, chart_relations, stated_relations: stated, checks })
}

/// Monomials of degree `k` in each of `points` pairs `(x, y)` with as many
/// `x` as `y` overall.
fn multidegree_weight_zero(points: usize, k: u32) -> usize {
    // Each point contributes weight x - y in {-k, -k+2, ..., k}.
    let per_point: Vec<i32> = (0..=k as i32).map(|p| 2 * p - k as i32).collect();
    let mut ways = HashMap::from([(0i32, 1usize)]);
    for _ in 0..points {
        let mut next = HashMap::new();
        for (w, c) in &ways {
            for p in &per_point {
                *next.entry(w + p).or_insert(0) += c;
            }
        }
        ways = next;
    }
    ways.get(&0).copied().unwrap_or(0)
}
