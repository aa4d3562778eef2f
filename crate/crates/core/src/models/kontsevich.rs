//! Pairs of binary quadratic forms `(s1, s2)`, coefficients `A_i x^2 + B_i xy + C_i y^2`,
//! under the projective linear group acting on `x, y`.

use std::sync::Arc;

use crate::action::{parse_action, ActionMap};
use crate::ring::{parse_poly, MultiPoly, PolyRing, Scalar};
use crate::slicing::{build_slice, parse_slice_spec, SlicedGroupoid};

pub const SOURCE_VARS: [&str; 6] = ["A1", "B1", "C1", "A2", "B2", "C2"];
pub const GROUP_VARS: [&str; 4] = ["a", "b", "c", "d"];

const ACTION: &str = "\
source: A1, B1, C1, A2, B2, C2
group: a, b, c, d
det: a*d - b*c
convention: invertible
A1 -> (A1*a^2 + B1*a*c + C1*c^2) / det
B1 -> (2*A1*a*b + B1*(a*d + b*c) + 2*C1*c*d) / det
C1 -> (A1*b^2 + B1*b*d + C1*d^2) / det
A2 -> (A2*a^2 + B2*a*c + C2*c^2) / det
B2 -> (2*A2*a*b + B2*(a*d + b*c) + 2*C2*c*d) / det
C2 -> (A2*b^2 + B2*b*d + C2*d^2) / det
";

/// The slice `A1 = C2 = 0` and the four components of the groupoid over it.
pub const SLICE: &str = "vanish: A1, C2 / avoid: {B1, C1}, {A2, B2} / \
    components: [b; c], [c; A2*b + B2*d @ b], [b; B1*a + C1*c @ a], [B1*a + C1*c @ a; A2*b + B2*d @ b]";

pub fn action_text() -> &'static str {
    ACTION
}

pub fn kontsevich_action<C: Scalar>() -> ActionMap<C> {
    parse_action(ACTION).expect("built-in action parses")
}

pub fn kontsevich_slice<C: Scalar>(action: &ActionMap<C>) -> SlicedGroupoid<C> {
    let (spec, comps) = parse_slice_spec(action, SLICE).expect("built-in slice parses");
    build_slice(action, &spec, &comps).expect("built-in components restrict")
}

/// The classical invariants, read in the source ring of the action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalInvariants<C: Scalar> {
    pub delta1: MultiPoly<C>,
    pub delta2: MultiPoly<C>,
    pub delta12: MultiPoly<C>,
    pub gamma: MultiPoly<C>,
    pub lambda: MultiPoly<C>,
}

impl<C: Scalar> ClassicalInvariants<C> {
    /// `(name, polynomial)` pairs in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, &MultiPoly<C>)> {
        vec![
            ("Delta1", &self.delta1),
            ("Delta2", &self.delta2),
            ("Delta12", &self.delta12),
            ("Gamma", &self.gamma),
            ("Lambda", &self.lambda),
        ]
    }
}

pub fn source_ring() -> Arc<PolyRing> {
    PolyRing::new(SOURCE_VARS).expect("valid names")
}

/// Integer formulas read over `C`; over a prime field this is their reduction.
pub fn classical_invariants<C: Scalar>(ring: &Arc<PolyRing>) -> ClassicalInvariants<C> {
    let p = |s: &str| parse_poly::<C>(ring, s).expect("built-in formula parses");
    ClassicalInvariants {
        delta1: p("B1^2 - 4*A1*C1"),
        delta2: p("B2^2 - 4*A2*C2"),
        delta12: p("(B1 + B2)^2 - 4*(A1 + A2)*(C1 + C2)"),
        gamma: p("B1*B2 - 2*A1*C2 - 2*C1*A2"),
        lambda: p("(A1*C2 + C1*A2)^2 - (A1*C2 + C1*A2)*B1*B2 + A1*C1*(B2^2 - 2*A2*C2) + A2*C2*(B1^2 - 2*A1*C1)"),
    }
}

/// Sets the slice variables to zero and moves `f` into the slice ring.
pub fn restrict_to_slice<C: Scalar>(f: &MultiPoly<C>, slice: &SlicedGroupoid<C>) -> MultiPoly<C> {
    let kill: Vec<usize> = slice.slice.vanish.iter().map(|v| f.ring().require(v).expect("slice variable")).collect();
    f.kill_vars(&kill).restrict_to(&slice.ring).expect("surviving variables")
}

/// Numerators `B1^4, B1^3 B2, ..., B2^4` of the coordinates `N / Lambda` on the
/// chart `Lambda != 0` of the quotient in characteristic 2. The chart is the cone
/// over the rational normal quartic.
pub fn veronese_chart<C: Scalar>(ring: &Arc<PolyRing>) -> Vec<MultiPoly<C>> {
    let b1 = MultiPoly::var(ring, "B1").expect("B1 in ring");
    let b2 = MultiPoly::var(ring, "B2").expect("B2 in ring");
    (0..=4).rev().map(|i| &b1.pow(i) * &b2.pow(4 - i)).collect()
}
