use std::fmt::Write as _;
use std::sync::Arc;

use gslice::invariants::{
    field_span, integer_saturate, integer_span, monomial_count, relation_search, GradedBasis, Presentation,
};
use gslice::linalg::ExactField;
use gslice::models::kontsevich::{classical_invariants, kontsevich_action, kontsevich_slice, restrict_to_slice};
use gslice::ring::{parse_poly, to_integer, MultiPoly, PolyRing, Scalar};
use gslice::slicing::{divides, flatness_check, intersect_equalizers, intersect_selected};
use gslice::{Integer, Rational, F2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Relations,
    Restrictions,
    TheoremI,
    TheoremIi,
    TheoremIii,
    Flatness,
}

/// Highest degree of the sliced comparisons.
const SLICED_DEGREE: u32 = 8;
/// Highest degree at which unsliced invariants are restricted to the slice.
const RESTRICTION_DEGREE: u32 = 6;
/// Highest degree of the per-component generator comparisons.
const COMPONENT_DEGREE: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub label: String,
    pub pass: bool,
    /// Details printed on failure.
    pub witness: String,
}

impl Outcome {
    fn new(label: impl Into<String>, pass: bool, witness: impl Into<String>) -> Self {
        Outcome { label: label.into(), pass, witness: witness.into() }
    }

    pub fn line(&self) -> String {
        if self.pass {
            format!("PASS {}", self.label)
        } else {
            format!("FAIL {}: {}", self.label, self.witness)
        }
    }
}

pub fn run(check: Check) -> Vec<Outcome> {
    match check {
        Check::Relations => relations(),
        Check::Restrictions => restrictions(),
        Check::TheoremI => over_z(),
        Check::TheoremIi => over_q(),
        Check::TheoremIii => over_f2(),
        Check::Flatness => flatness(),
    }
}

fn zero_check<C: Scalar>(label: &str, f: MultiPoly<C>) -> Outcome {
    let witness = format!("expands to {f}");
    Outcome::new(label, f.is_zero(), witness)
}

fn relations() -> Vec<Outcome> {
    let action = kontsevich_action::<Integer>();
    let i = classical_invariants::<Integer>(action.source());
    let two = Integer::from(2);
    let four = Integer::from(4);
    vec![
        zero_check(
            "Delta12 = Delta1 + Delta2 + 2*Gamma",
            &(&(&i.delta12 - &i.delta1) - &i.delta2) - &i.gamma.scale(&two),
        ),
        zero_check(
            "4*Lambda = Gamma^2 - Delta1*Delta2",
            &(&i.lambda.scale(&four) - &i.gamma.pow(2)) + &(&i.delta1 * &i.delta2),
        ),
    ]
}

/// Generators on the slice, by name.
fn slice_polys<C: Scalar>(ring: &Arc<PolyRing>, texts: &[&str]) -> Vec<MultiPoly<C>> {
    texts.iter().map(|t| parse_poly(ring, t).expect("built-in formula parses")).collect()
}

fn restrictions() -> Vec<Outcome> {
    let action = kontsevich_action::<Integer>();
    let g = kontsevich_slice(&action);
    let inv = classical_invariants::<Integer>(action.source());
    let expected = [
        ("Delta1", &inv.delta1, "B1^2"),
        ("Delta2", &inv.delta2, "B2^2"),
        ("Gamma", &inv.gamma, "B1*B2 - 2*C1*A2"),
        ("Lambda", &inv.lambda, "C1*A2*(C1*A2 - B1*B2)"),
    ];
    let mut out: Vec<Outcome> = expected
        .iter()
        .map(|(name, f, text)| {
            let got = restrict_to_slice(f, &g);
            let want = parse_poly(&g.ring, text).expect("built-in formula parses");
            Outcome::new(format!("{name}|W = {want}"), got == want, format!("got {got}"))
        })
        .collect();
    let r = |f: &MultiPoly<Integer>| restrict_to_slice(f, &g);
    let rel = &(&r(&inv.lambda).scale(&Integer::from(4)) - &r(&inv.gamma).pow(2)) + &(&r(&inv.delta1) * &r(&inv.delta2));
    out.push(zero_check("4*Lambda|W = Gamma|W^2 - Delta1|W*Delta2|W", rel));
    out.push(restriction_iso::<Rational>("Q"));
    out.push(restriction_iso::<F2>("F2"));
    out
}

/// Restriction to the slice maps the degree-d invariants isomorphically
/// onto the sliced invariants.
fn restriction_iso<F: ExactField>(field: &str) -> Outcome {
    let action = kontsevich_action::<F>();
    let g = kontsevich_slice(&action);
    let mut bad = String::new();
    for d in 0..=RESTRICTION_DEGREE {
        let full = gslice::invariants::invariant_basis(&action, d);
        let restricted: Vec<MultiPoly<F>> = full.basis.iter().map(|f| restrict_to_slice(f, &g)).collect();
        let image = field_span(&g.ring, d, &restricted);
        let sliced = intersect_equalizers(&g, d);
        if image.dim() != full.dim() || image.basis != sliced.basis {
            let _ = write!(bad, "d={d} unsliced={} image={} sliced={}; ", full.dim(), image.dim(), sliced.dim());
        }
    }
    Outcome::new(
        format!("{field}: restriction to W is an isomorphism onto the sliced invariants for d <= {RESTRICTION_DEGREE}"),
        bad.is_empty(),
        bad.trim_end_matches("; ").to_string(),
    )
}

/// Compares the subalgebra generated by `gens` with `basis_of(d)` for `d <= max`.
fn field_generation<F: ExactField>(
    label: String,
    names: &[&str],
    gens: Vec<MultiPoly<F>>,
    max: u32,
    basis_of: impl Fn(u32) -> GradedBasis<F>,
) -> Outcome {
    let p = Presentation::new(names, gens).expect("homogeneous generators");
    let mut bad = String::new();
    for d in 0..=max {
        let want = basis_of(d);
        let got = p.span(d);
        if got.basis != want.basis {
            let _ = write!(bad, "d={d} generated={} computed={}; ", got.dim(), want.dim());
        }
    }
    Outcome::new(label, bad.is_empty(), bad.trim_end_matches("; ").to_string())
}

/// Integer version: the lattice generated by products equals the saturated lattice.
fn integer_generation(
    label: String,
    names: &[&str],
    gens: Vec<MultiPoly<Integer>>,
    max: u32,
    basis_of: impl Fn(u32) -> GradedBasis<Integer>,
) -> Outcome {
    let p = Presentation::new(names, gens).expect("homogeneous generators");
    let mut bad = String::new();
    for d in 0..=max {
        let want = basis_of(d);
        let got = integer_span(&want.ring, d, &p.products(d));
        if got.basis != want.basis {
            let missing: Vec<String> = want.basis.iter().filter(|f| !got.contains(f)).map(|f| f.to_string()).collect();
            let _ = write!(bad, "d={d} not generated: [{}]; ", missing.join(", "));
        }
    }
    Outcome::new(label, bad.is_empty(), bad.trim_end_matches("; ").to_string())
}

fn dims_outcome(label: String, got: Vec<usize>, want: Vec<usize>) -> Outcome {
    let witness = format!("computed {got:?}, expected {want:?}");
    Outcome::new(label, got == want, witness)
}

fn over_z() -> Vec<Outcome> {
    let action = kontsevich_action::<Rational>();
    let g = kontsevich_slice(&action);
    let inv = classical_invariants::<Rational>(action.source());
    let restricted: Vec<MultiPoly<Integer>> = [&inv.delta1, &inv.delta2, &inv.gamma, &inv.lambda]
        .iter()
        .map(|f| to_integer(&restrict_to_slice(f, &g)).expect("integral formula"))
        .collect();
    let mut out = Vec::new();

    let sat4 = integer_saturate(&intersect_equalizers(&g, 4));
    let lambda_w = parse_poly::<Integer>(&g.ring, "C1*A2*(C1*A2 - B1*B2)").expect("built-in formula parses");
    out.push(Outcome::new(
        format!("Lambda|W = {lambda_w} lies in the saturated degree-4 sliced invariants"),
        sat4.contains(&lambda_w),
        format!("lattice basis [{}]", join(&sat4.basis)),
    ));

    let names = ["Delta1", "Delta2", "Gamma", "Lambda"];
    let gens = vec![inv.delta1.clone(), inv.delta2.clone(), inv.gamma.clone(), inv.lambda.clone()];
    let p = Presentation::new(&names, gens).expect("homogeneous generators");
    let rels = relation_search(&p, 4);
    let expected = parse_poly::<Rational>(&p.symbols, "4*Lambda - Gamma^2 + Delta1*Delta2").expect("built-in formula parses");
    let pass = rels.len() == 1 && rels[0].scalar_ratio(&expected).is_some();
    out.push(Outcome::new(
        format!("degree-4 relations among Delta1, Delta2, Gamma, Lambda are spanned by {expected}"),
        pass,
        format!("found [{}]", join(&rels)),
    ));

    out.push(integer_generation(
        format!("Z: saturated sliced invariants are generated by Delta1|W, Delta2|W, Gamma|W, Lambda|W for d <= {SLICED_DEGREE}"),
        &names,
        restricted,
        SLICED_DEGREE,
        |d| integer_saturate(&intersect_equalizers(&g, d)),
    ));

    let boxes: [(&str, &[usize], &[&str]); 3] = [
        ("S1", &[0], &["B1", "B2", "C1*A2"]),
        ("S1 cap S4", &[0, 3], &["B1^2", "B2^2", "B1*B2", "C1*A2"]),
        ("S1 cap S2 cap S4", &[0, 1, 3], &["B1^2", "B2^2", "2*C1*A2 - B1*B2", "C1*A2*(C1*A2 - B1*B2)"]),
    ];
    for (name, which, texts) in boxes {
        let labels: Vec<String> = (0..texts.len()).map(|i| format!("g{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        out.push(integer_generation(
            format!("Z: {name} is generated by {} for d <= {COMPONENT_DEGREE}", texts.join(", ")),
            &refs,
            slice_polys(&g.ring, texts),
            COMPONENT_DEGREE,
            |d| integer_saturate(&intersect_selected(&g, d, which)),
        ));
    }
    out
}

fn over_q() -> Vec<Outcome> {
    let action = kontsevich_action::<Rational>();
    let g = kontsevich_slice(&action);
    let inv = classical_invariants::<Rational>(action.source());
    let dims: Vec<usize> = (0..=SLICED_DEGREE).map(|d| intersect_equalizers(&g, d).dim()).collect();
    let want: Vec<usize> = (0..=SLICED_DEGREE).map(|d| monomial_count(&[2, 2, 2], d)).collect();
    let names = ["Delta1", "Delta2", "Gamma"];
    let gens = vec![inv.delta1.clone(), inv.delta2.clone(), inv.gamma.clone()];
    let p = Presentation::new(&names, gens.clone()).expect("homogeneous generators");
    let rels: Vec<MultiPoly<Rational>> = (0..=SLICED_DEGREE).flat_map(|d| relation_search(&p, d)).collect();
    vec![
        dims_outcome(format!("Q: sliced dimensions equal those of Q[Delta1, Delta2, Gamma] for d <= {SLICED_DEGREE}"), dims, want),
        field_generation(
            format!("Q: sliced invariants are generated by Delta1|W, Delta2|W, Gamma|W for d <= {SLICED_DEGREE}"),
            &names,
            gens.iter().map(|f| restrict_to_slice(f, &g)).collect(),
            SLICED_DEGREE,
            |d| intersect_equalizers(&g, d),
        ),
        Outcome::new(
            format!("Q: Delta1, Delta2, Gamma satisfy no relation of degree <= {SLICED_DEGREE}"),
            rels.is_empty(),
            format!("found [{}]", join(&rels)),
        ),
    ]
}

fn over_f2() -> Vec<Outcome> {
    let action = kontsevich_action::<F2>();
    let g = kontsevich_slice(&action);
    let inv = classical_invariants::<F2>(action.source());
    let dims: Vec<usize> = (0..=SLICED_DEGREE).map(|d| intersect_equalizers(&g, d).dim()).collect();
    let want: Vec<usize> = (0..=SLICED_DEGREE).map(|d| monomial_count(&[1, 1, 4], d)).collect();
    let mut gens = slice_polys(&g.ring, &["B1", "B2"]);
    gens.push(restrict_to_slice(&inv.lambda, &g));
    let mut out = vec![
        dims_outcome(format!("F2: sliced dimensions equal those of F2[B1, B2, Lambda] for d <= {SLICED_DEGREE}"), dims, want),
        field_generation(
            format!("F2: sliced invariants are generated by B1, B2, Lambda|W for d <= {SLICED_DEGREE}"),
            &["B1", "B2", "Lambda"],
            gens,
            SLICED_DEGREE,
            |d| intersect_equalizers(&g, d),
        ),
    ];
    let boxes: [(&str, &[usize], &[&str]); 3] = [
        ("S1", &[0], &["B1", "B2", "C1*A2"]),
        ("S1 cap S2", &[0, 1], &["B1", "B2", "C1*A2*(C1*A2 + B1*B2)"]),
        ("S1 cap S4", &[0, 3], &["B1", "B2", "C1*A2"]),
    ];
    for (name, which, texts) in boxes {
        out.push(field_generation(
            format!("F2: {name} is generated by {} for d <= {COMPONENT_DEGREE}", texts.join(", ")),
            &["g0", "g1", "g2"],
            slice_polys(&g.ring, texts),
            COMPONENT_DEGREE,
            |d| intersect_selected(&g, d, which),
        ));
    }
    out
}

fn flatness() -> Vec<Outcome> {
    let action = kontsevich_action::<Integer>();
    let p = |s: &str| parse_poly::<Integer>(action.mixed(), s).expect("built-in formula parses");
    let src = |s: &str| parse_poly::<Integer>(action.source(), s).expect("built-in formula parses");
    let factors = [p("c"), p("B1*a + C1*c")];
    let mut out = Vec::new();
    match flatness_check(&action, &["A1"], &src("A1"), &factors, &src("C2")) {
        Ok(r) => {
            out.push(Outcome::new(
                "sigma*A1 at A1 = 0 is divisible by c and by B1*a + C1*c",
                !r.degenerate && factors.iter().all(|g| divides(g, &r.pulled_slice)),
                format!("sigma*A1 = {}", r.pulled_slice),
            ));
            out.push(Outcome::new(
                "sigma*C2 is divisible by neither c nor B1*a + C1*c",
                r.passed,
                format!("sigma*C2 = {}, divisible {:?}", r.pulled_test, r.divisible),
            ));
        }
        Err(e) => out.push(Outcome::new("flatness check runs", false, e.to_string())),
    }
    out
}

fn join<C: Scalar>(polys: &[MultiPoly<C>]) -> String {
    polys.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
}
