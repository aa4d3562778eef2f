use gslice::linalg::rank;
use gslice::models::classify::{classify_point, FormError, SectionPair, StabilityClass};
use gslice::models::grassmann::{complementarity, gale_transform, pluecker, ConfigMatrix, MatrixError, SignRule};
use gslice::models::kontsevich::kontsevich_action;
use gslice::models::ordered_points::{
    graph_invariant, hmsv_first_slice, hmsv_second_slice, invariants_on, multigraded_basis, ordered_points_action,
    GraphError, GraphInvariantSpec, PointsError,
};
use gslice::{Field, Fp, Rational, F2};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize) -> ConfigMatrix {
    loop {
        let rows = (0..n).map(|_| (0..m).map(|_| q(rng.gen_range(-6..=6))).collect()).collect();
        if let Ok(mat) = ConfigMatrix::new(rows) {
            return mat;
        }
    }
}

#[test]
fn gale_of_identity_block() {
    let m = ConfigMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]).unwrap();
    let nonzero: Vec<_> = pluecker(&m).into_iter().filter(|(_, v)| !v.is_zero()).collect();
    assert_eq!(nonzero, [(vec![0, 1], q(1))]);
    let g = gale_transform(&m).unwrap();
    let nonzero: Vec<_> = pluecker(&g).into_iter().filter(|(_, v)| !v.is_zero()).map(|(s, _)| s).collect();
    assert_eq!(nonzero, [vec![2, 3]]);
    assert!(g.rows().iter().all(|r| r[0].is_zero() && r[1].is_zero()));
}

#[test]
fn two_by_four_example() {
    let m = ConfigMatrix::from_i64(&[&[1, 0, 1, 1], &[0, 1, 1, 2]]).unwrap();
    let g = gale_transform(&m).unwrap();
    assert_eq!(complementarity(&m, &g, SignRule::Shuffle), Some(q(1)));
    assert_eq!(complementarity(&m, &g, SignRule::IndexSum), Some(q(-1)));
    let minors: Vec<Rational> = pluecker(&m).into_iter().map(|(_, v)| v).collect();
    assert_eq!(minors, [q(1), q(1), q(2), q(-1), q(-1), q(1)]);
}

#[test]
fn gale_rejects_square_and_deficient_input() {
    let sq = ConfigMatrix::from_i64(&[&[1, 0], &[0, 1]]).unwrap();
    let e = gale_transform(&sq).unwrap_err();
    assert!(matches!(e, MatrixError::NotWide { n: 2, m: 2 }));
    assert!(e.to_string().contains("n must be < m"));
    assert!(matches!(ConfigMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]), Err(MatrixError::RankDeficient { .. })));
    assert!(matches!(ConfigMatrix::parse("1 2\n3"), Err(MatrixError::Ragged { .. })));
    assert!(matches!(ConfigMatrix::parse("1 x 2"), Err(MatrixError::Entry { line: 1, .. })));
    assert_eq!(ConfigMatrix::parse("1/2 1\n0 3\n").unwrap().minor(&[0, 1]), Rational::new(3.into(), 2.into()));
}

#[test]
fn double_gale_recovers_the_row_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, m) in [(1, 3), (2, 5), (3, 6), (2, 6)] {
        let mat = random_matrix(&mut rng, n, m);
        let back = gale_transform(&gale_transform(&mat).unwrap()).unwrap();
        let mut stacked = mat.rows().to_vec();
        stacked.extend(back.rows().iter().cloned());
        assert_eq!(rank(&stacked), n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pluecker_relation_on_two_by_four(e in prop::collection::vec(-7i64..=7, 8)) {
        let rows = vec![e[..4].iter().map(|&x| q(x)).collect(), e[4..].iter().map(|&x| q(x)).collect()];
        prop_assume!(ConfigMatrix::new(rows.clone()).is_ok());
        let m = ConfigMatrix::new(rows).unwrap();
        let p = |a: usize, b: usize| m.minor(&[a, b]);
        prop_assert!((p(0, 1) * p(2, 3) - p(0, 2) * p(1, 3) + p(0, 3) * p(1, 2)).is_zero());
    }

    #[test]
    fn classification_is_invariant_under_the_group(
        s in prop::collection::vec(-3i64..=3, 6),
        g in prop::collection::vec(-3i64..=3, 4),
    ) {
        let action = kontsevich_action::<Rational>();
        let pair = SectionPair { coeffs: std::array::from_fn(|i| q(s[i])) };
        let elt = [q(g[0]), q(g[1]), q(g[2]), q(g[3])];
        prop_assume!(!(&elt[0] * &elt[3] - &elt[1] * &elt[2]).is_zero());
        let moved = pair.transform(&action, elt).unwrap();
        let (a, b) = (classify_point(&pair), classify_point(&moved));
        prop_assert_eq!(a.class, b.class);
        prop_assert_eq!(a.values, b.values);
    }
}

/// Every pair over F2 under every element of GL2(F2).
#[test]
fn classification_in_char_two_is_invariant_exhaustively() {
    let action = kontsevich_action::<F2>();
    let f = |x: u32| Fp::<2>::new(u64::from(x));
    for bits in 0u32..64 {
        let pair = SectionPair { coeffs: std::array::from_fn(|i| f((bits >> i) & 1)) };
        let c = classify_point(&pair);
        for g in 0u32..16 {
            let elt = [f(g & 1), f((g >> 1) & 1), f((g >> 2) & 1), f((g >> 3) & 1)];
            if let Some(moved) = pair.transform(&action, elt) {
                assert_eq!(classify_point(&moved).class, c.class, "pair {bits:06b} element {g:04b}");
            }
        }
    }
}

#[test]
fn classification_examples_in_both_characteristics() {
    fn run<F: Field>() -> Vec<StabilityClass> {
        [("x^2", "x^2"), ("x*y", "x*y"), ("x^2", "y^2"), ("0", "0")]
            .iter()
            .map(|(a, b)| classify_point(&SectionPair::<F>::parse(a, b).unwrap()).class)
            .collect()
    }
    use StabilityClass::*;
    let want = [Unstable, StrictlySemistable, ProperlyStable, Unstable];
    assert_eq!(run::<Rational>(), want);
    assert_eq!(run::<F2>(), want);
    let p = SectionPair::<Rational>::parse("x^2 + y^2", "x*y").unwrap();
    assert_eq!(classify_point(&p).class, ProperlyStable);
    let z = classify_point(&SectionPair::<Rational>::parse("0", "0").unwrap());
    assert!(z.zero_pair);
}

#[test]
fn non_quadratic_forms_are_rejected() {
    assert!(matches!(SectionPair::<Rational>::parse("x^3", "y^2"), Err(FormError::NotQuadratic(_))));
    assert!(SectionPair::<Rational>::parse("x + y", "y^2").is_err());
    assert!(SectionPair::<Rational>::parse("x*z", "y^2").is_err());
}

#[test]
fn graph_invariants_are_invariant() {
    let action = ordered_points_action::<Rational>(4);
    let ring = action.source().clone();
    let graphs: [&[(usize, usize)]; 3] = [&[(1, 2), (3, 4)], &[(1, 2), (2, 3), (3, 4), (4, 1)], &[(1, 3), (2, 4), (1, 4), (2, 3)]];
    for edges in graphs {
        let spec = GraphInvariantSpec::new(4, edges).unwrap();
        let f = graph_invariant::<Rational>(&spec, &ring);
        assert!(action.is_invariant(&f).unwrap(), "{edges:?}");
        assert_eq!(f.homogeneous_degree(), Some(2 * edges.len() as u32));
        assert_eq!(spec.degree(), 2 * edges.len() / 4);
    }
    assert!(matches!(GraphInvariantSpec::new(4, &[(1, 2), (2, 3)]), Err(GraphError::Irregular(_))));
}

#[test]
fn graph_invariants_span_the_multidegree_one_invariants() {
    let action = ordered_points_action::<Rational>(4);
    let ring = action.source().clone();
    let blocks: Vec<Vec<usize>> = (0..4).map(|i| vec![2 * i, 2 * i + 1]).collect();
    let monos = multigraded_basis(&ring, &blocks, &[1, 1, 1, 1]);
    let inv = invariants_on(&action, &monos);
    assert_eq!(inv.len(), 2);
    let graphs: [&[(usize, usize)]; 3] = [&[(1, 2), (3, 4)], &[(1, 3), (2, 4)], &[(1, 4), (2, 3)]];
    let polys: Vec<_> = graphs
        .iter()
        .map(|e| graph_invariant::<Rational>(&GraphInvariantSpec::new(4, e).unwrap(), &ring))
        .collect();
    // Two of the three matchings are independent; the third is the Pluecker relation.
    assert_eq!(gslice::invariants::span_rank(&polys, &monos), 2);
    let mut all = polys.clone();
    all.extend(inv);
    assert_eq!(gslice::invariants::span_rank(&all, &monos), 2);
}

#[test]
fn first_slice_counts_match_through_degree_eight() {
    for n in [4, 6] {
        let s = hmsv_first_slice::<Rational>(n, 8).unwrap();
        assert!(s.presentation.relations_hold());
        for c in &s.checks {
            assert!(c.agrees(), "n={n} {c:?}");
        }
    }
    let s = hmsv_first_slice::<F2>(6, 4).unwrap();
    assert!(s.checks.iter().all(|c| c.agrees()));
    assert!(matches!(hmsv_first_slice::<Rational>(5, 2), Err(PointsError::BadCount(5))));
}

#[test]
fn second_slice_is_generated_and_relations_hold() {
    for n in [4, 6] {
        let s = hmsv_second_slice::<Rational>(n, 3).unwrap();
        assert!(s.relations_hold(), "n={n}");
        for c in &s.checks {
            assert!(c.agrees(), "n={n} {c:?}");
        }
        for f in &s.chart_relations {
            assert!(!f.is_zero());
        }
        // The torus fixes B and C and scales A and D oppositely.
        let b = gslice::MultiPoly::<Rational>::var(s.torus.source(), "B3").unwrap();
        assert!(s.torus.is_invariant(&b).unwrap());
        let ad = &gslice::MultiPoly::<Rational>::var(s.torus.source(), "A3").unwrap()
            * &gslice::MultiPoly::<Rational>::var(s.torus.source(), "D3").unwrap();
        assert!(s.torus.is_invariant(&ad).unwrap());
    }
}

#[test]
fn veronese_numerators_fill_degree_four_in_char_two() {
    use gslice::models::kontsevich::{classical_invariants, veronese_chart};
    let action = kontsevich_action::<F2>();
    let chart = veronese_chart::<F2>(action.source());
    assert_eq!(chart.len(), 5);
    for f in &chart {
        assert!(action.is_invariant(f).unwrap(), "{f}");
    }
    let monos = action.source().graded_basis(4);
    assert_eq!(gslice::invariants::span_rank(&chart, &monos), 5);
    let mut all = chart;
    all.push(classical_invariants::<F2>(action.source()).lambda);
    let inv = gslice::invariants::invariant_basis(&action, 4).basis;
    assert_eq!(inv.len(), 6);
    assert_eq!(gslice::invariants::span_rank(&all, &monos), 6);
    all.extend(inv);
    assert_eq!(gslice::invariants::span_rank(&all, &monos), 6);
}
