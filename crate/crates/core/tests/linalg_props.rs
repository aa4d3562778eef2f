use gslice::linalg::{
    det, hermite_normal_form, nullspace, rank, rref, saturate, to_sparse, ExactField, KernelTracker,
};
use gslice::{Fp, Integer, Rational, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, cols), rows)
}

fn over<C: Scalar>(m: &[Vec<i64>]) -> Vec<Vec<C>> {
    m.iter().map(|r| r.iter().map(|&x| C::from_i64(x)).collect()).collect()
}

fn apply<C: Scalar>(m: &[Vec<C>], v: &[C]) -> Vec<C> {
    m.iter().map(|r| r.iter().zip(v).fold(C::zero(), |s, (a, b)| s + a.mul_ref(b))).collect()
}

fn kernel_checks<F: ExactField>(m: &[Vec<F>], cols: usize) {
    let k = F::null_space(cols, m.iter().map(|r| to_sparse(r)));
    assert_eq!(k.len() + rank(m), cols, "rank-nullity");
    for v in &k {
        assert!(apply(m, v).iter().all(Zero::is_zero), "kernel vector is killed");
    }
    assert_eq!(rank(&k), k.len(), "kernel basis is independent");
    assert_eq!(rref(&k), k, "kernel basis is reduced");
    assert_eq!(nullspace(m, cols).len(), k.len());
}

fn is_hnf(h: &[Vec<Integer>]) -> bool {
    let mut last: Option<usize> = None;
    for (i, row) in h.iter().enumerate() {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if last.is_some_and(|l| p <= l) || row[p] <= Integer::zero() {
            return false;
        }
        for other in &h[..i] {
            if other[p] < Integer::zero() || other[p] >= row[p] {
                return false;
            }
        }
        last = Some(p);
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kernels_over_q_and_fp(rows in 1usize..6, cols in 1usize..7, seed in matrix(6, 7)) {
        let m: Vec<Vec<i64>> = seed[..rows].iter().map(|r| r[..cols].to_vec()).collect();
        kernel_checks::<Rational>(&over(&m), cols);
        kernel_checks::<Fp<2>>(&over(&m), cols);
        kernel_checks::<Fp<7>>(&over(&m), cols);
    }

    #[test]
    fn integer_tracker_spans_the_rational_kernel(rows in 1usize..6, cols in 1usize..7, seed in matrix(6, 7)) {
        let m: Vec<Vec<i64>> = seed[..rows].iter().map(|r| r[..cols].to_vec()).collect();
        let mut t = KernelTracker::<Integer>::new(cols);
        for r in over::<Integer>(&m) {
            t.apply(&to_sparse(&r));
        }
        prop_assert_eq!(t.dim(), cols - rank(&over::<Rational>(&m)));
        for v in t.basis() {
            let dense = gslice::linalg::to_dense(v, cols);
            prop_assert!(apply(&over::<Integer>(&m), &dense).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn hnf_is_canonical_for_the_row_lattice(rows in 1usize..5, cols in 1usize..6, seed in matrix(5, 6), mix in -3i64..=3) {
        let m: Vec<Vec<Integer>> = seed[..rows].iter().map(|r| r[..cols].iter().map(|&x| x.into()).collect()).collect();
        let h = hermite_normal_form(&m);
        prop_assert!(h.is_empty() || is_hnf(&h));
        // Adding a multiple of one row to another keeps the lattice.
        let mut n = m.clone();
        if rows > 1 {
            let r0 = n[0].clone();
            for (x, y) in n[1].iter_mut().zip(&r0) {
                *x += y * Integer::from(mix);
            }
        }
        n.swap(0, rows - 1);
        prop_assert_eq!(hermite_normal_form(&n), h);
    }

    #[test]
    fn saturation_is_idempotent_and_contains_the_input(rows in 1usize..4, cols in 2usize..6, seed in matrix(4, 6), k in 2i64..=6) {
        let m: Vec<Vec<Integer>> = seed[..rows].iter().map(|r| r[..cols].iter().map(|&x| (x * k).into()).collect()).collect();
        prop_assume!(m.iter().any(|r| r.iter().any(|x| !x.is_zero())));
        let s = saturate(&m);
        prop_assert_eq!(saturate(&s), s.clone());
        let q = |rows: &[Vec<Integer>]| -> usize {
            rank(&rows.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect::<Vec<Vec<Rational>>>())
        };
        prop_assert_eq!(q(&s), q(&m));
        // Saturation contains the lattice of the input.
        let mut joined = s.clone();
        joined.extend(m.iter().cloned());
        prop_assert_eq!(hermite_normal_form(&joined), s.clone());
        // The input divided by k is integral and lies in the saturation too.
        let divided: Vec<Vec<Integer>> = m.iter().map(|r| r.iter().map(|x| x / Integer::from(k)).collect()).collect();
        let mut joined = s.clone();
        joined.extend(divided);
        prop_assert_eq!(hermite_normal_form(&joined), s);
    }
}

#[test]
fn determinant_of_triangular_and_singular() {
    let m: Vec<Vec<Rational>> = over(&[vec![2, 1, 0], vec![0, 3, 5], vec![0, 0, -1]]);
    assert_eq!(det(&m), Rational::from_integer((-6).into()));
    let s: Vec<Vec<Rational>> = over(&[vec![1, 2], vec![2, 4]]);
    assert!(det(&s).is_zero());
    assert!(det::<Rational>(&[]).is_one());
}

#[test]
fn saturation_of_a_scaled_vector_is_primitive() {
    let m = vec![vec![Integer::from(4), Integer::from(6), Integer::from(-2)]];
    assert_eq!(saturate(&m), vec![vec![Integer::from(2), Integer::from(3), Integer::from(-1)]]);
    // A sublattice of index 2 in its saturation.
    let m = vec![vec![Integer::from(1), Integer::from(1)], vec![Integer::from(1), Integer::from(-1)]];
    assert_eq!(saturate(&m), vec![vec![Integer::one(), Integer::zero()], vec![Integer::zero(), Integer::one()]]);
}
