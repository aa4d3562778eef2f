//! Exact linear algebra: kernels of large sparse maps, echelon forms, and
//! integer lattice saturation.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::{Field, Fp, Scalar};

/// Sparse vector: `(index, value)` pairs with strictly increasing indices and nonzero values.
pub type SparseVec<C> = Vec<(usize, C)>;

/// Coefficient types the kernel tracker can eliminate over without leaving the type.
pub trait KernelRing: Scalar {
    /// Replaces `target` by a combination of `target` and `pivot` that is killed by
    /// the current functional, given their values `tv` and `pv` (`pv != 0`).
    fn eliminate(target: &SparseVec<Self>, tv: &Self, pivot: &SparseVec<Self>, pv: &Self) -> SparseVec<Self>;

    /// Rescales to a canonical representative of the same line.
    fn normalize(v: &mut SparseVec<Self>);
}

fn axpy<C: Scalar>(alpha: &C, x: &SparseVec<C>, beta: &C, y: &SparseVec<C>) -> SparseVec<C> {
    // alpha * x + beta * y
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (idx, val) = if take_x {
            i += 1;
            (x[i - 1].0, alpha.mul_ref(&x[i - 1].1))
        } else if take_y {
            j += 1;
            (y[j - 1].0, beta.mul_ref(&y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, alpha.mul_ref(&x[i - 1].1).add_ref(&beta.mul_ref(&y[j - 1].1)))
        };
        if !val.is_zero() {
            out.push((idx, val));
        }
    }
    out
}

impl KernelRing for BigInt {
    fn eliminate(target: &SparseVec<Self>, tv: &Self, pivot: &SparseVec<Self>, pv: &Self) -> SparseVec<Self> {
        let g = tv.gcd(pv);
        axpy(&(pv / &g), target, &-(tv / &g), pivot)
    }

    fn normalize(v: &mut SparseVec<Self>) {
        let mut g = v.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        if g.is_zero() {
            return;
        }
        if v[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in v.iter_mut() {
                *c = &*c / &g;
            }
        }
    }
}

fn field_eliminate<F: Field>(target: &SparseVec<F>, tv: &F, pivot: &SparseVec<F>, pv: &F) -> SparseVec<F> {
    let f = tv.clone() / pv.clone();
    axpy(&F::one(), target, &-f, pivot)
}

fn field_normalize<F: Field>(v: &mut SparseVec<F>) {
    if let Some(inv) = v.first().and_then(|(_, c)| c.inv()) {
        for (_, c) in v.iter_mut() {
            *c = c.mul_ref(&inv);
        }
    }
}

impl KernelRing for BigRational {
    fn eliminate(target: &SparseVec<Self>, tv: &Self, pivot: &SparseVec<Self>, pv: &Self) -> SparseVec<Self> {
        field_eliminate(target, tv, pivot, pv)
    }
    fn normalize(v: &mut SparseVec<Self>) {
        field_normalize(v)
    }
}

impl<const P: u32> KernelRing for Fp<P> {
    fn eliminate(target: &SparseVec<Self>, tv: &Self, pivot: &SparseVec<Self>, pv: &Self) -> SparseVec<Self> {
        field_eliminate(target, tv, pivot, pv)
    }
    fn normalize(v: &mut SparseVec<Self>) {
        field_normalize(v)
    }
}

/// Null space of a linear map fed one row at a time.
///
/// Starts from the standard basis of the column space and keeps, after each
/// row, a basis of the vectors annihilated by every row seen so far. Memory is
/// proportional to the kernel, never to the number of rows.
#[derive(Clone, Debug)]
pub struct KernelTracker<C: KernelRing> {
    ncols: usize,
    basis: Vec<SparseVec<C>>,
    scratch: Vec<C>,
}

impl<C: KernelRing> KernelTracker<C> {
    pub fn new(ncols: usize) -> Self {
        let basis = (0..ncols).map(|i| vec![(i, C::one())]).collect();
        KernelTracker { ncols, basis, scratch: vec![C::zero(); ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Restricts the kernel to vectors annihilated by `row`.
    pub fn apply(&mut self, row: &[(usize, C)]) {
        if self.basis.is_empty() || row.is_empty() {
            return;
        }
        for (i, c) in row {
            self.scratch[*i] = c.clone();
        }
        let mut values: Vec<(usize, C)> = Vec::new();
        for (k, v) in self.basis.iter().enumerate() {
            let mut s = C::zero();
            for (i, c) in v {
                let r = &self.scratch[*i];
                if !r.is_zero() {
                    s = s.add_ref(&r.mul_ref(c));
                }
            }
            if !s.is_zero() {
                values.push((k, s));
            }
        }
        for (i, _) in row {
            self.scratch[*i] = C::zero();
        }
        if values.is_empty() {
            return;
        }
        // Pivot on the sparsest affected vector to limit fill-in.
        let p = (0..values.len()).min_by_key(|&t| (self.basis[values[t].0].len(), values[t].0)).expect("nonempty");
        let (pk, pv) = values[p].clone();
        let pivot = self.basis[pk].clone();
        for (t, (k, tv)) in values.iter().enumerate() {
            if t == p {
                continue;
            }
            let mut v = C::eliminate(&self.basis[*k], tv, &pivot, &pv);
            C::normalize(&mut v);
            self.basis[*k] = v;
        }
        self.basis.remove(pk);
    }

    pub fn basis(&self) -> &[SparseVec<C>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<SparseVec<C>> {
        self.basis
    }
}

/// Fields for which a reduced null-space basis can be computed from a stream of sparse rows.
pub trait ExactField: Field {
    /// Kernel basis in reduced row echelon form (pivots first in column order).
    fn null_space(ncols: usize, rows: impl IntoIterator<Item = SparseVec<Self>>) -> Vec<Vec<Self>>;
}

impl ExactField for BigRational {
    // Rows are scaled to integers and eliminated fraction-free.
    fn null_space(ncols: usize, rows: impl IntoIterator<Item = SparseVec<Self>>) -> Vec<Vec<Self>> {
        let mut t = KernelTracker::<BigInt>::new(ncols);
        for row in rows {
            if t.dim() == 0 {
                break;
            }
            let l = row.iter().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
            let int_row: SparseVec<BigInt> =
                row.iter().map(|(i, c)| (*i, (c.numer() * (&l / c.denom())))).collect();
            t.apply(&int_row);
        }
        let dense: Vec<Vec<BigRational>> = t
            .basis()
            .iter()
            .map(|v| to_dense(v, ncols).into_iter().map(BigRational::from_integer).collect())
            .collect();
        rref(&dense)
    }
}

impl<const P: u32> ExactField for Fp<P> {
    fn null_space(ncols: usize, rows: impl IntoIterator<Item = SparseVec<Self>>) -> Vec<Vec<Self>> {
        let mut t = KernelTracker::<Self>::new(ncols);
        for row in rows {
            if t.dim() == 0 {
                break;
            }
            t.apply(&row);
        }
        let dense: Vec<Vec<Self>> = t.basis().iter().map(|v| to_dense(v, ncols)).collect();
        rref(&dense)
    }
}

pub fn to_dense<C: Scalar>(v: &SparseVec<C>, n: usize) -> Vec<C> {
    let mut out = vec![C::zero(); n];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

pub fn to_sparse<C: Scalar>(v: &[C]) -> SparseVec<C> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Reduced row echelon form; zero rows are dropped. Pivots are the first
/// nonzero entries in column order, normalized to one.
pub fn rref<F: Field>(rows: &[Vec<F>]) -> Vec<Vec<F>> {
    rref_with_pivots(rows).0
}

pub fn rref_with_pivots<F: Field>(rows: &[Vec<F>]) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut a: Vec<Vec<F>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][col].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = x.mul_ref(&inv);
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..ncols {
                    let t = f.mul_ref(&a[r][j]);
                    a[i][j] = a[i][j].clone() - t;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    rref_with_pivots(rows).1.len()
}

/// Basis of `{x : A x = 0}`, one vector per free column, in column order.
pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let (r, pivots) = rref_with_pivots(rows);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

pub fn det<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else { return F::zero() };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        d = d.mul_ref(&a[col][col]);
        let inv = a[col][col].inv().expect("nonzero pivot");
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].mul_ref(&inv);
            for j in col..n {
                let t = f.mul_ref(&a[col][j]);
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
    d
}

/// Row Hermite normal form of an integer matrix: echelon, positive pivots,
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == a.len() {
            break;
        }
        loop {
            let best = (r..a.len()).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| a[i][col].magnitude().clone());
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[r][col]);
                sub_multiple(&mut a, i, r, &q);
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = a[i][col].div_floor(&a[r][col]);
            if !q.is_zero() {
                sub_multiple(&mut a, i, r, &q);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

fn sub_multiple(a: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let (t, s) = if target < source {
        let (lo, hi) = a.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Basis in Hermite normal form of `span_Q(rows) ∩ Z^n`.
pub fn saturate(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a = hermite_normal_form(rows);
    let mut primes: Vec<u64> = Vec::new();
    for row in &a {
        let pivot = row.iter().find(|x| !x.is_zero()).expect("nonzero row");
        for p in prime_factors(pivot) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();
    for p in primes {
        while let Some(y) = left_kernel_vector_mod(&a, p) {
            let j = y.iter().position(|&c| c != 0).expect("nonzero kernel vector");
            let n = a[0].len();
            let mut v = vec![BigInt::zero(); n];
            for (yi, row) in y.iter().zip(&a) {
                if *yi != 0 {
                    let yi = BigInt::from(*yi);
                    for (x, r) in v.iter_mut().zip(row) {
                        *x += &yi * r;
                    }
                }
            }
            let pb = BigInt::from(p);
            a[j] = v.into_iter().map(|x| x / &pb).collect();
            a = hermite_normal_form(&a);
        }
    }
    a
}

/// A nonzero `y` with `y A ≡ 0 (mod p)`, entries in `[0, p)`, with its first
/// nonzero entry equal to one.
fn left_kernel_vector_mod(a: &[Vec<BigInt>], p: u64) -> Option<Vec<u64>> {
    let r = a.len();
    let n = a.first().map_or(0, Vec::len);
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<u64> = row.iter().map(|x| x.mod_floor(&pb).to_u64().expect("reduced")).collect();
            v.extend((0..r).map(|k| u64::from(k == i)));
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..r).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..r {
            if i != rank && m[i][col] != 0 {
                let f = m[i][col];
                for j in 0..n + r {
                    m[i][j] = (m[i][j] + (p - f) * m[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    if rank == r {
        return None;
    }
    let mut y = m[rank][n..].to_vec();
    let first = *y.iter().find(|&&c| c != 0).expect("identity block keeps rows independent");
    let inv = pow_mod(first, p - 2, p);
    for c in y.iter_mut() {
        *c = *c * inv % p;
    }
    Some(y)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Distinct prime factors by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let db = BigInt::from(d);
        if (&n % &db).is_zero() {
            out.push(d);
            while (&n % &db).is_zero() {
                n /= &db;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor exceeds u64"));
    }
    out
}
