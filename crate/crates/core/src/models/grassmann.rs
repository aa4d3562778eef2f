//! Point configurations as full-rank matrices: maximal minors and Gale duals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{det, nullspace, rank};

/// Exact `n x m` matrix of rank `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigMatrix {
    rows: Vec<Vec<BigRational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix has no entries")]
    Empty,
    #[error("row {0} has a different length")]
    Ragged(usize),
    #[error("matrix has rank {rank}, expected full row rank {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("n must be < m for a Gale dual, got {n} x {m}")]
    NotWide { n: usize, m: usize },
    #[error("line {line}: cannot read `{token}` as a rational")]
    Entry { line: usize, token: String },
}

impl ConfigMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self, MatrixError> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || m == 0 {
            return Err(MatrixError::Empty);
        }
        if let Some(i) = rows.iter().position(|r| r.len() != m) {
            return Err(MatrixError::Ragged(i));
        }
        let r = rank(&rows);
        if r != rows.len() {
            return Err(MatrixError::RankDeficient { rank: r, rows: rows.len() });
        }
        Ok(ConfigMatrix { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, MatrixError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect())
    }

    /// Whitespace-separated entries `p` or `p/q`, one row per non-empty line.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let mut rows = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| parse_rational(t).ok_or_else(|| MatrixError::Entry { line: no + 1, token: t.to_string() }))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    /// Determinant of the columns `cols` (zero-based).
    pub fn minor(&self, cols: &[usize]) -> BigRational {
        let sub: Vec<Vec<BigRational>> = self.rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        det(&sub)
    }
}

fn parse_rational(t: &str) -> Option<BigRational> {
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (t.parse::<BigInt>().ok()?, BigInt::one()),
    };
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

impl fmt::Display for ConfigMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Maximal minors indexed by column sets in lexicographic order.
pub fn pluecker(m: &ConfigMatrix) -> Vec<(Vec<usize>, BigRational)> {
    subsets(m.ncols(), m.nrows()).into_iter().map(|s| {
        let v = m.minor(&s);
        (s, v)
    }).collect()
}

/// Basis of the kernel of `m`, as rows, scaled so that the first nonzero
/// maximal minor is positive.
pub fn gale_transform(m: &ConfigMatrix) -> Result<ConfigMatrix, MatrixError> {
    let (n, k) = (m.nrows(), m.ncols());
    if n >= k {
        return Err(MatrixError::NotWide { n, m: k });
    }
    let mut rows = nullspace(m.rows(), k);
    let g = ConfigMatrix::new(rows.clone())?;
    let first = pluecker(&g).into_iter().map(|(_, v)| v).find(|v| !v.is_zero()).expect("full rank");
    if first.is_negative() {
        for x in rows[0].iter_mut() {
            *x = -x.clone();
        }
    }
    ConfigMatrix::new(rows)
}

/// Sign attached to a column set in the complementarity identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRule {
    /// `(-1)^(sum of one-based indices in I)`.
    IndexSum,
    /// The sign of the shuffle permutation `(I, I^c)`, which is the index-sum
    /// sign times `(-1)^(n(n+1)/2)`.
    Shuffle,
}

impl SignRule {
    fn sign(self, set: &[usize]) -> bool {
        // true means negative
        let sum: usize = set.iter().map(|i| i + 1).sum();
        let n = set.len();
        match self {
            SignRule::IndexSum => sum % 2 == 1,
            SignRule::Shuffle => (sum + n * (n + 1) / 2) % 2 == 1,
        }
    }
}

/// The scalar `lambda` with `p_I(m) = sign(I) * lambda * q_{I^c}(g)` for every
/// column set `I`, if a single one works.
pub fn complementarity(m: &ConfigMatrix, g: &ConfigMatrix, rule: SignRule) -> Option<BigRational> {
    let k = m.ncols();
    if g.ncols() != k || g.nrows() + m.nrows() != k {
        return None;
    }
    let mut lambda: Option<BigRational> = None;
    let mut pairs = Vec::new();
    for (set, p) in pluecker(m) {
        let comp: Vec<usize> = (0..k).filter(|c| !set.contains(c)).collect();
        let mut q = g.minor(&comp);
        if rule.sign(&set) {
            q = -q;
        }
        if lambda.is_none() && !q.is_zero() {
            lambda = Some(&p / &q);
        }
        pairs.push((p, q));
    }
    let lambda = lambda?;
    if lambda.is_zero() {
        return None;
    }
    pairs.iter().all(|(p, q)| *p == &lambda * q).then_some(lambda)
}
