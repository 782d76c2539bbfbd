//! Exact sparse linear algebra over the integers and rationals: Smith
//! normal form, ranks and kernels. No floating point, no modular tricks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Scalars the matrices work over.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl Scalar for BigInt {}
impl Scalar for BigRational {}

/// A sparse exact matrix; zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix<S> {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> ExactMatrix<S> {
    pub fn new(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_triples<I>(rows: usize, cols: usize, triples: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, S)>,
    {
        let mut m = Self::new(rows, cols);
        for (r, c, v) in triples {
            let cur = m.get(r, c) + v;
            m.set(r, c, cur);
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            let cur = out.get(r, c) + v.clone();
            out.set(r, c, cur);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::new(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            out.set(r, c, -v.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        // Row-major sweep of `other` per nonzero of `self`.
        let mut by_row: BTreeMap<usize, Vec<(usize, &S)>> = BTreeMap::new();
        for (r, c, v) in other.entries() {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::new(self.rows, other.cols);
        for (r, k, a) in self.entries() {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    let cur = out.get(r, c) + a.clone() * b.clone();
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut d = vec![vec![S::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for ExactMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, c, v) in self.entries() {
            writeln!(f, "({}, {}) {}", r, c, v)?;
        }
        Ok(())
    }
}

/// Convert to an integer matrix when every entry is integral.
pub fn to_integer_matrix(m: &ExactMatrix<BigRational>) -> Option<ExactMatrix<BigInt>> {
    let mut out = ExactMatrix::new(m.rows, m.cols);
    for (r, c, v) in m.entries() {
        if !v.is_integer() {
            return None;
        }
        out.set(r, c, v.to_integer());
    }
    Some(out)
}

pub fn to_rational_matrix(m: &ExactMatrix<BigInt>) -> ExactMatrix<BigRational> {
    let mut out = ExactMatrix::new(m.rows, m.cols);
    for (r, c, v) in m.entries() {
        out.set(r, c, BigRational::from_integer(v.clone()));
    }
    out
}

/// Result of a Smith decomposition: U * M * V = D with U, V unimodular
/// and D diagonal with each entry dividing the next.
#[derive(Debug, Clone)]
pub struct Snf {
    /// Diagonal of D (length min(rows, cols), zeros included).
    pub d: Vec<BigInt>,
    pub u: ExactMatrix<BigInt>,
    pub v: ExactMatrix<BigInt>,
}

impl Snf {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.d
            .iter()
            .filter(|x| x.abs() > BigInt::one())
            .map(|x| x.abs())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

const DENSE_LIMIT: usize = 64;

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &ExactMatrix<BigInt>) -> Snf {
    let mut a = m.to_dense();
    let rows = m.rows;
    let cols = m.cols;
    let mut u = ExactMatrix::<BigInt>::identity(rows).to_dense();
    let mut v = ExactMatrix::<BigInt>::identity(cols).to_dense();
    snf_dense(&mut a, Some(&mut u), Some(&mut v));
    let d = (0..rows.min(cols)).map(|k| a[k][k].clone()).collect();
    Snf {
        d,
        u: dense_to_sparse(&u),
        v: dense_to_sparse(&v),
    }
}

/// Invariant factors only. Large sparse matrices are first shrunk by
/// eliminating unit pivots (each contributes a factor 1), then the
/// remaining core is finished densely.
pub fn invariant_factors(m: &ExactMatrix<BigInt>) -> Vec<BigInt> {
    if m.rows.max(m.cols) < DENSE_LIMIT {
        let mut a = m.to_dense();
        snf_dense(&mut a, None, None);
        return (0..m.rows.min(m.cols)).map(|k| a[k][k].clone()).collect();
    }
    let (units, core) = sparse_unit_elimination(m);
    let mut a = core.to_dense();
    snf_dense(&mut a, None, None);
    let mut d: Vec<BigInt> = vec![BigInt::one(); units];
    d.extend((0..core.rows.min(core.cols)).map(|k| a[k][k].clone()));
    d.truncate(m.rows.min(m.cols));
    d
}

fn dense_to_sparse(a: &[Vec<BigInt>]) -> ExactMatrix<BigInt> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = ExactMatrix::new(rows, cols);
    for (r, row) in a.iter().enumerate() {
        for (c, val) in row.iter().enumerate() {
            if !val.is_zero() {
                m.set(r, c, val.clone());
            }
        }
    }
    m
}

/// Eliminate +-1 pivots with unimodular row/column operations, choosing
/// low-fill pivots first, and return the eliminated count plus the
/// remaining compressed core.
fn sparse_unit_elimination(m: &ExactMatrix<BigInt>) -> (usize, ExactMatrix<BigInt>) {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    for (r, c, val) in m.entries() {
        rows[r].insert(c, val.clone());
    }
    let mut row_alive: Vec<bool> = vec![true; m.rows];
    let mut col_alive: Vec<bool> = vec![true; m.cols];
    let mut units = 0usize;
    loop {
        // Markowitz-style pick among unit entries.
        let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
        for (r, row) in rows.iter().enumerate() {
            if row_alive[r] {
                for &c in row.keys() {
                    *col_count.entry(c).or_insert(0) += 1;
                }
            }
        }
        let mut best: Option<(usize, usize, usize)> = None; // (score, r, c)
        for (r, row) in rows.iter().enumerate() {
            if !row_alive[r] {
                continue;
            }
            for (&c, val) in row.iter() {
                if val.abs().is_one() {
                    let score = (row.len() - 1) * (col_count[&c] - 1);
                    if best.is_none_or(|(s, _, _)| score < s) {
                        best = Some((score, r, c));
                    }
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };
        let pivot = rows[pr][&pc].clone();
        // Eliminate column pc from every other live row.
        let pivot_row = rows[pr].clone();
        for r in 0..rows.len() {
            if r == pr || !row_alive[r] {
                continue;
            }
            let Some(factor) = rows[r].get(&pc).cloned() else {
                continue;
            };
            let scale = &factor * &pivot; // pivot is +-1, so factor/pivot = factor*pivot
            for (&c, val) in pivot_row.iter() {
                let cur = rows[r].get(&c).cloned().unwrap_or_else(BigInt::zero);
                let next = cur - &scale * val;
                if next.is_zero() {
                    rows[r].remove(&c);
                } else {
                    rows[r].insert(c, next);
                }
            }
        }
        row_alive[pr] = false;
        col_alive[pc] = false;
        for row in rows.iter_mut() {
            row.remove(&pc);
        }
        units += 1;
    }
    // Compress the live submatrix.
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| row_alive[r]).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| col_alive[c]).collect();
    let col_index: BTreeMap<usize, usize> =
        live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut core = ExactMatrix::new(live_rows.len(), live_cols.len());
    for (i, &r) in live_rows.iter().enumerate() {
        for (&c, val) in rows[r].iter() {
            core.set(i, col_index[&c], val.clone());
        }
    }
    (units, core)
}

/// Round-to-nearest quotient, so the remainder has at most half the
/// pivot's magnitude.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.sign() == b.sign()) || r.is_zero() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// In-place dense Smith reduction, optionally tracking U (row ops) and V
/// (column ops).
fn snf_dense(
    a: &mut [Vec<BigInt>],
    mut u: Option<&mut Vec<Vec<BigInt>>>,
    mut v: Option<&mut Vec<Vec<BigInt>>>,
) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let steps = rows.min(cols);
    for k in 0..steps {
        'pivot: loop {
            // Smallest nonzero magnitude in the trailing submatrix.
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return; // all remaining entries vanish
            };
            if pi != k {
                a.swap(pi, k);
                if let Some(u) = u.as_deref_mut() {
                    u.swap(pi, k);
                }
            }
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(pj, k);
                }
                if let Some(v) = v.as_deref_mut() {
                    for row in v.iter_mut() {
                        row.swap(pj, k);
                    }
                }
            }
            if a[k][k].is_negative() {
                for j in 0..cols {
                    a[k][j] = -a[k][j].clone();
                }
                if let Some(u) = u.as_deref_mut() {
                    for j in 0..rows {
                        u[k][j] = -u[k][j].clone();
                    }
                }
            }

            let mut dirty = false;
            for i in k + 1..rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[i][k], &a[k][k]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let delta = &q * &a[k][j];
                        a[i][j] -= delta;
                    }
                    if let Some(u) = u.as_deref_mut() {
                        for j in 0..rows {
                            let delta = &q * &u[k][j];
                            u[i][j] -= delta;
                        }
                    }
                }
                if !a[i][k].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[k][j], &a[k][k]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let delta = &q * &a[i][k];
                        a[i][j] -= delta;
                    }
                    if let Some(v) = v.as_deref_mut() {
                        for i in 0..cols {
                            let delta = &q * &v[i][k];
                            v[i][j] -= delta;
                        }
                    }
                }
                if !a[k][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Row k and column k are clear; enforce divisibility of the
            // trailing block by the pivot.
            let pivot = a[k][k].clone();
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&a[i][j] % &pivot).is_zero() {
                        // Fold row i into row k and restart the pivot loop.
                        for col in 0..cols {
                            let add = a[i][col].clone();
                            a[k][col] += add;
                        }
                        if let Some(u) = u.as_deref_mut() {
                            for col in 0..rows {
                                let add = u[i][col].clone();
                                u[k][col] += add;
                            }
                        }
                        continue 'pivot;
                    }
                }
            }
            break;
        }
    }
}

/// Exact rank and kernel dimension of a rational matrix, by fraction-free
/// integer elimination after clearing denominators row by row.
pub fn rank_and_kernel(m: &ExactMatrix<BigRational>) -> (usize, usize) {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = Vec::new();
    let mut grouped: BTreeMap<usize, Vec<(usize, &BigRational)>> = BTreeMap::new();
    for (r, c, v) in m.entries() {
        grouped.entry(r).or_default().push((c, v));
    }
    for (_, cells) in grouped {
        let lcm = cells
            .iter()
            .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let mut row = BTreeMap::new();
        for (c, v) in cells {
            row.insert(c, v.numer() * (&lcm / v.denom()));
        }
        rows.push(row);
    }

    let mut rank = 0usize;
    loop {
        // Smallest-magnitude leading candidate among remaining rows.
        let mut best: Option<(usize, BigInt)> = None;
        for (i, row) in rows.iter().enumerate() {
            if let Some((_, v)) = row.iter().next() {
                let a = v.abs();
                if best.as_ref().is_none_or(|(_, b)| a < *b) {
                    best = Some((i, a));
                }
            }
        }
        let Some((pivot_row_idx, _)) = best else { break };
        let row = rows.swap_remove(pivot_row_idx);
        let (&pc, pv) = row.iter().next().unwrap();
        let pv = pv.clone();
        rank += 1;
        for other in rows.iter_mut() {
            if let Some(f) = other.get(&pc).cloned() {
                // other := pv * other - f * row, then normalize by gcd.
                let mut next = BTreeMap::new();
                for (&c, v) in other.iter() {
                    next.insert(c, v * &pv);
                }
                for (&c, v) in row.iter() {
                    let cur = next.get(&c).cloned().unwrap_or_else(BigInt::zero);
                    let val = cur - &f * v;
                    if val.is_zero() {
                        next.remove(&c);
                    } else {
                        next.insert(c, val);
                    }
                }
                let g = next
                    .values()
                    .fold(BigInt::zero(), |acc, v| acc.gcd(v));
                if !g.is_zero() && !g.is_one() {
                    for v in next.values_mut() {
                        *v = &*v / &g;
                    }
                }
                *other = next;
            }
        }
        rows.retain(|r| !r.is_empty());
    }
    (rank, m.cols - rank)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &ExactMatrix<BigInt>) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_dense();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}
