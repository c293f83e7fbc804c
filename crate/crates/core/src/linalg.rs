//! Exact linear algebra over the rationals.
//!
//! Two routes are provided. [`QMatrix`] is a small dense matrix with reduced
//! row echelon form, used for weight-space bookkeeping where dimensions are
//! tiny. [`SparseMatrix`] holds the cohomology differentials; its rank is
//! computed by fraction-free Bareiss elimination over `BigInt` with
//! Markowitz pivot selection.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Q;

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| crate::rational::fmt_q(self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        QMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Q) {
        self.data[r * self.cols + c] = x;
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<Q> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += self.get(r, c) * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// The row vector `v·M`.
    pub fn vec_mul(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![Q::zero(); self.cols];
        for (r, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                let a = self.get(r, c);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &QMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c) - &f * m.get(row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel, one vector per non-pivot column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Q::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(red.select(&rows, &cols))
    }
}

/// Sparse matrix with rational entries, stored row-wise.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<BTreeMap<usize, Q>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![BTreeMap::new(); nrows],
        }
    }

    pub fn add_entry(&mut self, r: usize, c: usize, x: &Q) {
        if x.is_zero() {
            return;
        }
        let e = self.rows[r].entry(c).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.rows[r].remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.rows[r].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (&usize, &Q)> {
        self.rows[r].iter()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = SparseMatrix::new(self.nrows, other.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &other.rows[*k] {
                    out.add_entry(r, *c, &(a * b));
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.nrows, self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row {
                m.set(r, *c, x.clone());
            }
        }
        m
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let rows = self
            .rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(integral_row)
            .collect();
        bareiss_rank(rows)
    }
}

/// Clears denominators of a rational row; scaling a row does not change rank.
fn integral_row(row: &BTreeMap<usize, Q>) -> BTreeMap<usize, BigInt> {
    let lcm = row
        .values()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|(c, x)| (*c, x.numer() * (&lcm / x.denom())))
        .collect()
}

/// Rank of an integer matrix given as sparse rows.
///
/// Every step picks the pivot minimising the Markowitz count
/// `(row_nnz - 1) * (col_nnz - 1)` and applies the Bareiss update
/// `a' = (p * a - a_c * pivot_row) / previous_pivot` to every remaining row.
/// The division is exact because each intermediate entry is a minor of the
/// input matrix.
/// Right kernel of a matrix given its reduced row echelon form.
pub fn kernel_from_rref(r: &QMatrix, pivots: &[usize]) -> Vec<Vec<Q>> {
    let mut basis = Vec::new();
    for free in (0..r.cols()).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); r.cols()];
        v[free] = Q::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, free).clone();
        }
        basis.push(v);
    }
    basis
}

pub fn bareiss_rank(mut rows: Vec<BTreeMap<usize, BigInt>>) -> usize {
    rows.retain(|r| !r.is_empty());
    let mut prev = BigInt::one();
    let mut rank = 0;
    while !rows.is_empty() {
        let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
        for row in &rows {
            for c in row.keys() {
                *col_count.entry(*c).or_default() += 1;
            }
        }
        let mut best: Option<(usize, u64, usize, usize)> = None;
        for (ri, row) in rows.iter().enumerate() {
            for (c, v) in row {
                let cost = (row.len() - 1) * (col_count[c] - 1);
                let size = v.bits();
                let key = (cost, size, ri, *c);
                if best.map_or(true, |b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
        }
        let Some((_, _, pr, pc)) = best else { break };
        let pivot_row = rows.swap_remove(pr);
        let p = pivot_row[&pc].clone();
        rank += 1;
        for row in rows.iter_mut() {
            let a = row.remove(&pc).unwrap_or_else(BigInt::zero);
            let mut next = BTreeMap::new();
            for (c, v) in row.iter() {
                next.insert(*c, v * &p);
            }
            if !a.is_zero() {
                for (c, v) in &pivot_row {
                    if *c == pc {
                        continue;
                    }
                    let e = next.entry(*c).or_insert_with(BigInt::zero);
                    *e -= &a * v;
                }
            }
            next.retain(|_, v| !v.is_zero());
            for v in next.values_mut() {
                let (quot, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                *v = quot;
            }
            *row = next;
        }
        rows.retain(|r| !r.is_empty());
        prev = p;
    }
    rank
}
