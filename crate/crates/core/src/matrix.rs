//! Sparse integer matrices in triplet form, densified only for reduction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Row-major dense matrix used inside Smith normal form and lattice code.
pub type Dense = Vec<Vec<BigInt>>;

/// Sparse integer matrix. Entries are keyed by `(row, col)`; zeros are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.add(i, i, BigInt::one());
        }
        m
    }

    pub fn from_dense(d: &Dense, cols: usize) -> Self {
        let mut m = Self::zeros(d.len(), cols);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.add(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.add(i, j, BigInt::from(v));
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

    /// Adds `v` to the entry at `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((i, j)).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn to_dense(&self) -> Dense {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            t.entries.insert((j, i), v.clone());
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigInt)>> = BTreeMap::new();
        for (&(k, j), v) in &other.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add(i, j, a * b);
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![BigInt::zero(); self.rows];
        for (&(i, j), v) in &self.entries {
            y[i] += v * &x[j];
        }
        y
    }

    /// Restriction to the given rows and columns, reindexed in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let rmap: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let cmap: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut out = Self::zeros(rows.len(), cols.len());
        for (&(i, j), v) in &self.entries {
            if let (Some(&r), Some(&c)) = (rmap.get(&i), cmap.get(&j)) {
                out.add(r, c, v.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = IntegerMatrix::from_rows(&[&[1, 2], &[0, 1]]);
        let b = IntegerMatrix::from_rows(&[&[1, -2], &[0, 1]]);
        assert_eq!(a.mul(&b), IntegerMatrix::identity(2));
        assert_eq!(a.transpose().get(1, 0), BigInt::from(2));
    }

    #[test]
    fn additions_cancel_to_sparse_zero() {
        let mut m = IntegerMatrix::zeros(2, 2);
        m.add(0, 1, BigInt::from(3));
        m.add(0, 1, BigInt::from(-3));
        assert!(m.is_zero());
    }

    #[test]
    fn submatrix_reindexes() {
        let a = IntegerMatrix::from_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        let s = a.submatrix(&[1], &[2, 0]);
        assert_eq!(s.to_dense(), vec![vec![BigInt::from(6), BigInt::from(4)]]);
    }
}
