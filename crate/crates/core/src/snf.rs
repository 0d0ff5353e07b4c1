//! Smith normal form over the integers.
//!
//! The reduction picks the entry of least absolute value in the remaining
//! block as pivot, clears its row and column by Euclidean steps, and then
//! repairs divisibility against the rest of the block. Transforms are only
//! accumulated when requested.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::{Dense, IntegerMatrix};

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d_1 | d_2 | ...`. `u_inv` is the inverse of `U`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    /// Nonzero diagonal entries of `D`, in order.
    pub invariants: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

struct Reducer {
    a: Dense,
    rows: usize,
    cols: usize,
    // (u, u_inv, v) when tracking
    track: Option<(Dense, Dense, Dense)>,
}

fn identity(n: usize) -> Dense {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some((u, ui, _)) = &mut self.track {
            u.swap(i, j);
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some((_, _, v)) = &mut self.track {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        let src = self.a[j].clone();
        for (x, s) in self.a[i].iter_mut().zip(&src) {
            if !s.is_zero() {
                *x += k * s;
            }
        }
        if let Some((u, ui, _)) = &mut self.track {
            let src = u[j].clone();
            for (x, s) in u[i].iter_mut().zip(&src) {
                if !s.is_zero() {
                    *x += k * s;
                }
            }
            // inverse: col_j -= k * col_i
            for row in ui.iter_mut() {
                let t = &row[i] * k;
                row[j] -= t;
            }
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for row in self.a.iter_mut() {
            if !row[j].is_zero() {
                let t = &row[j] * k;
                row[i] += t;
            }
        }
        if let Some((_, _, v)) = &mut self.track {
            for row in v.iter_mut() {
                if !row[j].is_zero() {
                    let t = &row[j] * k;
                    row[i] += t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -core::mem::take(x);
        }
        if let Some((u, ui, _)) = &mut self.track {
            for x in u[i].iter_mut() {
                *x = -core::mem::take(x);
            }
            for row in ui.iter_mut() {
                row[i] = -core::mem::take(&mut row[i]);
            }
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= x.abs() => {}
                    _ => {
                        if x.abs().is_one() {
                            return Some((i, j));
                        }
                        best = Some((i, j));
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.add_row(i, t, &-q);
                    if !self.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.add_col(j, t, &-q);
                    if !self.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // move the smallest remaining entry of row/column t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..self.rows {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.cols {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                // row and column clear; enforce divisibility on the block
                let p = self.a[t][t].clone();
                let offender = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

fn reduce(m: &IntegerMatrix, track: bool) -> Reducer {
    let mut r = Reducer {
        a: m.to_dense(),
        rows: m.rows(),
        cols: m.cols(),
        track: track.then(|| (identity(m.rows()), identity(m.rows()), identity(m.cols()))),
    };
    r.run();
    r
}

fn diagonal(r: &Reducer) -> Vec<BigInt> {
    (0..r.rows.min(r.cols)).map(|i| r.a[i][i].clone()).take_while(|x| !x.is_zero()).collect()
}

/// Full decomposition with transforms.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let r = reduce(m, true);
    let invariants = diagonal(&r);
    let d = IntegerMatrix::from_dense(&r.a, r.cols);
    let (u, ui, v) = r.track.expect("tracking enabled");
    SmithForm {
        u: IntegerMatrix::from_dense(&u, m.rows()),
        u_inv: IntegerMatrix::from_dense(&ui, m.rows()),
        d,
        v: IntegerMatrix::from_dense(&v, m.cols()),
        invariants,
    }
}

/// Nonzero invariant factors only; cheaper than [`smith_normal_form`].
pub fn invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    if m.is_zero() {
        return Vec::new();
    }
    let r = reduce(m, false);
    diagonal(&r)
}
