//! Sublattices of `Z^N` and their quotients, used to present subquotients
//! such as the pages of a spectral sequence.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::homology::HomologyGroup;
use crate::matrix::IntegerMatrix;
use crate::snf::{smith_normal_form, SmithForm};

/// Basis of the integer kernel of `m` (as vectors of length `m.cols()`).
pub fn kernel_basis(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let n = m.cols();
    if m.is_zero() {
        return (0..n).map(|j| unit(n, j)).collect();
    }
    let s = smith_normal_form(m);
    let v = s.v.to_dense();
    (s.rank()..n).map(|j| v.iter().map(|row| row[j].clone()).collect()).collect()
}

fn unit(n: usize, j: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[j] = BigInt::one();
    e
}

fn columns_matrix(ambient: usize, cols: &[Vec<BigInt>]) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(ambient, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.add(i, j, x.clone());
        }
    }
    m
}

/// A lattice given by linearly independent generators in `Z^ambient`.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    snf: Option<SmithForm>,
}

impl Lattice {
    /// `basis` must be linearly independent.
    pub fn new(ambient: usize, basis: Vec<Vec<BigInt>>) -> Self {
        let snf = (!basis.is_empty()).then(|| smith_normal_form(&columns_matrix(ambient, &basis)));
        if let Some(s) = &snf {
            assert_eq!(s.rank(), basis.len(), "lattice generators must be independent");
        }
        Self { ambient, basis, snf }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Integer coordinates of `x` in the basis, or `None` when `x` is not in
    /// the lattice.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let Some(s) = &self.snf else {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        };
        let ux = s.u.apply(x);
        let k = self.basis.len();
        if ux[k..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut y = Vec::with_capacity(k);
        for (i, d) in s.invariants.iter().enumerate() {
            let (q, r) = ux[i].div_rem(d);
            if !r.is_zero() {
                return None;
            }
            y.push(q);
        }
        Some(s.v.apply(&y))
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coordinates(x).is_some()
    }
}

/// `numerator / denominator` where the denominator is generated by arbitrary
/// vectors lying in the numerator lattice.
#[derive(Clone, Debug)]
pub struct Subquotient {
    numerator: Lattice,
    // transform to SNF coordinates of the quotient
    u: IntegerMatrix,
    // new numerator basis vectors, aligned with `factors`
    generators: Vec<Vec<BigInt>>,
    // factor per generator: 0 for free, > 1 for torsion; unit factors dropped
    factors: Vec<BigInt>,
    kept: Vec<usize>,
}

impl Subquotient {
    /// Returns `None` if some denominator generator is not in the numerator.
    pub fn new(numerator: Lattice, denominator: &[Vec<BigInt>]) -> Option<Self> {
        let k = numerator.rank();
        let mut coords = IntegerMatrix::zeros(k, denominator.len());
        for (j, g) in denominator.iter().enumerate() {
            let c = numerator.coordinates(g)?;
            for (i, x) in c.into_iter().enumerate() {
                coords.add(i, j, x);
            }
        }
        let s = smith_normal_form(&coords);
        let ui = s.u_inv.to_dense();
        let mut generators = Vec::new();
        let mut factors = Vec::new();
        let mut kept = Vec::new();
        for i in 0..k {
            let d = s.invariants.get(i).cloned().unwrap_or_default();
            if d.is_one() {
                continue;
            }
            // new basis vector i = sum_r basis[r] * u_inv[r][i]
            let mut v = vec![BigInt::zero(); numerator.ambient()];
            for (r, b) in numerator.basis().iter().enumerate() {
                let c = &ui[r][i];
                if c.is_zero() {
                    continue;
                }
                for (vx, bx) in v.iter_mut().zip(b) {
                    *vx += c * bx;
                }
            }
            generators.push(v);
            factors.push(d);
            kept.push(i);
        }
        Some(Self { numerator, u: s.u, generators, factors, kept })
    }

    pub fn group(&self) -> HomologyGroup {
        let rank = self.factors.iter().filter(|d| d.is_zero()).count();
        let torsion = self.factors.iter().filter(|d| !d.is_zero()).cloned().collect();
        HomologyGroup::from_parts(rank, torsion)
    }

    /// Representatives in the ambient space of the quotient generators.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Order of each generator: 0 when free.
    pub fn orders(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn numerator(&self) -> &Lattice {
        &self.numerator
    }

    /// Class of a numerator element in generator coordinates, torsion entries
    /// reduced into `0..order`. `None` if `x` is outside the numerator.
    pub fn class_of(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.numerator.coordinates(x)?;
        let y = if c.is_empty() { Vec::new() } else { self.u.apply(&c) };
        Some(
            self.kept
                .iter()
                .zip(&self.factors)
                .map(|(&i, d)| if d.is_zero() { y[i].clone() } else { y[i].mod_floor(d) })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn kernel_of_a_row() {
        let m = IntegerMatrix::from_rows(&[&[1, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(m.apply(x).iter().all(Zero::is_zero));
        }
        // saturated: (1,-1,0) is an integer combination
        let l = Lattice::new(3, k);
        assert!(l.contains(&v(&[1, -1, 0])));
        assert!(!l.contains(&v(&[1, 0, 0])));
    }

    #[test]
    fn quotient_with_torsion() {
        let l = Lattice::new(2, vec![v(&[1, 0]), v(&[0, 1])]);
        let q = Subquotient::new(l, &[v(&[2, 0]), v(&[0, 3])]).unwrap();
        let g = q.group();
        assert_eq!(g.rank, 0);
        assert_eq!(g.torsion, vec![BigInt::from(6)]);
        assert_eq!(q.class_of(&v(&[2, 3])).unwrap(), vec![BigInt::zero()]);
    }

    #[test]
    fn denominator_outside_numerator() {
        let l = Lattice::new(2, vec![v(&[2, 0])]);
        assert!(Subquotient::new(l, &[v(&[1, 0])]).is_none());
    }
}
