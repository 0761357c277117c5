//! Full-rank sublattices of Z^n, their canonical residues and torus quotients.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{hnf_form, IntMatrix};
use crate::vector::IntVec;

/// Default cap on how many cosets may be enumerated explicitly.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 22;

/// A full-rank sublattice of Z^n stored by its row-style Hermite basis.
///
/// Two `Lattice` values are equal iff they describe the same lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    basis: Vec<IntVec>,
}

impl Lattice {
    /// Lattice spanned by the given generators (any number of rows, rank n).
    pub fn from_generators(dim: usize, gens: &[IntVec]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::RankDeficient);
        }
        let rows: Vec<Vec<i64>> = gens
            .iter()
            .map(|g| {
                if g.dim() != dim {
                    Err(Error::DimensionMismatch {
                        expected: dim,
                        got: g.dim(),
                    })
                } else {
                    Ok(g.to_vec())
                }
            })
            .collect::<Result<_>>()?;
        // entries of intermediate forms can exceed i64 even when the result is small
        let m = IntMatrix::<BigInt>::from_i64_rows(dim, &rows)?;
        let form = hnf_form(&m)?;
        let basis = form.to_i64_rows()?.into_iter().take(dim).map(IntVec::from).collect();
        Ok(Lattice { basis })
    }

    pub fn diagonal(diag: &[i64]) -> Result<Self> {
        let n = diag.len();
        let gens: Vec<IntVec> = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| IntVec::unit(n, i).scale(d))
            .collect();
        Self::from_generators(n, &gens)
    }

    /// `k * Z^n`.
    pub fn scaled_identity(dim: usize, k: i64) -> Result<Self> {
        Self::diagonal(&vec![k; dim])
    }

    pub fn identity(dim: usize) -> Self {
        Lattice {
            basis: (0..dim).map(|i| IntVec::unit(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn diagonal_entries(&self) -> Vec<i64> {
        (0..self.dim()).map(|i| self.basis[i][i]).collect()
    }

    /// Index of the lattice in Z^n.
    pub fn det(&self) -> u64 {
        self.basis.iter().enumerate().map(|(i, b)| b[i] as u64).product()
    }

    fn check_dim(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        self.check_dim(x)?;
        let mut v = x.to_vec();
        for (i, row) in self.basis.iter().enumerate() {
            let p = row[i];
            if v[i] % p != 0 {
                return Ok(false);
            }
            let c = v[i] / p;
            for j in i..v.len() {
                v[j] -= c * row[j];
            }
        }
        Ok(true)
    }

    /// Canonical coset representative: coordinate `i` lands in `[0, h_ii)`.
    pub fn reduce(&self, x: &[i64]) -> Result<IntVec> {
        self.check_dim(x)?;
        let mut v = x.to_vec();
        self.reduce_in_place(&mut v);
        Ok(IntVec::from(v))
    }

    pub(crate) fn reduce_in_place(&self, v: &mut [i64]) {
        for (i, row) in self.basis.iter().enumerate() {
            let c = v[i].div_euclid(row[i]);
            if c != 0 {
                for j in i..v.len() {
                    v[j] -= c * row[j];
                }
            }
        }
    }

    /// Every canonical residue, in lexicographic order.
    pub fn coset_reps(&self, budget: u64) -> Result<Vec<IntVec>> {
        let torus = Torus::new(self.clone(), budget)?;
        Ok((0..torus.len()).map(|i| torus.rep(i)).collect())
    }

    /// Whether `other` is a sublattice of `self`.
    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool> {
        for b in other.basis() {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice[")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

/// The finite group Z^n / Λ with cells numbered `0..det` in the
/// lexicographic order of their canonical representatives.
#[derive(Clone, Debug)]
pub struct Torus {
    lattice: Lattice,
    radix: Vec<i64>,
    stride: Vec<u64>,
    len: usize,
}

impl Torus {
    pub fn new(lattice: Lattice, budget: u64) -> Result<Self> {
        let det = lattice.det();
        if det > budget {
            return Err(Error::BudgetExceeded {
                what: "torus cells",
                needed: det as u128,
                limit: budget as u128,
            });
        }
        let radix = lattice.diagonal_entries();
        let n = radix.len();
        let mut stride = vec![1u64; n];
        for i in (0..n.saturating_sub(1)).rev() {
            stride[i] = stride[i + 1] * radix[i + 1] as u64;
        }
        Ok(Torus {
            lattice,
            radix,
            stride,
            len: det as usize,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.radix.len()
    }

    /// Cell index of an arbitrary point.
    pub fn index(&self, x: &[i64]) -> usize {
        let mut v = x.to_vec();
        self.lattice.reduce_in_place(&mut v);
        self.index_reduced(&v)
    }

    fn index_reduced(&self, v: &[i64]) -> usize {
        v.iter().zip(&self.stride).map(|(&c, &s)| c as u64 * s).sum::<u64>() as usize
    }

    /// Canonical representative of cell `idx`.
    pub fn rep(&self, idx: usize) -> IntVec {
        let mut rem = idx as u64;
        let v: Vec<i64> = self
            .stride
            .iter()
            .map(|&s| {
                let c = rem / s;
                rem %= s;
                c as i64
            })
            .collect();
        IntVec::from(v)
    }

    /// `table[k][c]` is the cell of `rep(c) + offsets[k]`.
    pub fn translation_table(&self, offsets: &[IntVec]) -> Vec<Vec<u32>> {
        offsets
            .iter()
            .map(|off| {
                (0..self.len)
                    .map(|c| {
                        let x = &self.rep(c) + off;
                        self.index(&x) as u32
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVec {
        IntVec::from(x)
    }

    #[test]
    fn det_examples() {
        assert_eq!(Lattice::identity(2).det(), 1);
        assert_eq!(Lattice::diagonal(&[3, 6]).unwrap().det(), 18);
        let l = Lattice::from_generators(2, &[v(&[1, 0]), v(&[0, 2])]).unwrap();
        assert_eq!(l.det(), 2);
    }

    #[test]
    fn contains_examples() {
        let l = Lattice::diagonal(&[3, 6]).unwrap();
        assert!(l.contains(&[3, 0]).unwrap());
        assert!(!l.contains(&[1, 0]).unwrap());
        assert!(l.contains(&[0, 0]).unwrap());
        assert!(matches!(l.contains(&[0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn coset_rep_examples() {
        let reps = Lattice::diagonal(&[2, 2]).unwrap().coset_reps(100).unwrap();
        assert_eq!(reps, vec![v(&[0, 0]), v(&[0, 1]), v(&[1, 0]), v(&[1, 1])]);
        assert_eq!(Lattice::diagonal(&[3, 6]).unwrap().coset_reps(100).unwrap().len(), 18);
        let l = Lattice::from_generators(2, &[v(&[1, 0]), v(&[0, 2])]).unwrap();
        assert_eq!(l.coset_reps(100).unwrap(), vec![v(&[0, 0]), v(&[0, 1])]);
        assert!(matches!(
            Lattice::diagonal(&[3, 6]).unwrap().coset_reps(10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn reduce_examples() {
        let l = Lattice::diagonal(&[3, 6]).unwrap();
        assert_eq!(l.reduce(&[4, 7]).unwrap(), v(&[1, 1]));
        assert_eq!(l.reduce(&[0, 0]).unwrap(), v(&[0, 0]));
        assert_eq!(l.reduce(&[3, 0]).unwrap(), v(&[0, 0]));
        assert_eq!(l.reduce(&[-1, -1]).unwrap(), v(&[2, 5]));
    }

    #[test]
    fn skew_lattice_reduction() {
        // kernel of x + 2y = 0 mod 5
        let l = Lattice::from_generators(2, &[v(&[5, 0]), v(&[2, -1])]).unwrap();
        assert_eq!(l.det(), 5);
        assert_eq!(l.basis(), &[v(&[1, 2]), v(&[0, 5])]);
        let torus = Torus::new(l.clone(), 100).unwrap();
        for c in 0..torus.len() {
            assert_eq!(torus.index(&torus.rep(c)), c);
        }
        assert_eq!(torus.index(&[1, 0]), torus.index(&[0, 3]));
    }
}
