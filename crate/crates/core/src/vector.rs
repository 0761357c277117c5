use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point of Z^n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVec(Vec<i64>);

impl IntVec {
    pub fn new(coords: Vec<i64>) -> Self {
        IntVec(coords)
    }

    pub fn zero(dim: usize) -> Self {
        IntVec(vec![0; dim])
    }

    /// The standard basis vector `e_i` (0-based index).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        IntVec(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, a: i64) -> IntVec {
        IntVec(self.0.iter().map(|&c| c * a).collect())
    }

    pub fn dot(&self, other: &[i64]) -> i64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    /// Cyclic left shift of coordinates: `(a1, a2, ..., an) -> (a2, ..., an, a1)`.
    pub fn shift_left(&self) -> IntVec {
        let mut v = self.0.clone();
        if !v.is_empty() {
            v.rotate_left(1);
        }
        IntVec(v)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

/// Steps `digits` to the next tuple of `[0, radix)^n` in lexicographic order;
/// returns `false` after wrapping around to all zeros.
pub(crate) fn advance_odometer(digits: &mut [i64], radix: i64) -> bool {
    advance_odometer_range(digits, 0, radix - 1)
}

/// Lexicographic successor in `[lo, hi]^n`; false after the last element.
pub(crate) fn advance_odometer_range(digits: &mut [i64], lo: i64, hi: i64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d <= hi {
            return true;
        }
        *d = lo;
    }
    false
}

impl Deref for IntVec {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for IntVec {
    fn from(v: Vec<i64>) -> Self {
        IntVec(v)
    }
}

impl From<&[i64]> for IntVec {
    fn from(v: &[i64]) -> Self {
        IntVec(v.to_vec())
    }
}

impl<const N: usize> From<[i64; N]> for IntVec {
    fn from(v: [i64; N]) -> Self {
        IntVec(v.to_vec())
    }
}

impl Add<&IntVec> for &IntVec {
    type Output = IntVec;

    fn add(self, rhs: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&IntVec> for &IntVec {
    type Output = IntVec;

    fn sub(self, rhs: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVec {
    type Output = IntVec;

    fn neg(self) -> IntVec {
        IntVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
