//! Dense integer matrices with Hermite and Smith normal forms.
//!
//! Conventions: matrices act on row vectors, lattices are spanned by rows,
//! and the Hermite normal form is row-style upper triangular with a positive
//! diagonal and every entry above a pivot reduced into `[0, pivot)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{ext_gcd, IntScalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: IntScalar> IntMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must share the length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<S>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let conv: Result<Vec<Vec<S>>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| S::from_i64_c(v)).collect())
            .collect();
        Self::from_rows(cols, &conv?)
    }

    pub fn diagonal(diag: &[S]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_i64_c()).collect())
            .collect()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.mul_c(&rhs[(k, j)])?;
                    out[(i, j)] = out[(i, j)].add_c(&prod)?;
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<S> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(S::one());
        }
        let mut m = self.clone();
        let mut sign = S::one();
        let mut prev = S::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(S::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(i, j)].mul_c(&m[(k, k)])?.sub_c(&m[(i, k)].mul_c(&m[(k, j)])?)?;
                    m[(i, j)] = num / prev.clone();
                }
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * m[(n - 1, n - 1)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = std::mem::replace(&mut self[(r, j)], S::zero());
            self[(r, j)] = -v;
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &S) -> Result<()> {
        if q.is_zero() {
            return Ok(());
        }
        for j in 0..self.cols {
            let delta = q.mul_c(&self[(src, j)])?;
            self[(dst, j)] = self[(dst, j)].sub_c(&delta)?;
        }
        Ok(())
    }

    /// col[dst] -= q * col[src]
    fn sub_col_multiple(&mut self, dst: usize, src: usize, q: &S) -> Result<()> {
        if q.is_zero() {
            return Ok(());
        }
        for i in 0..self.rows {
            let delta = q.mul_c(&self[(i, src)])?;
            self[(i, dst)] = self[(i, dst)].sub_c(&delta)?;
        }
        Ok(())
    }

    /// Replaces rows `(a, b)` by `(s*a + t*b, u*a + v*b)`.
    fn combine_rows(&mut self, a: usize, b: usize, [s, t, u, v]: [&S; 4]) -> Result<()> {
        for j in 0..self.cols {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            self[(a, j)] = s.mul_c(&x)?.add_c(&t.mul_c(&y)?)?;
            self[(b, j)] = u.mul_c(&x)?.add_c(&v.mul_c(&y)?)?;
        }
        Ok(())
    }
}

impl<S> std::ops::Index<(usize, usize)> for IntMatrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for IntMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Display> fmt::Debug for IntMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Output of [`hnf`]: `transform * input = form`.
#[derive(Clone)]
pub struct Hnf<S> {
    pub form: IntMatrix<S>,
    pub transform: IntMatrix<S>,
}

impl<S: fmt::Display> fmt::Debug for Hnf<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hnf")
            .field("form", &self.form)
            .field("transform", &self.transform)
            .finish()
    }
}

/// Row-style Hermite normal form of an `m x n` matrix whose rows span a
/// full-rank lattice in Z^n.
///
/// The result has the same shape as the input; its first `n` rows are the
/// canonical basis and the remaining `m - n` rows are zero.
pub fn hnf<S: IntScalar>(m: &IntMatrix<S>) -> Result<Hnf<S>> {
    let (form, transform) = hnf_impl(m, true)?;
    Ok(Hnf {
        form,
        transform: transform.expect("transform requested"),
    })
}

/// The form of [`hnf`] without the `m x m` transform.
pub fn hnf_form<S: IntScalar>(m: &IntMatrix<S>) -> Result<IntMatrix<S>> {
    Ok(hnf_impl(m, false)?.0)
}

fn hnf_impl<S: IntScalar>(m: &IntMatrix<S>, track: bool) -> Result<(IntMatrix<S>, Option<IntMatrix<S>>)> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows < cols {
        return Err(Error::RankDeficient);
    }
    let mut h = m.clone();
    let mut u = track.then(|| IntMatrix::identity(rows));
    for col in 0..cols {
        let r = col;
        for i in r + 1..rows {
            if h[(i, col)].is_zero() {
                continue;
            }
            let a = h[(r, col)].clone();
            let b = h[(i, col)].clone();
            let (g, s, t) = ext_gcd(&a, &b)?;
            let (ag, bg) = (a / g.clone(), b / g);
            let neg_bg = -bg;
            let coeffs = [&s, &t, &neg_bg, &ag];
            h.combine_rows(r, i, coeffs)?;
            if let Some(u) = u.as_mut() {
                u.combine_rows(r, i, coeffs)?;
            }
        }
        if h[(r, col)].is_zero() {
            return Err(Error::RankDeficient);
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
            if let Some(u) = u.as_mut() {
                u.negate_row(r);
            }
        }
        let pivot = h[(r, col)].clone();
        for k in 0..r {
            let q = h[(k, col)].div_floor(&pivot);
            h.sub_row_multiple(k, r, &q)?;
            if let Some(u) = u.as_mut() {
                u.sub_row_multiple(k, r, &q)?;
            }
        }
    }
    Ok((h, u))
}

/// Invariant factors `d_1 | d_2 | ... | d_k` (all positive) of an integer
/// matrix; `k` is its rank.
pub fn snf<S: IntScalar>(m: &IntMatrix<S>) -> Result<Vec<S>> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut factors = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Ok(factors);
            };
            a.swap_rows(t, bi);
            a.swap_cols(t, bj);
            let p = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[(i, t)].div_floor(&p);
                a.sub_row_multiple(i, t, &q)?;
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = a[(t, j)].div_floor(&p);
                a.sub_col_multiple(j, t, &q)?;
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    // row_t += row_i brings the non-divisible entry into row t
                    let minus_one = -S::one();
                    a.sub_row_multiple(t, i, &minus_one)?;
                }
                None => break,
            }
        }
        factors.push(a[(t, t)].abs());
    }
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> IntMatrix<i64> {
        let cols = rows[0].len();
        IntMatrix::from_i64_rows(cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hnf_examples() {
        let id = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(hnf(&id).unwrap().form, id);
        let h = hnf(&m(&[&[1, 2], &[3, 4]])).unwrap();
        assert_eq!(h.form, m(&[&[1, 0], &[0, 2]]));
        assert_eq!(h.transform.mul(&m(&[&[1, 2], &[3, 4]])).unwrap(), h.form);
        assert_eq!(h.transform.det().unwrap().abs(), 1);
        let d = m(&[&[2, 0], &[0, 2]]);
        assert_eq!(hnf(&d).unwrap().form, d);
    }

    #[test]
    fn hnf_rank_deficient() {
        assert_eq!(hnf(&m(&[&[1, 2], &[2, 4]])).unwrap_err(), Error::RankDeficient);
        assert_eq!(hnf(&m(&[&[1, 2]])).unwrap_err(), Error::RankDeficient);
    }

    #[test]
    fn hnf_tall_matrix_has_zero_tail() {
        let h = hnf(&m(&[&[2, 0], &[0, 3], &[1, 1]])).unwrap();
        assert_eq!(h.form.row(2), &[0, 0]);
        assert_eq!(h.form[(0, 0)] * h.form[(1, 1)], 1);
    }

    #[test]
    fn hnf_on_bigint() {
        let big = IntMatrix::<BigInt>::from_i64_rows(2, &[vec![1, 2], vec![3, 4]]).unwrap();
        let h = hnf(&big).unwrap();
        assert_eq!(h.form.to_i64_rows().unwrap(), vec![vec![1, 0], vec![0, 2]]);
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&m(&[&[2, 0], &[0, 3]])).unwrap(), vec![1, 6]);
        assert_eq!(snf(&m(&[&[1, 0], &[0, 1]])).unwrap(), vec![1, 1]);
        assert_eq!(snf(&m(&[&[2, 4]])).unwrap(), vec![2]);
        assert_eq!(snf(&m(&[&[0, 0]])).unwrap(), Vec::<i64>::new());
    }

    #[test]
    fn det_bareiss() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).det().unwrap(), -2);
        assert_eq!(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).det().unwrap(), -5);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), 0);
    }
}
