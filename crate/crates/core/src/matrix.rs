//! Dense matrices over the rationals.
//!
//! Everything downstream reduces to ranks of exact matrices: Betti numbers
//! of chain complexes, ranks of induced maps, Hessian ranks. Sizes are small
//! (at most a few thousand rows), so matrices are stored densely row-major.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{denominator_lcm, format_rational, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors. All rows must have `cols` entries.
    ///
    /// # Panics
    ///
    /// If a row has the wrong length.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "row length mismatch");
            data.extend(row);
        }
        Self {
            rows: n,
            cols,
            data,
        }
    }

    /// Convenience constructor from small integers, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// # Panics
    ///
    /// On an inner dimension mismatch.
    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn neg(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        QMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &QMatrix, b: &QMatrix, c: &QMatrix, d: &QMatrix) -> QMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (top, left) = (a.rows, a.cols);
        QMatrix::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| {
            match (i < top, j < left) {
                (true, true) => a[(i, j)].clone(),
                (true, false) => b[(i, j - left)].clone(),
                (false, true) => c[(i - top, j)].clone(),
                (false, false) => d[(i - top, j - left)].clone(),
            }
        })
    }

    /// Rank over the rationals.
    ///
    /// Each row is scaled to an integer row, then reduced by fraction-free
    /// (Bareiss) elimination so that intermediate entries stay integral.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let scale = Rational::from_integer(denominator_lcm(row));
                row.iter().map(|x| (x * &scale).to_integer()).collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let (head, tail) = a.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            let pivot = &pivot_row[c];
            for row in tail.iter_mut() {
                let factor = row[c].clone();
                for j in c + 1..self.cols {
                    row[j] = (pivot * &row[j] - &factor * &pivot_row[j]) / &prev;
                }
                row[c] = BigInt::zero();
            }
            prev = pivot.clone();
            rank += 1;
        }
        rank
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Reduced row echelon form with pivot columns in increasing order.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let delta = &factor * &m[(r, j)];
                    m[(i, j)] -= delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the null space as the columns of a `cols × nullity` matrix.
    pub fn kernel_basis(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        QMatrix::from_fn(self.cols, free.len(), |i, k| {
            let f = free[k];
            if i == f {
                Rational::one()
            } else if let Some(row) = pivots.iter().position(|&p| p == i) {
                -r[(row, f)].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// Columns spanning a complement of the kernel inside the domain.
    ///
    /// The complement is spanned by the standard basis vectors at the pivot
    /// columns of `rref(self)`: a nonzero combination of them has a nonzero
    /// pivot coordinate and zero free coordinates, so it cannot be a kernel
    /// vector. The result is `cols × rank`.
    pub fn image_complement_basis(&self) -> QMatrix {
        let (_, pivots) = self.rref();
        QMatrix::from_fn(self.cols, pivots.len(), |i, k| {
            if i == pivots[k] {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let (r, pivots) = self.hstack(&QMatrix::identity(n)).rref();
        if pivots.len() < n || pivots.last().is_some_and(|&p| p != n - 1) {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::zeros(2, 2).rank(), 0);
        assert_eq!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(QMatrix::zeros(0, 4).rank(), 0);
        assert_eq!(QMatrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn rank_with_fractions() {
        let m = QMatrix::from_rows(
            2,
            vec![vec![frac(1, 2), frac(1, 3)], vec![frac(3, 2), int(1)]],
        );
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rref_examples() {
        let (r, p) = QMatrix::from_i64(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r, QMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);

        let (r, p) = QMatrix::identity(3).rref();
        assert_eq!(r, QMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = QMatrix::zeros(2, 3).rref();
        assert_eq!(r, QMatrix::zeros(2, 3));
        assert!(p.is_empty());
    }

    #[test]
    fn complement_examples() {
        let m = QMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        let y = m.image_complement_basis();
        assert_eq!(y.shape(), (2, 1));
        assert!(!y[(0, 0)].is_zero());
        assert!(!m.mul(&y).is_zero());

        assert_eq!(
            QMatrix::zeros(3, 3).image_complement_basis().shape(),
            (3, 0)
        );
        let y = QMatrix::identity(2).image_complement_basis();
        assert_eq!(y.rank(), 2);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel_basis();
        assert_eq!(k.shape(), (3, 2));
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.rank(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |v| {
                QMatrix::from_fn(r, c, |i, j| {
                    let (n, d) = v[i * c + j];
                    // Bias towards zeros to get rank-deficient cases.
                    if n.abs() == 3 {
                        int(0)
                    } else {
                        frac(n, d)
                    }
                })
            })
        })
    }

    #[test]
    fn inverse() {
        let a = QMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(QMatrix::zeros(0, 0).inverse(), Some(QMatrix::zeros(0, 0)));
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().cols(), m.cols());
            prop_assert!(m.mul(&m.kernel_basis()).is_zero());
        }

        #[test]
        fn rank_of_transpose(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn bareiss_matches_rref(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.rref().1.len());
        }

        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let (r, p) = m.rref();
            let (rr, pp) = r.rref();
            prop_assert_eq!(&rr, &r);
            prop_assert_eq!(pp, p);
        }

        #[test]
        fn complement_is_transverse_to_kernel(m in small_matrix()) {
            let y = m.image_complement_basis();
            let k = m.kernel_basis();
            prop_assert_eq!(y.cols(), m.rank());
            prop_assert_eq!(y.rank(), y.cols());
            // Independent columns whose images are independent: span(Y) ∩ ker = 0.
            prop_assert_eq!(m.mul(&y).rank(), y.cols());
            prop_assert_eq!(y.hstack(&k).rank(), m.cols());
        }
    }
}
