//! Dense integer matrices: Smith normal form and fraction-free determinants.

use std::fmt;

use crate::scalar::ExactInt;

/// Dense row-major matrix over an exact integer ring.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactInt> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length; `cols` is used when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            data.extend(row);
        }
        IntMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += factor * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &T) {
        for j in 0..self.cols {
            let v = self[(src, j)].clone() * factor.clone();
            self[(dst, j)] = self[(dst, j)].clone() + v;
        }
    }

    /// `col[dst] += factor * col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &T) {
        for i in 0..self.rows {
            let v = self[(i, src)].clone() * factor.clone();
            self[(i, dst)] = self[(i, dst)].clone() + v;
        }
    }

    /// Fraction-free (Bareiss) determinant. Panics on non-square input.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut m = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return T::zero();
                };
                m.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(i, j)].clone() * m[(k, k)].clone()
                        - m[(i, k)].clone() * m[(k, j)].clone();
                    // exact by Sylvester's identity
                    m[(i, j)] = num / prev.clone();
                }
                m[(i, k)] = T::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    /// Invariant factors of the matrix: the nonzero diagonal of its Smith
    /// normal form, positive and in divisibility order.
    pub fn smith_invariants(&self) -> Vec<T> {
        let mut m = self.clone();
        let mut diag = Vec::new();
        let limit = m.rows.min(m.cols);
        for t in 0..limit {
            if !m.reduce_pivot(t) {
                break;
            }
            diag.push(m[(t, t)].abs());
        }
        diag
    }

    /// Brings a gcd-minimal entry of the trailing block to `(t, t)` and clears
    /// its row and column. Returns false when the trailing block is zero.
    fn reduce_pivot(&mut self, t: usize) -> bool {
        loop {
            let Some((pi, pj)) = self.smallest_nonzero(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..self.rows {
                if self[(i, t)].is_zero() {
                    continue;
                }
                let q = self[(i, t)].clone() / self[(t, t)].clone();
                self.add_row_multiple(i, t, &-q);
                dirty |= !self[(i, t)].is_zero();
            }
            for j in t + 1..self.cols {
                if self[(t, j)].is_zero() {
                    continue;
                }
                let q = self[(t, j)].clone() / self[(t, t)].clone();
                self.add_col_multiple(j, t, &-q);
                dirty |= !self[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            // divisibility chain: fold an offending row into the pivot row
            let pivot = self[(t, t)].clone();
            let offender = (t + 1..self.rows).find(|&i| {
                (t + 1..self.cols).any(|j| !self[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => self.add_row_multiple(t, i, &T::one()),
                None => return true,
            }
        }
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self[(i, j)].abs();
                if v.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                    best = Some((i, j, v));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

impl<T> std::ops::Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> IntMatrix<i64> {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect(), cols)
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).determinant(), 1);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), -1);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).determinant(), -3);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), 0);
        assert_eq!(IntMatrix::<i64>::zeros(0, 0).determinant(), 1);
    }

    #[test]
    fn determinant_needs_pivot_swap() {
        assert_eq!(m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]).determinant(), -1);
    }

    #[test]
    fn smith_of_diagonal_fixes_divisibility() {
        // diag(2, 3) ~ diag(1, 6)
        assert_eq!(m(&[&[2, 0], &[0, 3]]).smith_invariants(), vec![1, 6]);
        assert_eq!(m(&[&[4, 0], &[0, 6]]).smith_invariants(), vec![2, 12]);
    }

    #[test]
    fn smith_rank_deficient() {
        assert_eq!(m(&[&[2, 4], &[1, 2]]).smith_invariants(), vec![1]);
        assert!(m(&[&[0, 0]]).smith_invariants().is_empty());
        assert!(IntMatrix::<i64>::zeros(0, 3).smith_invariants().is_empty());
    }

    #[test]
    fn smith_agrees_across_scalars() {
        let rows: Vec<Vec<i64>> = vec![vec![6, 4, 2], vec![2, 8, 4], vec![10, 0, 6]];
        let small = IntMatrix::from_rows(rows.clone(), 3).smith_invariants();
        let big = IntMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
            3,
        )
        .smith_invariants();
        let big: Vec<i64> = big.iter().map(|b| b.try_into().unwrap()).collect();
        assert_eq!(small, big);
        // product of invariant factors = |det|
        let det = m(&[&[6, 4, 2], &[2, 8, 4], &[10, 0, 6]]).determinant().abs();
        assert_eq!(small.iter().product::<i64>(), det);
    }
}
