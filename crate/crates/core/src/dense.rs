//! Column-major dense matrices and the handful of kernels the factory needs.

use std::ops::{Index, IndexMut};

/// Dense column-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Rectangular window into a [`Mat`], optionally read transposed.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Window {
    pub row: usize,
    pub col: usize,
    pub rows: usize,
    pub cols: usize,
    pub transposed: bool,
}

impl Window {
    pub fn new(row: usize, col: usize, rows: usize, cols: usize) -> Self {
        Window {
            row,
            col,
            rows,
            cols,
            transposed: false,
        }
    }

    pub fn t(self) -> Self {
        Window {
            transposed: !self.transposed,
            ..self
        }
    }

    /// Shape after the optional transpose.
    fn shape(&self) -> (usize, usize) {
        if self.transposed {
            (self.cols, self.rows)
        } else {
            (self.rows, self.cols)
        }
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Mat::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        gemm(
            1.0,
            self,
            self.full(),
            rhs,
            rhs.full(),
            0.0,
            &mut out,
            Window::new(0, 0, self.rows, rhs.cols),
        );
        out
    }

    /// `self^T * rhs`
    pub fn tr_matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.rows, rhs.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.cols, rhs.cols);
        gemm(
            1.0,
            self,
            self.full().t(),
            rhs,
            rhs.full(),
            0.0,
            &mut out,
            Window::new(0, 0, self.cols, rhs.cols),
        );
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len());
        let mut y = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (yi, &aij) in y.iter_mut().zip(self.col(j)) {
                    *yi += aij * xj;
                }
            }
        }
        y
    }

    pub(crate) fn full(&self) -> Window {
        Window::new(0, 0, self.rows, self.cols)
    }

    /// Replaces the matrix by `(A + A^T) / 2`, making it exactly symmetric.
    pub fn symmetrize(&mut self) {
        assert!(self.is_square());
        let n = self.rows;
        for j in 0..n {
            for i in (j + 1)..n {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = v;
                self[(j, i)] = v;
            }
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    /// Max of `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut worst: f64 = 0.0;
        for j in 0..self.cols {
            for i in (j + 1)..self.rows {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Smallest `m` such that every entry with `|i - j| > m` is exactly zero.
    pub fn bandwidth(&self) -> usize {
        let mut m = 0;
        for j in 0..self.cols {
            for i in 0..self.rows {
                if self[(i, j)] != 0.0 {
                    m = m.max(i.abs_diff(j));
                }
            }
        }
        m
    }

    pub fn scale_cols(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.cols);
        for (j, &f) in factors.iter().enumerate() {
            self.col_mut(j).iter_mut().for_each(|v| *v *= f);
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}

fn check_window(m: &Mat, w: &Window) {
    assert!(
        w.row + w.rows <= m.rows && w.col + w.cols <= m.cols,
        "window {w:?} out of bounds for {}x{}",
        m.rows,
        m.cols
    );
}

/// `C[wc] = alpha * op(A[wa]) * op(B[wb]) + beta * C[wc]`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn gemm(
    alpha: f64,
    a: &Mat,
    wa: Window,
    b: &Mat,
    wb: Window,
    beta: f64,
    c: &mut Mat,
    wc: Window,
) {
    check_window(a, &wa);
    check_window(b, &wb);
    check_window(c, &wc);
    assert!(!wc.transposed, "output window cannot be transposed");
    let (m, k) = wa.shape();
    let (k2, n) = wb.shape();
    assert_eq!(k, k2, "inner dimensions differ");
    assert_eq!((m, n), (wc.rows, wc.cols), "output shape mismatch");
    if m == 0 || n == 0 {
        return;
    }
    let (rsa, csa) = strides(a, &wa);
    let (rsb, csb) = strides(b, &wb);
    let a_off = wa.row + wa.col * a.rows;
    let b_off = wb.row + wb.col * b.rows;
    let c_off = wc.row + wc.col * c.rows;
    let c_rows = c.rows as isize;
    // SAFETY: every window was bounds-checked against its matrix above, the
    // strides describe column-major storage, and `c` is borrowed mutably so it
    // cannot alias `a` or `b`.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.data.as_ptr().add(a_off),
            rsa,
            csa,
            b.data.as_ptr().add(b_off),
            rsb,
            csb,
            beta,
            c.data.as_mut_ptr().add(c_off),
            1,
            c_rows,
        );
    }
}

fn strides(m: &Mat, w: &Window) -> (isize, isize) {
    let ld = m.rows as isize;
    if w.transposed {
        (ld, 1)
    } else {
        (1, ld)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &Mat, b: &Mat) -> Mat {
        Mat::from_fn(a.rows(), b.cols(), |i, j| {
            (0..a.cols()).map(|p| a[(i, p)] * b[(p, j)]).sum()
        })
    }

    #[test]
    fn matmul_matches_naive_product() {
        let a = Mat::from_fn(7, 5, |i, j| (i as f64 + 1.0) * 0.3 - j as f64 * 0.7);
        let b = Mat::from_fn(5, 4, |i, j| ((i * 3 + j) % 5) as f64 - 2.0);
        assert!(a.matmul(&b).max_abs_diff(&naive(&a, &b)) < 1e-13);
        assert!(a.tr_matmul(&a).max_abs_diff(&naive(&a.transpose(), &a)) < 1e-13);
    }

    #[test]
    fn windowed_gemm_touches_only_the_window() {
        let a = Mat::from_fn(6, 6, |i, j| (i + 2 * j) as f64);
        let b = Mat::identity(6);
        let mut c = Mat::from_fn(6, 6, |_, _| 9.0);
        gemm(1.0, &a, Window::new(1, 2, 3, 2), &b, Window::new(0, 0, 2, 2), 0.0, &mut c, Window::new(2, 3, 3, 2));
        for j in 0..6 {
            for i in 0..6 {
                let expect = if (2..5).contains(&i) && (3..5).contains(&j) {
                    a[(i - 1, j - 1)]
                } else {
                    9.0
                };
                assert_eq!(c[(i, j)], expect, "({i},{j})");
            }
        }
    }

    #[test]
    fn bandwidth_and_symmetrize() {
        let mut m = Mat::from_rows(&[
            vec![1.0, 2.0, 0.0],
            vec![2.5, 1.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ]);
        assert_eq!(m.bandwidth(), 1);
        m.symmetrize();
        assert_eq!(m.asymmetry(), 0.0);
        assert_eq!(m[(0, 1)], 2.25);
        assert_eq!(Mat::identity(4).bandwidth(), 0);
    }
}
