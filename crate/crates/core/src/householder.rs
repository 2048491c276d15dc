//! Householder reflectors in compact WY form.
//!
//! A panel of `k` reflectors `H_i = I - tau_i y_i y_i^T` is kept as a unit
//! lower-trapezoidal `Y` and an upper-triangular `T` with
//! `H_0 H_1 ... H_{k-1} = I - Y T Y^T`.

use crate::dense::{gemm, Mat, Window};

/// Turns `x` into `beta * e_1` with a reflector `I - tau v v^T`, `v[0] = 1`.
///
/// On return `x[0] = beta` and `x[1..]` holds `v[1..]`. A zero tail yields
/// `tau = 0` (the identity), so already-reduced columns are left untouched.
pub(crate) fn make_reflector(x: &mut [f64]) -> f64 {
    if x.len() <= 1 {
        return 0.0;
    }
    let alpha = x[0];
    let tail_sq: f64 = x[1..].iter().map(|v| v * v).sum();
    if tail_sq == 0.0 {
        return 0.0;
    }
    let norm = (alpha * alpha + tail_sq).sqrt();
    let beta = if alpha >= 0.0 { -norm } else { norm };
    let tau = (beta - alpha) / beta;
    let scale = 1.0 / (alpha - beta);
    x[1..].iter_mut().for_each(|v| *v *= scale);
    x[0] = beta;
    tau
}

pub(crate) struct BlockReflector {
    /// `p x k`, unit diagonal, zero above.
    pub y: Mat,
    /// `k x k` upper triangular.
    pub t: Mat,
}

impl BlockReflector {
    pub fn len(&self) -> usize {
        self.y.rows()
    }

    pub fn width(&self) -> usize {
        self.y.cols()
    }

    /// Overwrites the `p x n` window `w` of `x` with `Q^T X` (`transpose`) or `Q X`.
    pub fn apply_left(&self, x: &mut Mat, w: Window, transpose: bool) {
        assert_eq!(w.rows, self.len());
        let k = self.width();
        if k == 0 || w.cols == 0 {
            return;
        }
        let mut ytx = Mat::zeros(k, w.cols);
        gemm(1.0, &self.y, self.y.full().t(), x, w, 0.0, &mut ytx, Window::new(0, 0, k, w.cols));
        let t_win = if transpose { self.t.full().t() } else { self.t.full() };
        let mut tytx = Mat::zeros(k, w.cols);
        gemm(1.0, &self.t, t_win, &ytx, ytx.full(), 0.0, &mut tytx, Window::new(0, 0, k, w.cols));
        gemm(-1.0, &self.y, self.y.full(), &tytx, tytx.full(), 1.0, x, w);
    }

    /// Overwrites the symmetric `p x p` block of `a` at `(s, s)` with `Q^T A Q`.
    pub fn apply_two_sided(&self, a: &mut Mat, s: usize) {
        let p = self.len();
        let k = self.width();
        if k == 0 || p == 0 {
            return;
        }
        let blk = Window::new(s, s, p, p);
        // Z = A Y T
        let mut ay = Mat::zeros(p, k);
        gemm(1.0, a, blk, &self.y, self.y.full(), 0.0, &mut ay, Window::new(0, 0, p, k));
        let z = ay.matmul(&self.t);
        // W = Z - 1/2 Y (T^T Y^T Z)
        let ytz = self.y.tr_matmul(&z);
        let mut inner = Mat::zeros(k, k);
        gemm(1.0, &self.t, self.t.full().t(), &ytz, ytz.full(), 0.0, &mut inner, Window::new(0, 0, k, k));
        let mut w = z;
        gemm(-0.5, &self.y, self.y.full(), &inner, inner.full(), 1.0, &mut w, Window::new(0, 0, p, k));
        // A -= Y W^T + W Y^T
        gemm(-1.0, &self.y, self.y.full(), &w, w.full().t(), 1.0, a, blk);
        gemm(-1.0, &w, w.full(), &self.y, self.y.full().t(), 1.0, a, blk);
    }
}

/// Householder QR of the `p x w` window of `a` at `(r0, c0)`, in place.
///
/// The window's upper triangle receives `R`; everything strictly below the
/// diagonal is set to zero. The reflectors are returned in WY form.
pub(crate) fn factor_panel(a: &mut Mat, r0: usize, c0: usize, p: usize, w: usize) -> BlockReflector {
    let k = p.min(w);
    let mut y = Mat::zeros(p, k);
    let mut taus = vec![0.0; k];
    let mut v = vec![0.0; p];
    for c in 0..k {
        let len = p - c;
        {
            let col = &mut a.col_mut(c0 + c)[r0 + c..r0 + p];
            taus[c] = make_reflector(col);
            v[0] = 1.0;
            v[1..len].copy_from_slice(&col[1..]);
            col[1..].iter_mut().for_each(|x| *x = 0.0);
        }
        y.col_mut(c)[c..].copy_from_slice(&v[..len]);
        let tau = taus[c];
        if tau == 0.0 {
            continue;
        }
        for j in (c + 1)..w {
            let col = &mut a.col_mut(c0 + j)[r0 + c..r0 + p];
            let s: f64 = col.iter().zip(&v[..len]).map(|(x, vi)| x * vi).sum();
            let f = tau * s;
            col.iter_mut().zip(&v[..len]).for_each(|(x, vi)| *x -= f * vi);
        }
    }
    let t = build_t(&y, &taus);
    BlockReflector { y, t }
}

fn build_t(y: &Mat, taus: &[f64]) -> Mat {
    let k = taus.len();
    let mut t = Mat::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = taus[i];
        if i == 0 || taus[i] == 0.0 {
            continue;
        }
        // z = Y[:, 0..i]^T y_i
        let yi = y.col(i);
        let z: Vec<f64> = (0..i)
            .map(|j| y.col(j).iter().zip(yi).map(|(a, b)| a * b).sum())
            .collect();
        for r in 0..i {
            let s: f64 = (r..i).map(|c| t[(r, c)] * z[c]).sum();
            t[(r, i)] = -taus[i] * s;
        }
    }
    t
}
