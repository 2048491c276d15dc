//! Banded symmetric test matrices with a prescribed spectrum.
//!
//! `generate` draws a random orthogonal `Q`, forms `A = Q diag(λ) Q^T` and
//! reduces `A` to bandwidth `m` by blocked Householder similarity
//! transformations. The eigenvector basis is carried through every step so
//! spectral projectors never need a general eigensolver.

use crate::dense::{gemm, Mat, Window};
use crate::error::{Error, Result};
use crate::householder::factor_panel;
use crate::rng::SeededRng;

/// Panel width for the random QR.
const QR_BLOCK: usize = 32;

/// Residual threshold for the provenance invariants.
pub const PROVENANCE_TOL: f64 = 1e-10;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenpairs with ascending eigenvalues; column `i` of `vectors` belongs to `values[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenbasis {
    pub vectors: Mat,
    pub values: Vec<f64>,
}

impl Eigenbasis {
    fn sorted(mut self) -> Self {
        let n = self.values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| self.values[i].total_cmp(&self.values[j]));
        if order.iter().enumerate().all(|(i, &j)| i == j) {
            return self;
        }
        let vectors = Mat::from_fn(self.vectors.rows(), n, |r, c| self.vectors[(r, order[c])]);
        self.values = order.iter().map(|&i| self.values[i]).collect();
        self.vectors = vectors;
        self
    }
}

/// Residuals `(max|HV - VΛ|, max|V^T V - I|)`.
pub fn eigen_residuals(h: &Mat, basis: &Eigenbasis) -> (f64, f64) {
    let mut vl = basis.vectors.clone();
    vl.scale_cols(&basis.values);
    let hv = h.matmul(&basis.vectors);
    let vtv = basis.vectors.tr_matmul(&basis.vectors);
    (hv.max_abs_diff(&vl), vtv.max_abs_diff(&Mat::identity(vtv.rows())))
}

/// Dense symmetric matrix with an exact bandwidth certificate.
#[derive(Clone, Debug)]
pub struct BandedHermitian {
    m: usize,
    data: Mat,
    provenance: Option<Eigenbasis>,
    truncated: f64,
}

impl BandedHermitian {
    /// Wraps `data`, symmetrizing it and checking that nothing lies outside the band.
    pub fn new(mut data: Mat, m: usize) -> Result<Self> {
        if !data.is_square() || data.rows() == 0 {
            return Err(Error::Dimension(format!(
                "expected a nonempty square matrix, got {}x{}",
                data.rows(),
                data.cols()
            )));
        }
        data.symmetrize();
        let bw = data.bandwidth();
        if bw > m {
            return Err(Error::Dimension(format!("matrix has bandwidth {bw}, more than m = {m}")));
        }
        Ok(BandedHermitian {
            m,
            data,
            provenance: None,
            truncated: 0.0,
        })
    }

    /// Wraps `data` with its measured bandwidth.
    pub fn from_dense(data: Mat) -> Result<Self> {
        let m = data.bandwidth();
        Self::new(data, m)
    }

    /// Attaches an eigenbasis after checking the residual invariants.
    pub fn with_provenance(mut self, basis: Eigenbasis) -> Result<Self> {
        let n = self.n();
        if basis.vectors.rows() != n || basis.vectors.cols() != n || basis.values.len() != n {
            return Err(Error::Dimension(format!("eigenbasis does not match n = {n}")));
        }
        let basis = basis.sorted();
        let (res, orth) = eigen_residuals(&self.data, &basis);
        let scale = basis.values.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        if res > PROVENANCE_TOL * scale || orth > PROVENANCE_TOL {
            return Err(Error::Domain(format!(
                "eigenbasis residual {res:e} / orthogonality {orth:e} exceeds tolerance"
            )));
        }
        self.provenance = Some(basis);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.data.rows()
    }

    pub fn bandwidth(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &Mat {
        &self.data
    }

    pub fn provenance(&self) -> Option<&Eigenbasis> {
        self.provenance.as_ref()
    }

    /// Largest magnitude hard-zeroed outside the band by `band_reduce`.
    pub fn truncated_magnitude(&self) -> f64 {
        self.truncated
    }

    /// Count of entries with `|i - j| > m` that are not exactly zero.
    pub fn band_violations(&self) -> usize {
        let n = self.n();
        let mut count = 0;
        for j in 0..n {
            for i in 0..n {
                if i.abs_diff(j) > self.m && self.data[(i, j)] != 0.0 {
                    count += 1;
                }
            }
        }
        count
    }

    /// Eigenpairs from provenance, or from the Jacobi solver when absent.
    pub fn eigen(&self) -> Result<Eigenbasis> {
        match &self.provenance {
            Some(b) => Ok(b.clone()),
            None => jacobi_eigh(&self.data),
        }
    }
}

/// Orthogonal factor of the Householder QR of an `n x n` standard-normal
/// matrix, with columns signed so that `R` has a positive diagonal.
pub fn random_orthogonal(n: usize, rng: &mut SeededRng) -> Result<Mat> {
    if n == 0 {
        return Err(Error::Dimension("random_orthogonal needs n >= 1".into()));
    }
    let mut g = Mat::zeros(n, n);
    for j in 0..n {
        for v in g.col_mut(j) {
            *v = rng.standard_normal();
        }
    }
    let mut panels = Vec::new();
    let mut k = 0;
    while k < n {
        let w = QR_BLOCK.min(n - k);
        let br = factor_panel(&mut g, k, k, n - k, w);
        if k + w < n {
            br.apply_left(&mut g, Window::new(k, k + w, n - k, n - k - w), true);
        }
        panels.push((k, br));
        k += w;
    }
    let signs: Vec<f64> = (0..n).map(|i| if g[(i, i)] < 0.0 { -1.0 } else { 1.0 }).collect();
    // Q = B_0 B_1 ... applied to I from the last panel backwards; columns
    // left of panel k are still unit vectors there, so they can be skipped.
    let mut q = Mat::identity(n);
    for (k, br) in panels.iter().rev() {
        br.apply_left(&mut q, Window::new(*k, *k, n - k, n - k), false);
    }
    q.scale_cols(&signs);
    Ok(q)
}

/// `Q diag(λ) Q^T`, symmetrized.
pub fn assemble_dense(q: &Mat, lambda: &[f64]) -> Result<Mat> {
    if !q.is_square() || q.rows() != lambda.len() {
        return Err(Error::Dimension(format!(
            "Q is {}x{} but {} eigenvalues were given",
            q.rows(),
            q.cols(),
            lambda.len()
        )));
    }
    let n = lambda.len();
    let mut ql = q.clone();
    ql.scale_cols(lambda);
    let mut a = Mat::zeros(n, n);
    gemm(1.0, &ql, ql.full(), q, q.full().t(), 0.0, &mut a, Window::new(0, 0, n, n));
    a.symmetrize();
    Ok(a)
}

/// Reduces the symmetric `a` to bandwidth `m` in place and returns the largest
/// magnitude zeroed outside the band afterwards. Every reflector is also
/// applied from the left to `basis` when given, so `basis <- W^T basis`.
fn reduce_in_place(a: &mut Mat, m: usize, mut basis: Option<&mut Mat>) -> f64 {
    let n = a.rows();
    let mut j = 0;
    while j + m + 1 < n {
        let s = j + m;
        let p = n - s;
        let br = factor_panel(a, s, j, p, m);
        for c in 0..m {
            for r in 0..p {
                a[(j + c, s + r)] = a[(s + r, j + c)];
            }
        }
        br.apply_two_sided(a, s);
        if let Some(v) = basis.as_deref_mut() {
            let cols = v.cols();
            br.apply_left(v, Window::new(s, 0, p, cols), true);
        }
        j += m;
    }
    let mut dropped: f64 = 0.0;
    for c in 0..n {
        for r in 0..n {
            if r.abs_diff(c) > m {
                dropped = dropped.max(a[(r, c)].abs());
                a[(r, c)] = 0.0;
            }
        }
    }
    a.symmetrize();
    dropped
}

/// Householder band reduction to bandwidth `m`, keeping provenance in step.
pub fn band_reduce(h: BandedHermitian, m: usize) -> Result<BandedHermitian> {
    if m == 0 {
        return Err(Error::Dimension("band_reduce needs m >= 1".into()));
    }
    let n = h.n();
    if m + 1 >= n || h.data.bandwidth() <= m {
        return Ok(BandedHermitian {
            m: m.min(n.saturating_sub(1)).max(h.data.bandwidth()),
            ..h
        });
    }
    let BandedHermitian {
        mut data,
        provenance,
        truncated,
        ..
    } = h;
    let mut vt = provenance.as_ref().map(|b| b.vectors.clone());
    let dropped = reduce_in_place(&mut data, m, vt.as_mut());
    Ok(BandedHermitian {
        m,
        data,
        provenance: provenance.zip(vt).map(|(b, vectors)| Eigenbasis {
            vectors,
            values: b.values,
        }),
        truncated: truncated.max(dropped),
    })
}

/// Band reduction of a plain symmetric matrix, returning `(H, W)` with `H = W^T A W`.
pub fn band_reduce_with_transform(a: &Mat, m: usize) -> Result<(Mat, Mat)> {
    if !a.is_square() {
        return Err(Error::Dimension("band reduction needs a square matrix".into()));
    }
    if m == 0 {
        return Err(Error::Dimension("band_reduce needs m >= 1".into()));
    }
    let n = a.rows();
    let mut h = a.clone();
    h.symmetrize();
    if m + 1 >= n || h.bandwidth() <= m {
        return Ok((h, Mat::identity(n)));
    }
    let mut wt = Mat::identity(n);
    reduce_in_place(&mut h, m, Some(&mut wt));
    Ok((h, wt.transpose()))
}

/// Random `m`-banded symmetric matrix with eigenvalues `lambda`.
pub fn generate(lambda: &[f64], m: usize, rng: &mut SeededRng) -> Result<BandedHermitian> {
    if lambda.len() < 2 {
        return Err(Error::Dimension("generate needs at least two eigenvalues".into()));
    }
    if m == 0 {
        return Err(Error::Dimension("generate needs m >= 1".into()));
    }
    if lambda.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("eigenvalues must be finite".into()));
    }
    let mut values = lambda.to_vec();
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let q = random_orthogonal(n, rng)?;
    let a = assemble_dense(&q, &values)?;
    let dense = BandedHermitian {
        m: n - 1,
        data: a,
        provenance: Some(Eigenbasis { vectors: q, values }),
        truncated: 0.0,
    };
    let reduced = band_reduce(dense, m)?;
    let basis = reduced.provenance.clone().expect("provenance tracked");
    let BandedHermitian { data, truncated, .. } = reduced;
    let mut out = BandedHermitian::new(data, m)?.with_provenance(basis)?;
    out.truncated = truncated;
    Ok(out)
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix; eigenvalues ascending.
pub fn jacobi_eigh(h: &Mat) -> Result<Eigenbasis> {
    if !h.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", h.rows(), h.cols())));
    }
    let n = h.rows();
    let scale = h.max_abs();
    if h.asymmetry() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Domain("jacobi_eigh needs a symmetric matrix".into()));
    }
    let mut a = h.clone();
    a.symmetrize();
    let mut v = Mat::identity(n);
    let target = 1e-15 * h.frobenius_norm();
    let off_norm = |a: &Mat| {
        let mut s = 0.0;
        for j in 0..n {
            for i in (j + 1)..n {
                s += a[(i, j)] * a[(i, j)];
            }
        }
        (2.0 * s).sqrt()
    };
    let mut off = off_norm(&a);
    let mut sweeps = 0;
    while off > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Convergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    a[(k, p)] = np;
                    a[(p, k)] = np;
                    a[(k, q)] = nq;
                    a[(q, k)] = nq;
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        off = off_norm(&a);
    }
    let values = (0..n).map(|i| a[(i, i)]).collect();
    Ok(Eigenbasis { vectors: v, values }.sorted())
}
