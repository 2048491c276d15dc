//! Exact spectral projectors, decay profiles, band truncation and threshold
//! bandwidths.

use std::fmt;

use crate::dense::{gemm, Mat, Window};
use crate::error::{Error, Result};
use crate::factory::BandedHermitian;
use crate::rng::SeededRng;

/// Relative distance below which an eigenvalue counts as sitting on `mu`.
pub const GAP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecaySource {
    Projector,
    Sign,
    Inverse,
    Other,
}

impl fmt::Display for DecaySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecaySource::Projector => "projector",
            DecaySource::Sign => "sign",
            DecaySource::Inverse => "inverse",
            DecaySource::Other => "other",
        })
    }
}

/// `D(k) = max_{|i-j| = k} |M_ij|` for `k = 0..n-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayProfile {
    pub curve: Vec<f64>,
    pub source: DecaySource,
}

/// Projector plus the quantities used to check it.
#[derive(Clone, Debug)]
pub struct Projector {
    pub p: Mat,
    /// Number of eigenvalues below `mu`.
    pub n_e: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectorDiagnostics {
    pub trace: f64,
    /// `||P^2 - P||_F`
    pub idempotency: f64,
    /// `max |P - P^T|`
    pub asymmetry: f64,
}

/// `P = sum_{lambda_i < mu} v_i v_i^T` from the tracked eigenbasis (Jacobi when absent).
pub fn spectral_projector(h: &BandedHermitian, mu: f64) -> Result<Projector> {
    let eig = h.eigen()?;
    let scale = eig.values.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    if let Some(&bad) = eig.values.iter().find(|&&v| (v - mu).abs() <= GAP_TOL * scale) {
        return Err(Error::GapViolation { value: bad, mu });
    }
    let n = h.n();
    let n_e = eig.values.iter().filter(|&&v| v < mu).count();
    let mut p = Mat::zeros(n, n);
    let occupied = Window::new(0, 0, n, n_e);
    gemm(1.0, &eig.vectors, occupied, &eig.vectors, occupied.t(), 0.0, &mut p, Window::new(0, 0, n, n));
    p.symmetrize();
    Ok(Projector { p, n_e })
}

/// `S = I - 2P` for the split at 0.
pub fn sign_matrix(h: &BandedHermitian) -> Result<Mat> {
    let proj = spectral_projector(h, 0.0)?;
    Ok(sign_from_projector(&proj.p))
}

pub fn sign_from_projector(p: &Mat) -> Mat {
    let n = p.rows();
    Mat::from_fn(n, n, |i, j| if i == j { 1.0 - 2.0 * p[(i, j)] } else { -2.0 * p[(i, j)] })
}

pub fn projector_diagnostics(p: &Mat) -> ProjectorDiagnostics {
    let p2 = p.matmul(p);
    ProjectorDiagnostics {
        trace: p.trace(),
        idempotency: p2.sub(p).frobenius_norm(),
        asymmetry: p.asymmetry(),
    }
}

pub fn decay_profile(m: &Mat, source: DecaySource) -> DecayProfile {
    assert!(m.is_square(), "decay profile needs a square matrix");
    let n = m.rows();
    let mut curve = vec![0.0_f64; n];
    for j in 0..n {
        for (i, v) in m.col(j).iter().enumerate() {
            let d = i.abs_diff(j);
            curve[d] = curve[d].max(v.abs());
        }
    }
    DecayProfile { curve, source }
}

/// `M^(m)`: entries with `|i - j| <= m` kept, the rest zero.
pub fn truncate_band(m: &Mat, bw: usize) -> Mat {
    Mat::from_fn(m.rows(), m.cols(), |i, j| if i.abs_diff(j) <= bw { m[(i, j)] } else { 0.0 })
}

/// Smallest `k` such that `curve[j] <= eps` for every `j >= k`.
pub fn first_below(curve: &[f64], eps: f64) -> Result<usize> {
    let mut k = curve.len();
    while k > 0 && curve[k - 1] <= eps {
        k -= 1;
    }
    if k == curve.len() {
        return Err(Error::ThresholdNotReached {
            epsilon: eps,
            len: curve.len(),
        });
    }
    Ok(k)
}

/// Smallest bandwidth `w` such that `curve[k] <= eps` for every `k > w`, so
/// that truncating to `w` drops only entries at most `eps`.
pub fn truncation_bandwidth(curve: &[f64], eps: f64) -> Result<usize> {
    first_below(curve, eps).map(|k| k.saturating_sub(1))
}

/// Norms of `M - M^(k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationErrors {
    pub k: usize,
    pub max: f64,
    pub one: f64,
    pub inf: f64,
    /// `sqrt(||.||_1 ||.||_inf)`, an upper bound for the 2-norm.
    pub two_bound: f64,
}

/// Truncation error norms for every bandwidth `k = 0..n-1`, in `O(n^2)`.
pub fn truncation_errors(m: &Mat) -> Vec<TruncationErrors> {
    assert!(m.is_square(), "truncation needs a square matrix");
    let n = m.rows();
    let profile = decay_profile(m, DecaySource::Other).curve;
    let mut col = vec![0.0_f64; n];
    let mut row = vec![0.0_f64; n];
    let mut out = vec![
        TruncationErrors {
            k: 0,
            max: 0.0,
            one: 0.0,
            inf: 0.0,
            two_bound: 0.0,
        };
        n
    ];
    let mut tail_max = 0.0_f64;
    // walk k downwards; before handling k the sums hold diagonals d > k
    for k in (0..n).rev() {
        let (one, inf) = (col.iter().fold(0.0_f64, |s, v| s.max(*v)), row.iter().fold(0.0_f64, |s, v| s.max(*v)));
        out[k] = TruncationErrors {
            k,
            max: tail_max,
            one,
            inf,
            two_bound: (one * inf).sqrt(),
        };
        if k == 0 {
            break;
        }
        for i in 0..n - k {
            let lower = m[(i + k, i)].abs();
            let upper = m[(i, i + k)].abs();
            col[i] += lower;
            row[i + k] += lower;
            col[i + k] += upper;
            row[i] += upper;
        }
        tail_max = tail_max.max(profile[k]);
    }
    out
}

/// Power-iteration estimate of `||M - M^(k)||_2` for symmetric `M`.
pub fn truncation_error_2norm(m: &Mat, k: usize, max_iter: usize, tol: f64) -> f64 {
    let n = m.rows();
    let e = Mat::from_fn(n, n, |i, j| if i.abs_diff(j) > k { m[(i, j)] } else { 0.0 });
    let mut rng = SeededRng::new(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut est = 0.0;
    for _ in 0..max_iter {
        // iterate with E^2 so that +/- extreme eigenvalues do not alternate
        let y = e.matvec(&x);
        let z = e.matvec(&y);
        let nz = norm(&z);
        if nz == 0.0 {
            return 0.0;
        }
        let next = nz.sqrt();
        x = z.into_iter().map(|v| v / nz).collect();
        if (next - est).abs() <= tol * next {
            return next;
        }
        est = next;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::generate;

    fn banded(rows: &[Vec<f64>]) -> BandedHermitian {
        BandedHermitian::from_dense(Mat::from_rows(rows)).unwrap()
    }

    #[test]
    fn projector_examples() {
        let p = spectral_projector(&banded(&[vec![-1.0, 0.0], vec![0.0, 1.0]]), 0.0).unwrap();
        assert_eq!(p.p, Mat::diag(&[1.0, 0.0]));
        let p = spectral_projector(&banded(&[vec![0.0, 1.0], vec![1.0, 0.0]]), 0.0).unwrap();
        let half = Mat::from_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]);
        assert!(p.p.max_abs_diff(&half) < 1e-15);
        assert!(matches!(
            spectral_projector(&banded(&[vec![0.0, 0.0], vec![0.0, 1.0]]), 0.0),
            Err(Error::GapViolation { .. })
        ));
    }

    #[test]
    fn sign_examples() {
        let s = sign_matrix(&banded(&[vec![-2.0, 0.0], vec![0.0, 3.0]])).unwrap();
        assert_eq!(s, Mat::diag(&[-1.0, 1.0]));
        let swap = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let s = sign_matrix(&banded(&[vec![0.0, 1.0], vec![1.0, 0.0]])).unwrap();
        assert!(s.max_abs_diff(&swap) < 1e-15);
    }

    #[test]
    fn generated_projector_is_an_orthogonal_projector() {
        let lam: Vec<f64> = (0..80).map(|i| if i < 30 { -1.0 + 0.01 * i as f64 } else { 0.2 + 0.01 * i as f64 }).collect();
        let h = generate(&lam, 3, &mut SeededRng::new(5)).unwrap();
        let proj = spectral_projector(&h, 0.0).unwrap();
        assert_eq!(proj.n_e, 30);
        let d = projector_diagnostics(&proj.p);
        assert!(d.idempotency <= 1e-10 * 80.0);
        assert_eq!(d.asymmetry, 0.0);
        assert_eq!(d.trace.round() as usize, 30);
        let s = sign_from_projector(&proj.p);
        assert!(s.matmul(&s).max_abs_diff(&Mat::identity(80)) <= 1e-9);
        let prof = decay_profile(&proj.p, DecaySource::Projector);
        assert!(prof.curve.iter().all(|&v| (0.0..=1.0 + 1e-12).contains(&v)));
    }

    #[test]
    fn jacobi_fallback_agrees_with_provenance() {
        let lam: Vec<f64> = (0..30).map(|i| i as f64 - 14.5).collect();
        let h = generate(&lam, 2, &mut SeededRng::new(8)).unwrap();
        let tracked = spectral_projector(&h, 0.0).unwrap();
        let bare = BandedHermitian::new(h.matrix().clone(), 2).unwrap();
        let solved = spectral_projector(&bare, 0.0).unwrap();
        assert!(tracked.p.max_abs_diff(&solved.p) < 1e-10);
    }

    #[test]
    fn decay_profile_examples() {
        let prof = decay_profile(&Mat::identity(4), DecaySource::Other);
        assert_eq!(prof.curve, vec![1.0, 0.0, 0.0, 0.0]);
        let half = Mat::from_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]);
        assert_eq!(decay_profile(&half, DecaySource::Projector).curve, vec![0.5, 0.5]);
    }

    #[test]
    fn truncation_examples() {
        let m = Mat::from_fn(5, 5, |i, j| 1.0 / (1.0 + (i as f64 - j as f64).abs()));
        assert_eq!(truncate_band(&m, 4), m);
        assert_eq!(truncate_band(&Mat::identity(3), 0), Mat::identity(3));
        let prof = decay_profile(&m, DecaySource::Other).curve;
        for bw in 0..5 {
            let e = m.sub(&truncate_band(&m, bw));
            let one = (0..5).map(|j| e.col(j).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
            let bound: f64 = prof.iter().skip(bw + 1).map(|d| 2.0 * d).sum();
            assert!(one <= bound + 1e-15);
        }
    }

    #[test]
    fn truncation_table_matches_direct_norms() {
        let mut rng = SeededRng::new(13);
        let m = Mat::from_fn(9, 9, |_, _| rng.standard_normal());
        let table = truncation_errors(&m);
        for t in &table {
            let e = m.sub(&truncate_band(&m, t.k));
            let one = (0..9).map(|j| e.col(j).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
            let inf = (0..9).map(|i| (0..9).map(|j| e[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max);
            assert!((t.one - one).abs() < 1e-13 && (t.inf - inf).abs() < 1e-13);
            assert_eq!(t.max, e.max_abs());
        }
        assert_eq!(table[8].one, 0.0);
    }

    #[test]
    fn power_iteration_respects_the_certified_bound() {
        let mut rng = SeededRng::new(2);
        let mut m = Mat::from_fn(40, 40, |_, _| rng.standard_normal());
        m.symmetrize();
        let table = truncation_errors(&m);
        for k in [0, 5, 20] {
            let two = truncation_error_2norm(&m, k, 2000, 1e-12);
            assert!(two <= table[k].two_bound * (1.0 + 1e-9));
            assert!(two >= table[k].max * (1.0 - 1e-9));
        }
        let d = Mat::diag(&[3.0, -5.0, 1.0]);
        let full = Mat::from_fn(3, 3, |i, j| if i == j { 0.0 } else { d[(i, i)] + d[(j, j)] });
        let exact = jacobi(&full);
        assert!((truncation_error_2norm(&full, 0, 5000, 1e-14) - exact).abs() < 1e-8);
    }

    fn jacobi(m: &Mat) -> f64 {
        crate::factory::jacobi_eigh(m).unwrap().values.iter().fold(0.0, |s: f64, v| s.max(v.abs()))
    }

    #[test]
    fn first_below_examples() {
        let curve = [1.0, 0.5, 0.2, 0.05, 0.07, 0.01, 0.005];
        assert_eq!(first_below(&curve, 0.1).unwrap(), 3);
        assert_eq!(first_below(&curve, 0.06).unwrap(), 5);
        assert_eq!(first_below(&[0.5, 0.4, 0.3, 0.2], 0.35).unwrap(), 2);
        assert_eq!(first_below(&[0.5, 0.4], 1.0).unwrap(), 0);
        assert!(matches!(first_below(&[0.5, 0.4], 0.1), Err(Error::ThresholdNotReached { .. })));
    }

    #[test]
    fn truncation_bandwidth_drops_only_small_entries() {
        // spikes on multiples of the bandwidth, as in staircase decay
        let curve = [1.0, 0.3, 0.3, 0.3, 0.2, 0.05, 0.05, 0.05, 0.06];
        assert_eq!(first_below(&curve, 0.1).unwrap(), 5);
        assert_eq!(truncation_bandwidth(&curve, 0.1).unwrap(), 4);
        assert_eq!(truncation_bandwidth(&[0.1, 0.01], 1.0).unwrap(), 0);
    }
}
