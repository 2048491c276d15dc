//! Entry bounds for the inverse of a symmetric positive definite `m`-banded
//! matrix, from Chebyshev approximation of `1/x`.

use crate::error::{Error, Result};
use crate::spectrum::EigenvalueLadder;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DemkoParams {
    pub r: f64,
    pub c: f64,
    pub q: f64,
}

impl DemkoParams {
    /// Best uniform approximation error of `1/x` on `[a, b]` by degree-`k` polynomials.
    pub fn best_error(&self, k: usize) -> f64 {
        self.c * self.q.powi(k as i32 + 1)
    }
}

fn rate(r: f64) -> f64 {
    let s = r.sqrt();
    (s - 1.0) / (s + 1.0)
}

/// `r = b/a`, `C = (1 + sqrt(r))^2/(2b)`, `q = (sqrt(r) - 1)/(sqrt(r) + 1)`.
pub fn demko_params(a: f64, b: f64) -> Result<DemkoParams> {
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::Domain(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    let r = b / a;
    let s = 1.0 + r.sqrt();
    Ok(DemkoParams {
        r,
        c: s * s / (2.0 * b),
        q: rate(r),
    })
}

fn check_mk(m: usize, k: usize) -> Result<()> {
    if m == 0 || k == 0 {
        return Err(Error::Parameter(format!("inverse bounds need m >= 1 and k >= 1, got m = {m}, k = {k}")));
    }
    Ok(())
}

/// `C q^(k/m)`
pub fn inverse_bound_demko(a: f64, b: f64, m: usize, k: usize) -> Result<f64> {
    let p = demko_params(a, b)?;
    check_mk(m, k)?;
    Ok(p.c * p.q.powf(k as f64 / m as f64))
}

fn check_ascending(lambdas: &[f64]) -> Result<()> {
    if lambdas.is_empty() || !(lambdas[0] > 0.0) {
        return Err(Error::Domain("eigenvalues must be positive and nonempty".into()));
    }
    if lambdas.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Domain("eigenvalues must be sorted ascending".into()));
    }
    Ok(())
}

/// Largest `ell` allowed at distance `k`: `min(floor(k/m), n - 1)`.
fn frommer_top(n: usize, m: usize, k: usize) -> usize {
    (k / m).min(n - 1)
}

fn frommer_value(lambdas: &[f64], m: usize, k: usize, ell: usize) -> f64 {
    let n = lambdas.len();
    let l1 = lambdas[0];
    let q = rate(lambdas[n - 1 - ell] / l1);
    2.0 / l1 * q.powf(k as f64 / m as f64 - ell as f64)
}

/// `C q_ell^(k/m - ell)` with `C = 2/lambda_1`, `r_ell = lambda_(n-ell)/lambda_1`.
pub fn inverse_bound_frommer(lambdas: &[f64], m: usize, k: usize, ell: usize) -> Result<f64> {
    check_ascending(lambdas)?;
    check_mk(m, k)?;
    if ell > frommer_top(lambdas.len(), m, k) {
        return Err(Error::Parameter(format!("ell = {ell} exceeds floor(k/m) or n - 1 at k = {k}, m = {m}")));
    }
    Ok(frommer_value(lambdas, m, k, ell))
}

/// Minimum over `ell = 0..=floor(k/m)`; returns `(value, ell)`.
pub fn inverse_bound_frommer_opt(lambdas: &[f64], m: usize, k: usize) -> Result<(f64, usize)> {
    check_ascending(lambdas)?;
    check_mk(m, k)?;
    Ok(argmin((0..=frommer_top(lambdas.len(), m, k)).map(|l| (frommer_value(lambdas, m, k, l), l))))
}

fn refined_value(ladder: &EigenvalueLadder, m: usize, k: usize, ell: usize) -> f64 {
    let l1 = ladder.smallest();
    let top = ladder.b(ell).expect("ell < nu");
    let r = top / l1;
    let s = 1.0 + r.sqrt();
    s * s / (2.0 * top) * rate(r).powf(k as f64 / m as f64 - ell as f64)
}

fn check_positive_ladder(ladder: &EigenvalueLadder) -> Result<()> {
    if ladder.n_negative() > 0 {
        return Err(Error::Domain("refined inverse bound needs a positive spectrum".into()));
    }
    Ok(())
}

/// `C_ell q_ell^(k/m - ell)` with `C_ell = (1 + sqrt(r_ell))^2/(2 lambda_(nu-ell))`.
pub fn inverse_bound_refined(ladder: &EigenvalueLadder, m: usize, k: usize, ell: usize) -> Result<f64> {
    check_positive_ladder(ladder)?;
    check_mk(m, k)?;
    if ell >= ladder.nu() || ell > k / m {
        return Err(Error::Parameter(format!(
            "ell = {ell} not admissible (nu = {}, floor(k/m) = {})",
            ladder.nu(),
            k / m
        )));
    }
    Ok(refined_value(ladder, m, k, ell))
}

pub fn inverse_bound_refined_opt(ladder: &EigenvalueLadder, m: usize, k: usize) -> Result<(f64, usize)> {
    check_positive_ladder(ladder)?;
    check_mk(m, k)?;
    let top = (k / m).min(ladder.nu() - 1);
    Ok(argmin((0..=top).map(|l| (refined_value(ladder, m, k, l), l))))
}

fn argmin(it: impl Iterator<Item = (f64, usize)>) -> (f64, usize) {
    it.fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best })
}
