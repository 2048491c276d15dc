//! Asymptotic decay shapes with their unknown constants set to 1.

use super::proj::{check_gap, integral_constants};
use crate::error::{Error, Result};
use crate::quadrature::{Integrator, SingularEnds};

fn check_k(m: usize, k: usize) -> Result<f64> {
    if m == 0 || k <= m {
        return Err(Error::Parameter(format!("rate shapes need k > m >= 1, got k = {k}, m = {m}")));
    }
    Ok(k as f64 / m as f64 - 1.0)
}

/// `(k/m - 1)^(-1/2) q^^(k/(2m) - 1/2)` for `k > m`.
pub fn hasson_rate(a: f64, b: f64, m: usize, k: usize) -> Result<f64> {
    check_gap(a, b)?;
    let t = check_k(m, k)?;
    let (_, q) = integral_constants(a, b);
    Ok(q.powf(0.5 * t) / t.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FuchsRate {
    pub eta: f64,
    /// Ratio of the two weighted moments.
    pub k: f64,
    /// Combined quadrature error estimate for `eta`.
    pub est_error: f64,
}

impl FuchsRate {
    /// `(k/m - 1)^(-1/2) exp(-eta (k/m - 1))` for `k > m`.
    pub fn shape(&self, m: usize, k: usize) -> Result<f64> {
        let t = check_k(m, k)?;
        Ok((-self.eta * t).exp() / t.sqrt())
    }
}

/// Geometric rate of best sign approximation on `[-b1, -a] ∪ [a, b2]`.
///
/// With `c1 = b1/a`, `c2 = b2/a` and the weight
/// `w(x) = |(1 - x^2)(x + c1)(x - c2)|^(-1/2)` on `(-1, 1)`:
/// `K = ∫ x w / ∫ w` and `eta = ∫_{-1}^{K} (K - x) w(x) dx`.
pub fn fuchs_rate(a: f64, b1: f64, b2: f64, tol: f64) -> Result<FuchsRate> {
    if !(a > 0.0 && a < b1.min(b2) && b1.is_finite() && b2.is_finite()) {
        return Err(Error::Domain(format!("need 0 < a < min(b1, b2), got a = {a}, b1 = {b1}, b2 = {b2}")));
    }
    let (c1, c2) = (b1 / a, b2 / a);
    // smooth part of the weight once (1 - x^2)^(-1/2) is factored out
    let outer = move |x: f64| 1.0 / ((x + c1) * (c2 - x)).sqrt();
    let quad = Integrator::with_tol(tol);
    let den = quad.integrate_sqrt_singular(outer, -1.0, 1.0, SingularEnds::Both)?;
    // the first moment can vanish; measure its accuracy against the zeroth
    let moment = Integrator {
        abs_tol: tol * den.value,
        ..quad
    };
    let num = moment.integrate_sqrt_singular(|x| x * outer(x), -1.0, 1.0, SingularEnds::Both)?;
    let k = num.value / den.value;
    let k_err = (num.est_error + k.abs() * den.est_error) / den.value;

    // split [-1, K] at the midpoint: only the left half sees the singularity
    let mid = 0.5 * (k - 1.0);
    let left = quad.integrate_sqrt_singular(
        |x| (k - x) / ((1.0 - x) * (x + c1) * (c2 - x)).sqrt(),
        -1.0,
        mid,
        SingularEnds::Left,
    )?;
    let right = quad.integrate(|x| (k - x) * outer(x) / (1.0 - x * x).sqrt(), mid, k)?;
    let eta = left.value + right.value;
    Ok(FuchsRate {
        eta,
        k,
        est_error: left.est_error + right.est_error + k_err * den.value,
    })
}
