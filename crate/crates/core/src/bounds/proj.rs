//! Entry bounds for the spectral projector onto the negative eigenvalues of
//! an `m`-banded symmetric matrix with spectrum in `[-b, -a] ∪ [a, b]`.
//!
//! The sign-function versions are twice the projector ones.

use std::f64::consts::PI;

use super::optimize::minimize_open_interval;
use crate::error::{Error, Result};
use crate::quadrature::Integrator;
use crate::spectrum::EigenvalueLadder;

/// Minimized bound value and the argument attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Optimized {
    pub value: f64,
    pub param: f64,
}

pub(crate) fn check_gap(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && 0.0 < a && a < b {
        Ok(())
    } else {
        Err(Error::Domain(format!("need 0 < a < b, got a = {a}, b = {b}")))
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::Parameter("bandwidth m must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `alpha = k/(2m) - 1/2`
pub fn alpha(m: usize, k: usize) -> f64 {
    k as f64 / (2.0 * m as f64) - 0.5
}

// --- exponential-decay bound in xi -------------------------------------------

/// Upper end `(b + a)/(b - a)` of the admissible `xi` range.
pub fn xi_bar(a: f64, b: f64) -> f64 {
    (b + a) / (b - a)
}

fn bbr_z0(a: f64, b: f64, xi: f64) -> f64 {
    let (a2, b2) = (a * a, b * b);
    ((b2 + a2) / (b2 - a2) - (xi * xi + 1.0) / (2.0 * xi)) * (b2 - a2) / 2.0
}

fn bbr_log(a: f64, b: f64, m: usize, k: usize, xi: f64) -> f64 {
    let z0 = bbr_z0(a, b, xi);
    if !(z0 > 0.0) || !(xi > 1.0) {
        return f64::INFINITY;
    }
    (2.0 * b * xi).ln() - 0.5 * z0.ln() - (xi - 1.0).ln() - k as f64 / (2.0 * m as f64) * xi.ln()
}

/// `2 b xi M(xi) / (xi - 1) * xi^(-k/(2m))` with `M = z0^(-1/2)`, for `1 < xi < xi_bar`.
pub fn proj_bound_bbr(a: f64, b: f64, m: usize, k: usize, xi: f64) -> Result<f64> {
    check_gap(a, b)?;
    check_m(m)?;
    let top = xi_bar(a, b);
    if !(xi > 1.0 && xi < top) {
        return Err(Error::Parameter(format!("xi = {xi} outside (1, {top})")));
    }
    let z0 = bbr_z0(a, b, xi);
    if !(z0 > 0.0) {
        return Err(Error::Parameter(format!("z0 = {z0} is not positive at xi = {xi}")));
    }
    let m_xi = 1.0 / z0.sqrt();
    Ok(2.0 * b * xi * m_xi / (xi - 1.0) * xi.powf(-(k as f64) / (2.0 * m as f64)))
}

pub fn proj_bound_bbr_opt(a: f64, b: f64, m: usize, k: usize) -> Result<Optimized> {
    check_gap(a, b)?;
    check_m(m)?;
    let best = minimize_open_interval(1.0, xi_bar(a, b), |xi| bbr_log(a, b, m, k, xi));
    Ok(Optimized {
        value: best.value.exp(),
        param: best.x,
    })
}

// --- geometric bound ----------------------------------------------------------

/// `(C^, q^) = (1/4 (1 + sqrt(b/a))^2, (b - a)/(b + a))`.
pub fn integral_constants(a: f64, b: f64) -> (f64, f64) {
    let s = 1.0 + (b / a).sqrt();
    (0.25 * s * s, (b - a) / (b + a))
}

fn geometric(a: f64, b: f64, exponent: f64) -> f64 {
    let (c, q) = integral_constants(a, b);
    c * q.powf(exponent)
}

/// `C^ q^^(k/(2m) - 1/2)`; 1 for `k < m`.
pub fn proj_bound_integral(a: f64, b: f64, m: usize, k: usize) -> Result<f64> {
    check_gap(a, b)?;
    check_m(m)?;
    if k < m {
        return Ok(1.0);
    }
    Ok(geometric(a, b, alpha(m, k)))
}

// --- integral sign bound --------------------------------------------------------

/// `r(t) = (b^2 + t^2)/(a^2 + t^2)`
pub fn r_of_t(a: f64, b: f64, t: f64) -> f64 {
    (b * b + t * t) / (a * a + t * t)
}

/// `C(t) = (1 + sqrt(r))^2 / (2 (b^2 + t^2))`
pub fn c_of_t(a: f64, b: f64, t: f64) -> f64 {
    let s = 1.0 + r_of_t(a, b, t).sqrt();
    s * s / (2.0 * (b * b + t * t))
}

/// `q(t) = (sqrt(r) - 1)/(sqrt(r) + 1)`, written without the cancellation in
/// `sqrt(r) - 1` for large `t`.
pub fn q_of_t(a: f64, b: f64, t: f64) -> f64 {
    let s = 1.0 + r_of_t(a, b, t).sqrt();
    (b * b - a * a) / ((a * a + t * t) * s * s)
}

/// `(2b/pi) ∫_0^∞ C(t) q(t)^alpha dt` with `alpha = k/(2m) - 1/2`, for `k >= m`.
pub fn sign_bound_quadrature(a: f64, b: f64, m: usize, k: usize, tol: f64) -> Result<f64> {
    check_gap(a, b)?;
    check_m(m)?;
    if k < m {
        return Err(Error::Parameter(format!("quadrature bound needs k >= m, got k = {k}, m = {m}")));
    }
    let al = alpha(m, k);
    let r = Integrator::with_tol(tol).integrate_semi_infinite(|t| c_of_t(a, b, t) * q_of_t(a, b, t).powf(al), (a * b).sqrt())?;
    Ok(2.0 * b / PI * r.value)
}

/// `(2b/pi) ∫_0^∞ C(t) dt`, bounded above by `1/2 (1 + sqrt(b/a))^2`.
pub fn sign_quadrature_constant(a: f64, b: f64, tol: f64) -> Result<f64> {
    check_gap(a, b)?;
    let r = Integrator::with_tol(tol).integrate_semi_infinite(|t| c_of_t(a, b, t), (a * b).sqrt())?;
    Ok(2.0 * b / PI * r.value)
}

// --- Gaussian-majorant bound in tau --------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauConstants {
    pub c1: f64,
    pub c2: f64,
    pub tau_bar: f64,
}

/// `C1 = 1/(2ab)`, `C2 = (a^2 + ab + b^2)/(8 a^3 b^3)`, `tau_bar = sqrt(C1/C2)`.
pub fn tau_constants(a: f64, b: f64) -> TauConstants {
    let c1 = 1.0 / (2.0 * a * b);
    let c2 = (a * a + a * b + b * b) / (8.0 * a.powi(3) * b.powi(3));
    TauConstants {
        c1,
        c2,
        tau_bar: (c1 / c2).sqrt(),
    }
}

/// `exp(-alpha t^2 (C1 - tau^2 C2)) q(0)^alpha`, which dominates `q(t)^alpha` on `[0, tau]`.
pub fn gaussian_majorant(a: f64, b: f64, tau: f64, alpha: f64, t: f64) -> Result<f64> {
    check_gap(a, b)?;
    let tc = tau_constants(a, b);
    if !(tau >= 0.0 && tau < tc.tau_bar) {
        return Err(Error::Parameter(format!("tau = {tau} outside [0, {})", tc.tau_bar)));
    }
    if !(t >= 0.0 && t <= tau) {
        return Err(Error::Parameter(format!("t = {t} outside [0, tau = {tau}]")));
    }
    Ok((-alpha * t * t * (tc.c1 - tau * tau * tc.c2)).exp() * q_of_t(a, b, 0.0).powf(alpha))
}

/// Which constant multiplies the tail term of the tau bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum K2Variant {
    /// `1/2 (1 + sqrt(b/a))^2`, the value the derivation arrives at.
    #[default]
    Proof,
    /// `1/2 (1 + sqrt(b/a))^(1/2)`.
    Printed,
}

impl K2Variant {
    pub fn name(self) -> &'static str {
        match self {
            K2Variant::Proof => "proof",
            K2Variant::Printed => "printed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "proof" => Ok(K2Variant::Proof),
            "printed" => Ok(K2Variant::Printed),
            other => Err(Error::Config(format!("unknown k2 variant {other:?} (expected proof or printed)"))),
        }
    }

    pub fn value(self, a: f64, b: f64) -> f64 {
        let s = 1.0 + (b / a).sqrt();
        match self {
            K2Variant::Proof => 0.5 * s * s,
            K2Variant::Printed => 0.5 * s.sqrt(),
        }
    }
}

/// `K1(tau) = sqrt(2/pi) (1 + b/a)^2 / sqrt(C1 - tau^2 C2)`
pub fn k1(a: f64, b: f64, tau: f64) -> f64 {
    let tc = tau_constants(a, b);
    let s = 1.0 + b / a;
    (2.0 / PI).sqrt() * s * s / (tc.c1 - tau * tau * tc.c2).sqrt()
}

fn tau_value(a: f64, b: f64, m: usize, k: usize, tau: f64, k2: f64) -> f64 {
    let al = alpha(m, k);
    let ratio = k as f64 / m as f64 - 1.0;
    0.5 * (k1(a, b, tau) / ratio.sqrt() * q_of_t(a, b, 0.0).powf(al) + k2 * q_of_t(a, b, tau).powf(al))
}

fn check_tau_k(m: usize, k: usize) -> Result<()> {
    if k <= m {
        return Err(Error::Parameter(format!("tau bound needs k > m, got k = {k}, m = {m}")));
    }
    Ok(())
}

/// `1/2 [K1(tau)/sqrt(k/m - 1) q(0)^alpha + K2 q(tau)^alpha]` for `k > m`, `0 < tau < tau_bar`.
pub fn proj_bound_tau(a: f64, b: f64, m: usize, k: usize, tau: f64, variant: K2Variant) -> Result<f64> {
    check_gap(a, b)?;
    check_m(m)?;
    check_tau_k(m, k)?;
    let tc = tau_constants(a, b);
    if !(tau > 0.0 && tau < tc.tau_bar) {
        return Err(Error::Parameter(format!("tau = {tau} outside (0, {})", tc.tau_bar)));
    }
    Ok(tau_value(a, b, m, k, tau, variant.value(a, b)))
}

pub fn proj_bound_tau_opt(a: f64, b: f64, m: usize, k: usize, variant: K2Variant) -> Result<Optimized> {
    check_gap(a, b)?;
    check_m(m)?;
    check_tau_k(m, k)?;
    let tc = tau_constants(a, b);
    let k2 = variant.value(a, b);
    let best = minimize_open_interval(0.0, tc.tau_bar, |tau| tau_value(a, b, m, k, tau, k2).ln());
    Ok(Optimized {
        value: best.value.exp(),
        param: best.x,
    })
}

// --- spectrum-aware family --------------------------------------------------------

/// Largest admissible `ell` at distance `k`, if any: `floor(k/(2m) - 1/2)` capped at `nu - 1`.
pub fn sl_max_ell(ladder: &EigenvalueLadder, m: usize, k: usize) -> Option<usize> {
    if k < m {
        return None;
    }
    // floor(k/(2m) - 1/2) = floor((k - m) / (2m))
    let top = (k - m) / (2 * m);
    Some(top.min(ladder.nu() - 1))
}

fn check_ladder(ladder: &EigenvalueLadder, a: f64) -> Result<()> {
    if !(a > 0.0) || ladder.smallest() < a * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "gap a = {a} must be positive and at most the smallest magnitude {}",
            ladder.smallest()
        )));
    }
    Ok(())
}

/// `C^_ell q^_ell^(k/(2m) - 1/2 - ell)` with `b_ell` the `ell`-th largest distinct magnitude.
pub fn proj_bound_sl(ladder: &EigenvalueLadder, a: f64, m: usize, k: usize, ell: usize) -> Result<f64> {
    check_ladder(ladder, a)?;
    check_m(m)?;
    if ell == 0 && k < m {
        return Ok(1.0);
    }
    match sl_max_ell(ladder, m, k) {
        Some(top) if ell <= top => {}
        _ => {
            return Err(Error::Parameter(format!(
                "ell = {ell} not admissible at k = {k} (m = {m}, nu = {})",
                ladder.nu()
            )))
        }
    }
    let b = ladder.b(ell).expect("ell < nu");
    Ok(sl_value(a, b, m, k, ell))
}

fn sl_value(a: f64, b: f64, m: usize, k: usize, ell: usize) -> f64 {
    // b may undershoot a by the ladder tolerance; q^ is then clamped to 0
    geometric(a, b.max(a), alpha(m, k) - ell as f64)
}

/// Exhaustive minimum over the admissible `ell`; ties go to the smallest `ell`.
pub fn proj_bound_sl_opt(ladder: &EigenvalueLadder, a: f64, m: usize, k: usize) -> Result<Optimized> {
    check_ladder(ladder, a)?;
    check_m(m)?;
    let Some(top) = sl_max_ell(ladder, m, k) else {
        return Ok(Optimized { value: 1.0, param: 0.0 });
    };
    let mut best = Optimized {
        value: f64::INFINITY,
        param: 0.0,
    };
    for ell in 0..=top {
        let b = ladder.b(ell).expect("ell < nu");
        let v = sl_value(a, b, m, k, ell);
        if v < best.value {
            best = Optimized {
                value: v,
                param: ell as f64,
            };
        }
    }
    Ok(best)
}
