//! Globally adaptive Gauss–Kronrod (7/15) quadrature, with changes of
//! variable for semi-infinite ranges and inverse-square-root endpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Subdivision limit.
pub const MAX_PANELS: usize = 1 << 20;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub est_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Which ends of the interval carry a `(distance)^(-1/2)` weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularEnds {
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, Debug)]
pub struct Integrator {
    /// Relative tolerance on the total.
    pub tol: f64,
    /// Absolute floor; useful when the integral may vanish.
    pub abs_tol: f64,
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            tol: DEFAULT_TOL,
            abs_tol: 0.0,
            initial_panels: 1,
            max_panels: MAX_PANELS,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod15(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Panel {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.abs() * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        k += w * (f1 + f2);
        abs += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    let value = k * h;
    let abs = abs * h.abs();
    let err = ((k - g) * h).abs().max(50.0 * f64::EPSILON * abs);
    Panel {
        lo,
        hi,
        value,
        err,
        abs,
    }
}

impl Integrator {
    pub fn with_tol(tol: f64) -> Self {
        Integrator {
            tol,
            ..Default::default()
        }
    }

    /// `∫_lo^hi f`, subdividing the panel with the largest error estimate
    /// until the summed estimate meets the tolerance.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<QuadratureResult> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!("need finite lo < hi, got [{lo}, {hi}]")));
        }
        let init = self.initial_panels.max(1);
        let width = (hi - lo) / init as f64;
        let mut heap = BinaryHeap::with_capacity(64);
        for i in 0..init {
            let a = lo + width * i as f64;
            let b = if i + 1 == init { hi } else { lo + width * (i + 1) as f64 };
            heap.push(kronrod15(&f, a, b));
        }
        let mut evaluations = 15 * init;
        loop {
            let (value, err, abs) = heap
                .iter()
                .fold((0.0, 0.0, 0.0), |(v, e, s), p| (v + p.value, e + p.err, s + p.abs));
            if !value.is_finite() || !err.is_finite() {
                return Err(Error::Quadrature {
                    tol: self.tol,
                    est_error: f64::INFINITY,
                    evaluations,
                });
            }
            let target = (self.tol * value.abs()).max(self.abs_tol);
            let floor = 50.0 * f64::EPSILON * abs;
            if err <= target || err <= floor {
                return Ok(QuadratureResult {
                    value,
                    est_error: err,
                    evaluations,
                    converged: true,
                });
            }
            let worst = heap.pop().expect("at least one panel");
            let mid = 0.5 * (worst.lo + worst.hi);
            if heap.len() + 2 > self.max_panels || mid <= worst.lo || mid >= worst.hi {
                return Err(Error::Quadrature {
                    tol: self.tol,
                    est_error: err,
                    evaluations,
                });
            }
            heap.push(kronrod15(&f, worst.lo, mid));
            heap.push(kronrod15(&f, mid, worst.hi));
            evaluations += 30;
        }
    }

    /// `∫_0^∞ f` through `t = scale * tan(theta)`. Needs `f(t) = O(t^-2)`.
    pub fn integrate_semi_infinite(&self, f: impl Fn(f64) -> f64, scale: f64) -> Result<QuadratureResult> {
        if !(scale > 0.0) {
            return Err(Error::Domain(format!("scale must be positive, got {scale}")));
        }
        self.integrate(
            |theta| {
                let c = theta.cos();
                let t = scale * theta.tan();
                let v = f(t) * scale / (c * c);
                if v.is_finite() { v } else { 0.0 }
            },
            0.0,
            FRAC_PI_2,
        )
    }

    /// `∫_lo^hi g(x) w(x) dx` with `w = (x - lo)^(-1/2)`, `(hi - x)^(-1/2)` or
    /// their product, depending on `ends`. A cosine substitution absorbs the
    /// weight so only the smooth factor `g` is sampled.
    pub fn integrate_sqrt_singular(
        &self,
        g: impl Fn(f64) -> f64,
        lo: f64,
        hi: f64,
        ends: SingularEnds,
    ) -> Result<QuadratureResult> {
        if !(lo < hi) {
            return Err(Error::Domain(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        let len = hi - lo;
        match ends {
            SingularEnds::Both => {
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * len;
                self.integrate(|theta| g(mid - half * theta.cos()), 0.0, PI)
            }
            SingularEnds::Left => {
                // x = lo + len (1 - cos theta); w dx = sqrt(2 len) cos(theta/2) dtheta
                let root = (2.0 * len).sqrt();
                self.integrate(
                    |theta| {
                        let s = (0.5 * theta).sin();
                        g(lo + 2.0 * len * s * s) * root * (0.5 * theta).cos()
                    },
                    0.0,
                    FRAC_PI_2,
                )
            }
            SingularEnds::Right => {
                let root = (2.0 * len).sqrt();
                self.integrate(
                    |theta| {
                        let s = (0.5 * theta).sin();
                        g(hi - 2.0 * len * s * s) * root * (0.5 * theta).cos()
                    },
                    0.0,
                    FRAC_PI_2,
                )
            }
        }
    }
}

pub fn integrate_adaptive(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult> {
    Integrator::with_tol(tol).integrate(f, lo, hi)
}

pub fn integrate_semi_infinite(f: impl Fn(f64) -> f64, scale: f64, tol: f64) -> Result<QuadratureResult> {
    Integrator::with_tol(tol).integrate_semi_infinite(f, scale)
}

pub fn integrate_sqrt_singular(
    g: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    ends: SingularEnds,
    tol: f64,
) -> Result<QuadratureResult> {
    Integrator::with_tol(tol).integrate_sqrt_singular(g, lo, hi, ends)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(r: QuadratureResult, exact: f64) {
        assert!(r.converged);
        assert!(
            (r.value - exact).abs() <= r.est_error.max(1e-15),
            "value {} exact {} est {}",
            r.value,
            exact,
            r.est_error
        );
        assert!(r.est_error <= 1e-10 * exact.abs().max(1.0));
    }

    #[test]
    fn polynomial() {
        check(integrate_adaptive(|x| x * x, 0.0, 1.0, 1e-10).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn semi_infinite_closed_forms() {
        for b in [0.3, 1.0, 2.5] {
            check(integrate_semi_infinite(|t| 1.0 / (b * b + t * t), b, 1e-10).unwrap(), PI / (2.0 * b));
        }
        check(integrate_semi_infinite(|t| (-t * t).exp(), 1.0, 1e-10).unwrap(), PI.sqrt() / 2.0);
    }

    #[test]
    fn cauchy_schwarz_product_integral() {
        let (a, b) = (0.3_f64, 1.0_f64);
        let r = integrate_semi_infinite(|t| 1.0 / ((b * b + t * t) * (a * a + t * t)).sqrt(), (a * b).sqrt(), 1e-10).unwrap();
        assert!(r.value <= PI / (2.0 * (a * b).sqrt()));
        // closed form: K(k') / b with complete elliptic integral; check against a
        // brute-force midpoint sum on the tangent map instead
        let n = 400_000;
        let h = FRAC_PI_2 / n as f64;
        let brute: f64 = (0..n)
            .map(|i| {
                let th = (i as f64 + 0.5) * h;
                let t = (a * b).sqrt() * th.tan();
                (a * b).sqrt() / th.cos().powi(2) / ((b * b + t * t) * (a * a + t * t)).sqrt()
            })
            .sum::<f64>()
            * h;
        assert!((r.value - brute).abs() < 1e-8, "{} vs {}", r.value, brute);
    }

    #[test]
    fn chebyshev_weight() {
        check(
            integrate_sqrt_singular(|_| 1.0, -1.0, 1.0, SingularEnds::Both, 1e-10).unwrap(),
            PI,
        );
        let odd = integrate_sqrt_singular(|x| x, -1.0, 1.0, SingularEnds::Both, 1e-10).unwrap();
        assert!(odd.converged);
        assert!(odd.value.abs() < 1e-14);
        // ∫ x^2 / sqrt(1 - x^2) = π/2
        check(
            integrate_sqrt_singular(|x| x * x, -1.0, 1.0, SingularEnds::Both, 1e-10).unwrap(),
            PI / 2.0,
        );
    }

    #[test]
    fn one_sided_weights() {
        // ∫_0^1 x^{-1/2} = 2 ; ∫_0^1 (1-x)^{-1/2} x = 4/3
        check(integrate_sqrt_singular(|_| 1.0, 0.0, 1.0, SingularEnds::Left, 1e-10).unwrap(), 2.0);
        check(
            integrate_sqrt_singular(|x| x, 0.0, 1.0, SingularEnds::Right, 1e-10).unwrap(),
            4.0 / 3.0,
        );
    }

    #[test]
    fn invariant_under_initial_panel_doubling() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let one = integrate_adaptive(f, 0.0, 4.0, 1e-12).unwrap();
        let two = Integrator {
            tol: 1e-12,
            initial_panels: 2,
            ..Default::default()
        }
        .integrate(f, 0.0, 4.0)
        .unwrap();
        assert!((one.value - two.value).abs() <= 1e-12 * one.value.abs() + one.est_error + two.est_error);
    }

    #[test]
    fn reports_non_convergence() {
        let r = Integrator {
            tol: 1e-14,
            max_panels: 4,
            ..Default::default()
        }
        .integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
        assert!(integrate_adaptive(|x| x, 1.0, 0.0, 1e-10).is_err());
    }
}
