//! Decay-bound families and their evaluation as curves `k -> B(k)`.

pub mod inverse;
pub mod optimize;
pub mod proj;
pub mod rates;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::DEFAULT_TOL;
use crate::spectrum::{EigenvalueLadder, SpectrumSpec};

pub use inverse::{
    demko_params, inverse_bound_demko, inverse_bound_frommer, inverse_bound_frommer_opt, inverse_bound_refined,
    inverse_bound_refined_opt, DemkoParams,
};
pub use proj::{
    gaussian_majorant, integral_constants, proj_bound_bbr, proj_bound_bbr_opt, proj_bound_integral, proj_bound_sl,
    proj_bound_sl_opt, proj_bound_tau, proj_bound_tau_opt, sign_bound_quadrature, sign_quadrature_constant,
    tau_constants, xi_bar, K2Variant, Optimized, TauConstants,
};
pub use rates::{fuchs_rate, hasson_rate, FuchsRate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Exponential bound optimized over `xi`.
    B1Bbr,
    /// Closed-form geometric bound.
    B2Integral,
    /// Gaussian-majorant bound optimized over `tau`.
    B3Tau,
    /// Half the quadrature sign bound.
    BQuadrature,
    /// Spectrum-aware bound optimized over `ell`.
    BSl,
    InvDemko,
    InvFrommer,
    InvRefined,
    RateHasson,
    RateFuchs,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::B1Bbr,
        Family::B2Integral,
        Family::B3Tau,
        Family::BQuadrature,
        Family::BSl,
        Family::InvDemko,
        Family::InvFrommer,
        Family::InvRefined,
        Family::RateHasson,
        Family::RateFuchs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::B1Bbr => "b1",
            Family::B2Integral => "b2",
            Family::B3Tau => "b3",
            Family::BQuadrature => "quad",
            Family::BSl => "sl",
            Family::InvDemko => "demko",
            Family::InvFrommer => "frommer",
            Family::InvRefined => "refined",
            Family::RateHasson => "hasson",
            Family::RateFuchs => "fuchs",
        }
    }

    /// Bounds on projector entries (as opposed to inverse bounds or rate shapes).
    pub fn is_projector_bound(self) -> bool {
        matches!(
            self,
            Family::B1Bbr | Family::B2Integral | Family::B3Tau | Family::BQuadrature | Family::BSl
        )
    }

    pub fn is_inverse_bound(self) -> bool {
        matches!(self, Family::InvDemko | Family::InvFrommer | Family::InvRefined)
    }

    /// Asymptotic shapes with unit constants; not certified bounds.
    pub fn is_rate(self) -> bool {
        matches!(self, Family::RateHasson | Family::RateFuchs)
    }

    /// Name of the optimized parameter, if any.
    pub fn param_name(self) -> Option<&'static str> {
        match self {
            Family::B1Bbr => Some("xi"),
            Family::B3Tau => Some("tau"),
            Family::BSl | Family::InvFrommer | Family::InvRefined => Some("ell"),
            _ => None,
        }
    }

    /// Parses a comma-separated list such as `b1,b2,sl`.
    pub fn parse_list(s: &str) -> Result<Vec<Family>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let f: Family = part.parse()?;
            if !out.contains(&f) {
                out.push(f);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown bound family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundPoint {
    pub k: usize,
    /// Formula value before capping.
    pub raw: f64,
    /// `min(1, raw)` for projector families, `raw` otherwise.
    pub capped: f64,
    /// Optimizer choice at this `k` (`xi`, `tau` or `ell`).
    pub param: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCurve {
    pub family: Family,
    /// Label used for file names; differs from the family name for fixed-`ell` curves.
    pub label: String,
    /// Constants used by the formula.
    pub params: Vec<(String, f64)>,
    pub points: Vec<BoundPoint>,
}

impl BoundCurve {
    pub fn capped(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.capped).collect()
    }

    pub fn raw(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.raw).collect()
    }

    pub fn at(&self, k: usize) -> Option<&BoundPoint> {
        self.points.iter().find(|p| p.k == k)
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// Everything a curve may need about the matrix and its spectrum.
#[derive(Clone, Debug)]
pub struct BoundContext {
    pub spectrum: SpectrumSpec,
    pub m: usize,
    /// Distinct magnitudes; needed by `sl` and `refined`.
    pub ladder: Option<EigenvalueLadder>,
    /// Ascending eigenvalues; needed by `frommer`.
    pub eigenvalues: Option<Vec<f64>>,
    pub k2: K2Variant,
    pub tol: f64,
}

impl BoundContext {
    pub fn new(spectrum: SpectrumSpec, m: usize) -> Self {
        BoundContext {
            spectrum,
            m,
            ladder: None,
            eigenvalues: None,
            k2: K2Variant::default(),
            tol: DEFAULT_TOL,
        }
    }

    fn ladder(&self, family: Family) -> Result<&EigenvalueLadder> {
        self.ladder
            .as_ref()
            .ok_or_else(|| Error::Config(format!("family {family} needs the eigenvalue list")))
    }

    fn positive_spectrum(&self) -> Result<(f64, f64)> {
        // [lambda_min, lambda_max] of a positive definite matrix
        match &self.eigenvalues {
            Some(e) if !e.is_empty() && e[0] > 0.0 => Ok((e[0], *e.last().unwrap())),
            Some(_) => Err(Error::Domain("inverse bounds need a positive spectrum".into())),
            None => Err(Error::Config("inverse bounds need the eigenvalue list".into())),
        }
    }
}

fn cap(family: Family, raw: f64) -> f64 {
    if family.is_projector_bound() {
        raw.min(1.0)
    } else {
        raw
    }
}

fn point(family: Family, k: usize, raw: f64, param: Option<f64>) -> BoundPoint {
    BoundPoint {
        k,
        raw,
        capped: cap(family, raw),
        param,
    }
}

/// Evaluates `family` for `k = 0..=kmax`.
///
/// Projector families return 1 where their formula is undefined (`k < m`, or
/// `k <= m` for `b3`); rate shapes do the same for `k <= m`. Inverse families
/// return the diagonal bound `1/lambda_min` at `k = 0`.
pub fn bound_curve(family: Family, ctx: &BoundContext, kmax: usize) -> Result<BoundCurve> {
    let m = ctx.m;
    if m == 0 {
        return Err(Error::Parameter("bandwidth m must be at least 1".into()));
    }
    let spec = &ctx.spectrum;
    let (a, b) = (spec.a(), spec.b());
    let mut params: Vec<(String, f64)> = vec![("m".into(), m as f64)];
    let mut points = Vec::with_capacity(kmax + 1);
    match family {
        Family::B1Bbr => {
            params.extend([("a".into(), a), ("b".into(), b), ("xi_bar".into(), xi_bar(a, b))]);
            for k in 0..=kmax {
                let o = proj_bound_bbr_opt(a, b, m, k)?;
                points.push(point(family, k, o.value, Some(o.param)));
            }
        }
        Family::B2Integral => {
            let (c, q) = integral_constants(a, b);
            params.extend([("a".into(), a), ("b".into(), b), ("C_hat".into(), c), ("q_hat".into(), q)]);
            for k in 0..=kmax {
                points.push(point(family, k, proj_bound_integral(a, b, m, k)?, None));
            }
        }
        Family::B3Tau => {
            let tc = tau_constants(a, b);
            params.extend([
                ("a".into(), a),
                ("b".into(), b),
                ("C1".into(), tc.c1),
                ("C2".into(), tc.c2),
                ("tau_bar".into(), tc.tau_bar),
                ("K2".into(), ctx.k2.value(a, b)),
            ]);
            for k in 0..=kmax {
                if k <= m {
                    points.push(point(family, k, 1.0, None));
                } else {
                    let o = proj_bound_tau_opt(a, b, m, k, ctx.k2)?;
                    points.push(point(family, k, o.value, Some(o.param)));
                }
            }
        }
        Family::BQuadrature => {
            params.extend([("a".into(), a), ("b".into(), b), ("tol".into(), ctx.tol)]);
            for k in 0..=kmax {
                let raw = if k < m {
                    1.0
                } else {
                    0.5 * sign_bound_quadrature(a, b, m, k, ctx.tol)?
                };
                points.push(point(family, k, raw, None));
            }
        }
        Family::BSl => {
            let ladder = ctx.ladder(family)?;
            params.extend([("a".into(), a), ("nu".into(), ladder.nu() as f64)]);
            for k in 0..=kmax {
                let o = proj_bound_sl_opt(ladder, a, m, k)?;
                points.push(point(family, k, o.value, Some(o.param)));
            }
        }
        Family::InvDemko => {
            let (lo, hi) = ctx.positive_spectrum()?;
            let p = demko_params(lo, hi)?;
            params.extend([("r".into(), p.r), ("C".into(), p.c), ("q".into(), p.q)]);
            points.push(point(family, 0, 1.0 / lo, None));
            for k in 1..=kmax {
                points.push(point(family, k, inverse_bound_demko(lo, hi, m, k)?, None));
            }
        }
        Family::InvFrommer => {
            let (lo, _) = ctx.positive_spectrum()?;
            let eigs = ctx.eigenvalues.as_deref().expect("checked");
            params.push(("C".into(), 2.0 / lo));
            points.push(point(family, 0, 1.0 / lo, None));
            for k in 1..=kmax {
                let (v, ell) = inverse_bound_frommer_opt(eigs, m, k)?;
                points.push(point(family, k, v, Some(ell as f64)));
            }
        }
        Family::InvRefined => {
            let ladder = ctx.ladder(family)?;
            params.push(("nu".into(), ladder.nu() as f64));
            points.push(point(family, 0, 1.0 / ladder.smallest(), None));
            for k in 1..=kmax {
                let (v, ell) = inverse_bound_refined_opt(ladder, m, k)?;
                points.push(point(family, k, v, Some(ell as f64)));
            }
        }
        Family::RateHasson => {
            let (_, q) = integral_constants(a, b);
            params.extend([("a".into(), a), ("b".into(), b), ("q_hat".into(), q)]);
            for k in 0..=kmax {
                let raw = if k <= m { 1.0 } else { hasson_rate(a, b, m, k)? };
                points.push(point(family, k, raw, None));
            }
        }
        Family::RateFuchs => {
            let f = fuchs_rate(a, spec.b1(), spec.b2(), ctx.tol)?;
            params.extend([
                ("a".into(), a),
                ("b1".into(), spec.b1()),
                ("b2".into(), spec.b2()),
                ("eta".into(), f.eta),
                ("K".into(), f.k),
            ]);
            for k in 0..=kmax {
                let raw = if k <= m { 1.0 } else { f.shape(m, k)? };
                points.push(point(family, k, raw, None));
            }
        }
    }
    Ok(BoundCurve {
        family,
        label: family.name().to_string(),
        params,
        points,
    })
}

/// The spectrum-aware bound at a fixed `ell`, over the `k` where it is admissible.
pub fn sl_curve_fixed(ctx: &BoundContext, ell: usize, kmax: usize) -> Result<BoundCurve> {
    let ladder = ctx.ladder(Family::BSl)?;
    let m = ctx.m;
    let a = ctx.spectrum.a();
    let b = ladder
        .b(ell)
        .ok_or_else(|| Error::Parameter(format!("ell = {ell} exceeds nu - 1 = {}", ladder.nu() - 1)))?;
    let (c, q) = integral_constants(a, b.max(a));
    let mut points = Vec::new();
    for k in 0..=kmax {
        if let Ok(v) = proj_bound_sl(ladder, a, m, k, ell) {
            points.push(point(Family::BSl, k, v, Some(ell as f64)));
        }
    }
    Ok(BoundCurve {
        family: Family::BSl,
        label: format!("sl_l{ell}"),
        params: vec![
            ("m".into(), m as f64),
            ("ell".into(), ell as f64),
            ("b_ell".into(), b),
            ("C_hat".into(), c),
            ("q_hat".into(), q),
        ],
        points,
    })
}
