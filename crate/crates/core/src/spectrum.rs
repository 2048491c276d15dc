//! Gap geometry of a two-component real spectrum and the ladder of distinct
//! eigenvalue magnitudes used by the spectrum-aware bounds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Default relative tolerance for merging eigenvalue magnitudes.
pub const DEFAULT_TOL_CLUSTER: f64 = 1e-10;

/// Normalized spectral inclusion `[-b1, -a] ∪ [a, b2]` with split point 0.
///
/// `scale` and `shift` record the map `x -> scale * x + shift` taking the
/// original spectrum to the normalized one (`H~ = scale * H + shift * I`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumSpec {
    a: f64,
    b1: f64,
    b2: f64,
    mu: f64,
    scale: f64,
    shift: f64,
    gamma: f64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NormalizeOptions {
    /// Also rescale so that `b = max(b1, b2) = 1`.
    pub unit_outer_radius: bool,
}

/// Shifts the gap `(a1, a2)` to be centred at zero.
///
/// Requires `b1_raw < a1 < mu_raw < a2 < b2_raw`.
pub fn normalize_spectrum(b1_raw: f64, a1: f64, a2: f64, b2_raw: f64, mu_raw: f64) -> Result<SpectrumSpec> {
    normalize_spectrum_with(b1_raw, a1, a2, b2_raw, mu_raw, NormalizeOptions::default())
}

pub fn normalize_spectrum_with(
    b1_raw: f64,
    a1: f64,
    a2: f64,
    b2_raw: f64,
    mu_raw: f64,
    opts: NormalizeOptions,
) -> Result<SpectrumSpec> {
    let all = [b1_raw, a1, a2, b2_raw, mu_raw];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(Error::GapGeometry(format!("non-finite endpoint in {all:?}")));
    }
    if a1 == a2 {
        return Err(Error::VanishingGap(a1));
    }
    if !(b1_raw < a1 && a1 < mu_raw && mu_raw < a2 && a2 < b2_raw) {
        return Err(Error::GapGeometry(format!(
            "need b1 < a1 < mu < a2 < b2, got ({b1_raw}, {a1}, {mu_raw}, {a2}, {b2_raw})"
        )));
    }
    let mid = 0.5 * (a1 + a2);
    let scale = if opts.unit_outer_radius {
        1.0 / (b2_raw - mid).max(mid - b1_raw)
    } else {
        1.0
    };
    let shift = -scale * mid;
    let spec = SpectrumSpec {
        a: scale * 0.5 * (a2 - a1),
        b1: -(scale * b1_raw + shift),
        b2: scale * b2_raw + shift,
        mu: 0.0,
        scale,
        shift,
        gamma: (a2 - a1) / (b2_raw - b1_raw),
    };
    if !(spec.a > 0.0 && spec.a < spec.b1.min(spec.b2)) {
        return Err(Error::GapGeometry(format!(
            "normalized geometry degenerate: a = {}, b1 = {}, b2 = {}",
            spec.a, spec.b1, spec.b2
        )));
    }
    Ok(spec)
}

impl SpectrumSpec {
    /// Already-normalized symmetric inclusion `[-b, -a] ∪ [a, b]`.
    pub fn symmetric(a: f64, b: f64) -> Result<Self> {
        Self::asymmetric(a, b, b)
    }

    /// Already-normalized inclusion `[-b1, -a] ∪ [a, b2]`.
    pub fn asymmetric(a: f64, b1: f64, b2: f64) -> Result<Self> {
        normalize_spectrum(-b1, -a, a, b2, 0.0)
    }

    /// Tightest inclusion of a list of eigenvalues split at `mu`.
    pub fn from_eigenvalues(eigs: &[f64], mu: f64) -> Result<Self> {
        let below = eigs.iter().copied().filter(|&x| x < mu);
        let above = eigs.iter().copied().filter(|&x| x > mu);
        let a1 = below.clone().fold(f64::NEG_INFINITY, f64::max);
        let b1 = below.fold(f64::INFINITY, f64::min);
        let a2 = above.clone().fold(f64::INFINITY, f64::min);
        let b2 = above.fold(f64::NEG_INFINITY, f64::max);
        if !a1.is_finite() || !a2.is_finite() {
            return Err(Error::GapGeometry(format!(
                "eigenvalues must lie on both sides of mu = {mu}"
            )));
        }
        if eigs.contains(&mu) {
            return Err(Error::GapViolation { value: mu, mu });
        }
        // Single-point components get a tiny outer margin so b > a holds.
        let pad = |lo: f64, hi: f64| if lo == hi { 1e-12 * hi.abs().max(1.0) } else { 0.0 };
        normalize_spectrum(b1 - pad(b1, a1), a1, a2, b2 + pad(a2, b2), mu)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Outer radius of the symmetric inclusion, `max(b1, b2)`.
    pub fn b(&self) -> f64 {
        self.b1.max(self.b2)
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Relative gap of the original spectrum. Diagnostic only.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_symmetric(&self) -> bool {
        self.b1 == self.b2
    }

    /// Original eigenvalue -> normalized eigenvalue.
    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.shift
    }

    pub fn invert(&self, y: f64) -> f64 {
        (y - self.shift) / self.scale
    }

    /// Original-coordinate endpoints `(b1_raw, a1, a2, b2_raw)`.
    pub fn original_endpoints(&self) -> [f64; 4] {
        [
            self.invert(-self.b1),
            self.invert(-self.a),
            self.invert(self.a),
            self.invert(self.b2),
        ]
    }

    /// Flat `key = value` block; floats use shortest round-trip formatting.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        for (k, v) in [
            ("a", self.a),
            ("b", self.b()),
            ("b1", self.b1),
            ("b2", self.b2),
            ("mu", self.mu),
            ("scale", self.scale),
            ("shift", self.shift),
        ] {
            let _ = writeln!(s, "{k} = {v:?}");
        }
        s
    }

    /// Inverse of [`to_kv`](Self::to_kv). `b` is checked against `max(b1, b2)`.
    pub fn from_kv(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |key: &str| -> Result<f64> {
            let raw = map
                .get(key)
                .ok_or_else(|| Error::Config(format!("spectrum block is missing `{key}`")))?;
            raw.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("spectrum key `{key}`: {e}")))
        };
        let (a, b1, b2, mu, scale, shift) = (get("a")?, get("b1")?, get("b2")?, get("mu")?, get("scale")?, get("shift")?);
        if mu != 0.0 {
            return Err(Error::Config(format!("normalized spectrum must have mu = 0, got {mu}")));
        }
        if let Ok(b) = get("b") {
            if b != b1.max(b2) {
                return Err(Error::Config(format!("b = {b} disagrees with max(b1, b2) = {}", b1.max(b2))));
            }
        }
        if !(scale > 0.0) {
            return Err(Error::Config(format!("scale must be positive, got {scale}")));
        }
        if !(a > 0.0 && a < b1.min(b2)) {
            return Err(Error::GapGeometry(format!("need 0 < a < min(b1, b2), got a={a}, b1={b1}, b2={b2}")));
        }
        let raw_width = (b1 + b2) / scale;
        Ok(SpectrumSpec {
            a,
            b1,
            b2,
            mu,
            scale,
            shift,
            gamma: 2.0 * a / scale / raw_width,
        })
    }
}

/// Sorted distinct magnitudes `mu_1 < ... < mu_nu` of a spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueLadder {
    mags: Vec<f64>,
    mults: Vec<usize>,
    n_neg: usize,
    tol_cluster: f64,
}

/// Groups `|lambda|` into distinct magnitudes.
///
/// Sorted magnitudes whose spacing is at most `tol_cluster * max|lambda|`
/// are merged; each group is represented by its largest member.
pub fn distinct_magnitudes(eigenvalues: &[f64], tol_cluster: f64) -> Result<EigenvalueLadder> {
    if eigenvalues.is_empty() {
        return Err(Error::Dimension("empty eigenvalue list".into()));
    }
    if !(tol_cluster >= 0.0) {
        return Err(Error::Parameter(format!("tol_cluster must be >= 0, got {tol_cluster}")));
    }
    if let Some(&bad) = eigenvalues.iter().find(|x| !x.is_finite() || **x == 0.0) {
        return Err(Error::SpectrumViolation { value: bad, gap: 0.0 });
    }
    let mut mags: Vec<f64> = eigenvalues.iter().map(|x| x.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let top = *mags.last().unwrap();
    let merge_gap = tol_cluster * top;

    let mut out_mags: Vec<f64> = Vec::new();
    let mut mults: Vec<usize> = Vec::new();
    for &x in &mags {
        match out_mags.last_mut() {
            Some(last) if x - *last <= merge_gap => {
                *last = x;
                *mults.last_mut().unwrap() += 1;
            }
            _ => {
                out_mags.push(x);
                mults.push(1);
            }
        }
    }
    Ok(EigenvalueLadder {
        mags: out_mags,
        mults,
        n_neg: eigenvalues.iter().filter(|x| **x < 0.0).count(),
        tol_cluster,
    })
}

/// [`distinct_magnitudes`] plus a check that every `|lambda| >= a`.
pub fn distinct_magnitudes_in(eigenvalues: &[f64], tol_cluster: f64, spec: &SpectrumSpec) -> Result<EigenvalueLadder> {
    let floor = spec.a() * (1.0 - 1e-12);
    if let Some(&bad) = eigenvalues.iter().find(|x| x.abs() < floor) {
        return Err(Error::SpectrumViolation {
            value: bad,
            gap: spec.a(),
        });
    }
    distinct_magnitudes(eigenvalues, tol_cluster)
}

impl EigenvalueLadder {
    pub fn magnitudes(&self) -> &[f64] {
        &self.mags
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.mults
    }

    /// Number of distinct magnitudes, `nu`.
    pub fn nu(&self) -> usize {
        self.mags.len()
    }

    /// Count of negative eigenvalues.
    pub fn n_negative(&self) -> usize {
        self.n_neg
    }

    pub fn n(&self) -> usize {
        self.mults.iter().sum()
    }

    pub fn tol_cluster(&self) -> f64 {
        self.tol_cluster
    }

    pub fn smallest(&self) -> f64 {
        self.mags[0]
    }

    pub fn largest(&self) -> f64 {
        *self.mags.last().unwrap()
    }

    /// `b_ell = mu_{nu - ell}`: the outer radius after dropping the `ell`
    /// largest magnitudes. `None` for `ell >= nu`.
    pub fn b(&self, ell: usize) -> Option<f64> {
        let nu = self.nu();
        (ell < nu).then(|| self.mags[nu - 1 - ell])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-14 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn normalize_symmetric_fig1_gap() {
        let s = normalize_spectrum(-1.0, -0.3, 0.3, 1.0, 0.0).unwrap();
        assert_eq!((s.a(), s.b(), s.shift(), s.scale()), (0.3, 1.0, 0.0, 1.0));
        let s = normalize_spectrum(-2.0, -1.0, 1.0, 2.0, 0.0).unwrap();
        assert_eq!((s.a(), s.b(), s.shift()), (1.0, 2.0, 0.0));
    }

    #[test]
    fn normalize_shifted_gap() {
        let s = normalize_spectrum(0.0, 1.0, 3.0, 6.0, 2.0).unwrap();
        assert_eq!(s.shift(), -2.0);
        assert_eq!((s.a(), s.b1(), s.b2(), s.b()), (1.0, 2.0, 4.0, 4.0));
        assert_eq!(s.mu(), 0.0);
        assert!((s.gamma() - 2.0 / 6.0).abs() < 1e-15);
        let ends = s.original_endpoints();
        for (got, want) in ends.iter().zip([0.0, 1.0, 3.0, 6.0]) {
            assert!(close(*got, want));
        }
    }

    #[test]
    fn unit_radius_option() {
        let s = normalize_spectrum_with(0.0, 1.0, 3.0, 6.0, 2.0, NormalizeOptions { unit_outer_radius: true }).unwrap();
        assert!(close(s.b(), 1.0));
        assert!(close(s.a(), 0.25));
        for (x, y) in [(0.0, -s.b1()), (1.0, -s.a()), (3.0, s.a()), (6.0, s.b2())] {
            assert!(close(s.apply(x), y));
        }
    }

    #[test]
    fn normalize_errors() {
        assert!(matches!(normalize_spectrum(-1.0, 0.5, 0.5, 1.0, 0.5), Err(Error::VanishingGap(_))));
        assert!(matches!(normalize_spectrum(-1.0, 0.3, -0.3, 1.0, 0.0), Err(Error::GapGeometry(_))));
        assert!(matches!(normalize_spectrum(-1.0, -0.3, 0.3, 1.0, 0.5), Err(Error::GapGeometry(_))));
        assert!(matches!(normalize_spectrum(-0.2, -0.3, 0.3, 1.0, 0.0), Err(Error::GapGeometry(_))));
    }

    #[test]
    fn normalization_is_idempotent() {
        let s = normalize_spectrum(0.0, 1.0, 3.0, 6.0, 2.0).unwrap();
        let again = normalize_spectrum(-s.b1(), -s.a(), s.a(), s.b2(), 0.0).unwrap();
        assert_eq!((again.scale(), again.shift()), (1.0, 0.0));
        assert_eq!((again.a(), again.b1(), again.b2()), (s.a(), s.b1(), s.b2()));
    }

    #[test]
    fn kv_round_trip() {
        let s = normalize_spectrum(0.0, 1.0, 3.5, 6.0, 2.0).unwrap();
        let map: BTreeMap<String, String> = s
            .to_kv()
            .lines()
            .map(|l| {
                let (k, v) = l.split_once('=').unwrap();
                (k.trim().to_string(), v.trim().to_string())
            })
            .collect();
        let back = SpectrumSpec::from_kv(&map).unwrap();
        assert_eq!((back.a(), back.b1(), back.b2(), back.shift()), (s.a(), s.b1(), s.b2(), s.shift()));
    }

    #[test]
    fn from_eigenvalues_takes_tight_inclusion() {
        let s = SpectrumSpec::from_eigenvalues(&[-0.5, -0.1, 0.1, 0.7, 1.0], 0.0).unwrap();
        assert_eq!((s.a(), s.b1(), s.b2()), (0.1, 0.5, 1.0));
        assert!(SpectrumSpec::from_eigenvalues(&[0.2, 0.3], 0.0).is_err());
    }

    #[test]
    fn ladder_merges_duplicates() {
        let l = distinct_magnitudes(&[-1.0, -1.0, 0.5, -0.5, 0.3], 1e-10).unwrap();
        assert_eq!(l.magnitudes(), &[0.3, 0.5, 1.0]);
        assert_eq!(l.multiplicities(), &[1, 2, 2]);
        assert_eq!(l.nu(), 3);
        assert_eq!(l.n_negative(), 3);
        assert_eq!(l.n(), 5);
        assert_eq!(l.b(0), Some(1.0));
        assert_eq!(l.b(2), Some(0.3));
        assert_eq!(l.b(3), None);
    }

    #[test]
    fn ladder_merges_within_tolerance() {
        let l = distinct_magnitudes(&[0.3, 0.3 * (1.0 + 1e-14)], 1e-10).unwrap();
        assert_eq!(l.nu(), 1);
        assert_eq!(l.multiplicities(), &[2]);
    }

    #[test]
    fn ladder_for_one_isolated_eigenvalue() {
        let mut eigs = vec![-1.0; 10];
        let k = 50;
        for i in 0..k {
            let t = i as f64 / (k - 1) as f64;
            eigs.push(-0.5 + 0.4 * t);
            eigs.push(0.1 + 0.4 * t);
        }
        let l = distinct_magnitudes(&eigs, DEFAULT_TOL_CLUSTER).unwrap();
        assert_eq!(l.b(0), Some(1.0));
        assert!(close(l.b(1).unwrap(), 0.5));
        assert_eq!(l.multiplicities().last(), Some(&10));
    }

    #[test]
    fn ladder_rejects_gap_violations() {
        let s = SpectrumSpec::symmetric(0.3, 1.0).unwrap();
        assert!(matches!(
            distinct_magnitudes_in(&[0.5, -0.2], 1e-10, &s),
            Err(Error::SpectrumViolation { .. })
        ));
        assert!(distinct_magnitudes_in(&[0.5, -0.3 * (1.0 - 1e-14)], 1e-10, &s).is_ok());
    }

    proptest::proptest! {
        #[test]
        fn ladder_invariants(raw in proptest::collection::vec((0.01f64..10.0, proptest::bool::ANY), 1..60)) {
            let eigs: Vec<f64> = raw.iter().map(|(x, neg)| if *neg { -x } else { *x }).collect();
            let l = distinct_magnitudes(&eigs, 1e-10).unwrap();
            proptest::prop_assert_eq!(l.n(), eigs.len());
            proptest::prop_assert_eq!(l.b(0).unwrap(), l.largest());
            for w in l.magnitudes().windows(2) {
                proptest::prop_assert!(w[1] - w[0] > 1e-10 * l.largest());
            }
            for ell in 1..l.nu() {
                proptest::prop_assert!(l.b(ell).unwrap() < l.b(ell - 1).unwrap());
            }
        }

        #[test]
        fn affine_round_trip(lo in -5.0f64..-0.1, gap in 0.01f64..2.0, width in 0.01f64..4.0, x in -10.0f64..10.0) {
            let a1 = lo;
            let a2 = lo + gap;
            let s = normalize_spectrum(a1 - width, a1, a2, a2 + width, 0.5 * (a1 + a2)).unwrap();
            let y = s.invert(s.apply(x));
            proptest::prop_assert!((y - x).abs() <= 1e-14 * x.abs().max(1.0) * 8.0);
        }
    }
}
