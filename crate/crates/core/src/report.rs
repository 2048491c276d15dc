//! Threshold bandwidths per bound family and bound-violation checks.

use crate::bounds::{BoundCurve, Family};
use crate::projector::{truncation_bandwidth, TruncationErrors};

/// Report columns for bound-derived bandwidths, in CSV order.
pub const REPORT_FAMILIES: [(Family, &str); 4] = [
    (Family::B1Bbr, "m1"),
    (Family::B2Integral, "m2"),
    (Family::B3Tau, "m3"),
    (Family::BSl, "mSL"),
];

pub const REPORT_HEADER: &str = "epsilon,m1,m2,m3,mSL,mP,err_max,err_1,err_inf,err_2";

/// Absolute resolution of a computed projector of order `n`: entries below
/// this cannot be told apart from rounding noise.
pub fn noise_floor(n: usize) -> f64 {
    n as f64 * f64::EPSILON
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncationReport {
    pub epsilon: f64,
    /// Truncation bandwidth implied by each evaluated family; `None` when the
    /// curve never stays below `eps` on its range.
    pub m_bound: Vec<(Family, Option<usize>)>,
    /// `m_P(eps)` from the measured profile.
    pub m_exact: Option<usize>,
    /// Truncation error norms at `m_exact`.
    pub errors: Option<TruncationErrors>,
}

impl TruncationReport {
    pub fn bound(&self, family: Family) -> Option<usize> {
        self.m_bound.iter().find(|(f, _)| *f == family).and_then(|(_, m)| *m)
    }

    /// True when every bound-derived bandwidth is at least `m_exact`.
    pub fn dominance_consistent(&self) -> bool {
        match self.m_exact {
            None => true,
            Some(mp) => self.m_bound.iter().all(|(_, m)| m.is_none_or(|m| m >= mp)),
        }
    }

    pub fn csv_row(&self) -> String {
        let cell = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut cols = vec![format!("{:e}", self.epsilon)];
        for (fam, _) in REPORT_FAMILIES {
            cols.push(cell(self.bound(fam)));
        }
        cols.push(cell(self.m_exact));
        match &self.errors {
            Some(e) => cols.extend([e.max, e.one, e.inf, e.two_bound].map(crate::io::fmt_f64)),
            None => cols.extend(std::iter::repeat_n(String::new(), 4)),
        }
        cols.join(",")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub label: String,
    pub k: usize,
    pub measured: f64,
    pub bound: f64,
}

/// Points `k >= m` where the measured profile exceeds a capped projector bound
/// by more than `floor`.
pub fn find_violations(profile: &[f64], curve: &BoundCurve, m: usize, floor: f64) -> Vec<Violation> {
    if !curve.family.is_projector_bound() {
        return Vec::new();
    }
    curve
        .points
        .iter()
        .filter(|p| p.k >= m && p.k < profile.len())
        .filter(|p| profile[p.k] > p.capped + floor)
        .map(|p| Violation {
            label: curve.label.clone(),
            k: p.k,
            measured: profile[p.k],
            bound: p.capped,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub rows: Vec<TruncationReport>,
    pub violations: Vec<Violation>,
}

/// Builds one report row per `eps` and scans every projector curve for violations.
pub fn compare(
    profile: &[f64],
    curves: &[BoundCurve],
    eps: &[f64],
    m: usize,
    truncation: Option<&[TruncationErrors]>,
    floor: f64,
) -> Comparison {
    let rows = eps
        .iter()
        .map(|&e| {
            let m_bound = REPORT_FAMILIES
                .iter()
                .filter_map(|(fam, _)| {
                    let c = curves.iter().find(|c| c.family == *fam && c.label == fam.name())?;
                    Some((*fam, truncation_bandwidth(&c.capped(), e).ok()))
                })
                .collect();
            let m_exact = truncation_bandwidth(profile, e).ok();
            let errors = m_exact.and_then(|k| truncation.and_then(|t| t.get(k).copied()));
            TruncationReport {
                epsilon: e,
                m_bound,
                m_exact,
                errors,
            }
        })
        .collect();
    let violations = curves.iter().flat_map(|c| find_violations(profile, c, m, floor)).collect();
    Comparison { rows, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundPoint;

    fn curve(family: Family, vals: &[f64]) -> BoundCurve {
        BoundCurve {
            family,
            label: family.name().into(),
            params: vec![],
            points: vals
                .iter()
                .enumerate()
                .map(|(k, &v)| BoundPoint {
                    k,
                    raw: v,
                    capped: v.min(1.0),
                    param: None,
                })
                .collect(),
        }
    }

    #[test]
    fn report_rows_and_dominance() {
        let profile = [1.0, 0.3, 0.05, 0.01, 0.001];
        let b2 = curve(Family::B2Integral, &[2.0, 1.5, 0.4, 0.08, 0.02]);
        let cmp = compare(&profile, &[b2], &[0.1, 2.0], 1, None, 0.0);
        assert_eq!(cmp.rows[0].m_exact, Some(1));
        assert_eq!(cmp.rows[0].bound(Family::B2Integral), Some(2));
        assert!(cmp.rows[0].dominance_consistent());
        // eps above everything: all zero
        assert_eq!(cmp.rows[1].m_exact, Some(0));
        assert_eq!(cmp.rows[1].bound(Family::B2Integral), Some(0));
        assert!(cmp.violations.is_empty());
        assert_eq!(cmp.rows[0].csv_row(), "1e-1,,2,,,1,,,,");
    }

    #[test]
    fn violations_are_flagged_only_for_bounds_at_k_at_least_m() {
        let profile = [1.0, 0.3, 0.05];
        let tight = curve(Family::B1Bbr, &[0.1, 0.2, 0.06]);
        let v = find_violations(&profile, &tight, 1, 0.0);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].k, 1);
        let rate = curve(Family::RateHasson, &[0.0, 0.0, 0.0]);
        assert!(find_violations(&profile, &rate, 1, 0.0).is_empty());
        assert!(find_violations(&profile, &tight, 1, 0.2).is_empty());
    }
}
