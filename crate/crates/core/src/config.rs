//! Experiment configuration: a sectioned `key = value` file (TOML syntax)
//! and the named presets it can start from.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::bounds::proj::K2Variant;
use crate::bounds::Family;
use crate::error::{Error, Result};
use crate::quadrature::DEFAULT_TOL;
use crate::spectrum::{SpectrumSpec, DEFAULT_TOL_CLUSTER};

pub const DEFAULT_EPS: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// n = 2000, m = 20, equispaced on `[-1, -0.3] ∪ [0.3, 1]`.
    Fig1,
    /// n = 2000, m = 20, `-1` ten times plus equispaced on `[-0.5, -0.1] ∪ [0.1, 0.5]`.
    Fig2,
    /// n = 300, tridiagonal, symmetric spectrum clustered at the gap.
    Fig3,
    /// n = 300, tridiagonal, equispaced on `[-0.5, -0.1] ∪ [0.1, 1]`.
    Fig4,
    /// n = 300, tridiagonal, alternating-sign spectrum clustered at the gap.
    Fig5,
    /// The fig1 matrix with the threshold-bandwidth table as main output.
    Table1,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig1,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Table1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Table1 => "table1",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown preset {s:?}")))
    }
}

/// Clustered magnitude profile `1 + 0.9 (1 - t - 2 sqrt(1 - t))`, rising from
/// 0.1 at `t = 0` to 1 at `t = 1` with most points near 0.1.
pub fn clustered_magnitude(t: f64) -> f64 {
    let s = 1.0 - t;
    1.0 + 0.9 * (s - 2.0 * s.sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumRecipe {
    Explicit(Vec<f64>),
    File(PathBuf),
    /// Equispaced points on each interval (endpoints included) plus isolated
    /// `(value, multiplicity)` pairs. Without `counts` the remaining `n` is
    /// split evenly, earlier intervals taking the remainder.
    Intervals {
        intervals: Vec<[f64; 2]>,
        counts: Option<Vec<usize>>,
        isolated: Vec<(f64, usize)>,
    },
    /// `±clustered_magnitude((i - 1)/(n/2 - 1))` for `i = 1..=n/2`.
    ClusteredSymmetric,
    /// `(-1)^i clustered_magnitude((i - 1)/(n - 1))` for `i = 1..=n`.
    ClusteredAlternating,
}

impl SpectrumRecipe {
    pub fn name(&self) -> &'static str {
        match self {
            SpectrumRecipe::Explicit(_) => "explicit",
            SpectrumRecipe::File(_) => "file",
            SpectrumRecipe::Intervals { .. } => "intervals",
            SpectrumRecipe::ClusteredSymmetric => "clustered_symmetric",
            SpectrumRecipe::ClusteredAlternating => "clustered_alternating",
        }
    }

    /// Eigenvalues for a matrix of order `n`, sorted ascending.
    pub fn eigenvalues(&self, n: usize) -> Result<Vec<f64>> {
        let mut out = match self {
            SpectrumRecipe::Explicit(v) => v.clone(),
            SpectrumRecipe::File(p) => crate::io::read_eigenvalues(p)?,
            SpectrumRecipe::Intervals {
                intervals,
                counts,
                isolated,
            } => interval_points(n, intervals, counts.as_deref(), isolated)?,
            SpectrumRecipe::ClusteredSymmetric => {
                if n < 4 || !n.is_multiple_of(2) {
                    return Err(Error::Config(format!("clustered_symmetric needs an even n >= 4, got {n}")));
                }
                let half = n / 2;
                (0..half)
                    .flat_map(|i| {
                        let v = clustered_magnitude(i as f64 / (half - 1) as f64);
                        [v, -v]
                    })
                    .collect()
            }
            SpectrumRecipe::ClusteredAlternating => {
                if n < 2 {
                    return Err(Error::Config(format!("clustered_alternating needs n >= 2, got {n}")));
                }
                (1..=n)
                    .map(|i| {
                        let v = clustered_magnitude((i - 1) as f64 / (n - 1) as f64);
                        if i % 2 == 0 {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            }
        };
        if out.len() != n {
            return Err(Error::Config(format!("spectrum has {} values but n = {n}", out.len())));
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("spectrum contains a non-finite value".into()));
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }
}

fn interval_points(
    n: usize,
    intervals: &[[f64; 2]],
    counts: Option<&[usize]>,
    isolated: &[(f64, usize)],
) -> Result<Vec<f64>> {
    if intervals.is_empty() {
        return Err(Error::Config("intervals recipe needs at least one interval".into()));
    }
    for [lo, hi] in intervals {
        if !(lo <= hi) {
            return Err(Error::Config(format!("interval [{lo}, {hi}] is reversed")));
        }
    }
    let fixed: usize = isolated.iter().map(|&(_, k)| k).sum();
    let rest = n
        .checked_sub(fixed)
        .ok_or_else(|| Error::Config(format!("isolated values need {fixed} slots but n = {n}")))?;
    let counts = match counts {
        Some(c) => {
            if c.len() != intervals.len() {
                return Err(Error::Config(format!(
                    "{} counts given for {} intervals",
                    c.len(),
                    intervals.len()
                )));
            }
            if c.iter().sum::<usize>() != rest {
                return Err(Error::Config(format!(
                    "interval counts sum to {} but {rest} values are needed",
                    c.iter().sum::<usize>()
                )));
            }
            c.to_vec()
        }
        None => {
            let k = intervals.len();
            (0..k).map(|i| rest / k + usize::from(i < rest % k)).collect()
        }
    };
    let mut out = Vec::with_capacity(n);
    for &(v, mult) in isolated {
        out.extend(std::iter::repeat_n(v, mult));
    }
    for ([lo, hi], c) in intervals.iter().zip(counts) {
        out.extend((0..c).map(|j| match j {
            0 => *lo,
            j if j + 1 == c => *hi,
            j => lo + (hi - lo) * j as f64 / (c - 1) as f64,
        }));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub preset: Option<Preset>,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub spectrum: SpectrumRecipe,
    pub mu: f64,
    pub tol_cluster: f64,
    /// Inclusion used by the bounds instead of the one implied by the eigenvalues.
    pub spectrum_spec: Option<SpectrumSpec>,
    pub families: Vec<Family>,
    /// Fixed `ell` values for extra `sl` curves.
    pub sl_ells: Vec<usize>,
    /// Defaults to `n - 1`.
    pub kmax: Option<usize>,
    pub tol: f64,
    pub k2: K2Variant,
    pub eps: Vec<f64>,
}

impl ExperimentConfig {
    pub fn preset(p: Preset) -> Self {
        use Family::*;
        let sym_intervals = |lo: f64, hi: f64| vec![[-hi, -lo], [lo, hi]];
        let (n, m, spectrum, families, sl_ells) = match p {
            Preset::Fig1 | Preset::Table1 => (
                2000,
                20,
                SpectrumRecipe::Intervals {
                    intervals: sym_intervals(0.3, 1.0),
                    counts: None,
                    isolated: vec![],
                },
                if p == Preset::Fig1 {
                    vec![B1Bbr, B2Integral, B3Tau, BQuadrature, BSl]
                } else {
                    vec![B1Bbr, B2Integral, B3Tau, BSl]
                },
                vec![],
            ),
            Preset::Fig2 => (
                2000,
                20,
                SpectrumRecipe::Intervals {
                    intervals: sym_intervals(0.1, 0.5),
                    counts: None,
                    isolated: vec![(-1.0, 10)],
                },
                vec![B2Integral, BSl],
                vec![0, 1],
            ),
            Preset::Fig3 => (300, 1, SpectrumRecipe::ClusteredSymmetric, vec![B2Integral, BSl], (0..=50).collect()),
            Preset::Fig4 => (
                300,
                1,
                SpectrumRecipe::Intervals {
                    intervals: vec![[-0.5, -0.1], [0.1, 1.0]],
                    counts: None,
                    isolated: vec![],
                },
                vec![B2Integral, B3Tau, RateHasson, RateFuchs],
                vec![],
            ),
            Preset::Fig5 => (300, 1, SpectrumRecipe::ClusteredAlternating, vec![B2Integral, BSl], (0..=50).collect()),
        };
        ExperimentConfig {
            name: p.name().to_string(),
            preset: Some(p),
            n,
            m,
            seed: DEFAULT_SEED,
            out: Path::new("out").join(p.name()),
            spectrum,
            mu: 0.0,
            tol_cluster: DEFAULT_TOL_CLUSTER,
            spectrum_spec: None,
            families,
            sl_ells,
            kmax: None,
            tol: DEFAULT_TOL,
            k2: K2Variant::default(),
            eps: DEFAULT_EPS.to_vec(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = crate::io::read_file(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::parse(path, msg),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        raw.resolve()
    }

    pub fn kmax(&self) -> usize {
        self.kmax.unwrap_or(self.n.saturating_sub(1)).min(self.n.saturating_sub(1))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if self.m == 0 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        if self.families.is_empty() {
            return Err(Error::Config("no bound families selected".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if !(self.tol_cluster >= 0.0) {
            return Err(Error::Config(format!("tol_cluster must be >= 0, got {}", self.tol_cluster)));
        }
        if !self.mu.is_finite() {
            return Err(Error::Config("mu must be finite".into()));
        }
        if let Some(e) = self.eps.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(Error::Config(format!("eps values must be positive, got {e}")));
        }
        Ok(())
    }
}

/// Parses a comma-separated list of numbers.
pub fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::Config(format!("bad {what} value {p:?}"))))
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    experiment: RawExperiment,
    spectrum: Option<RawSpectrum>,
    spectrum_spec: Option<BTreeMap<String, toml::Value>>,
    bounds: Option<RawBounds>,
    report: Option<RawReport>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    name: Option<String>,
    preset: Option<String>,
    n: Option<usize>,
    m: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    recipe: Option<String>,
    intervals: Option<Vec<[f64; 2]>>,
    counts: Option<Vec<usize>>,
    isolated: Option<Vec<(f64, usize)>>,
    eigenvalues: Option<Vec<f64>>,
    eigenvalues_file: Option<PathBuf>,
    mu: Option<f64>,
    tol_cluster: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBounds {
    families: Option<Vec<String>>,
    kmax: Option<usize>,
    tol: Option<f64>,
    k2: Option<String>,
    sl_ells: Option<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReport {
    eps: Option<Vec<f64>>,
}

impl RawSpectrum {
    fn recipe(&self) -> Result<Option<SpectrumRecipe>> {
        let interval_keys = self.intervals.is_some() || self.counts.is_some() || self.isolated.is_some();
        let name = match (&self.recipe, &self.eigenvalues, &self.eigenvalues_file) {
            (Some(r), _, _) => r.as_str(),
            (None, Some(_), None) => "explicit",
            (None, None, Some(_)) => "file",
            (None, Some(_), Some(_)) => {
                return Err(Error::Config("give either eigenvalues or eigenvalues_file, not both".into()))
            }
            (None, None, None) if interval_keys => "intervals",
            (None, None, None) => return Ok(None),
        };
        let unused = |key: &str, present: bool| -> Result<()> {
            if present {
                Err(Error::Config(format!("`{key}` does not apply to recipe {name}")))
            } else {
                Ok(())
            }
        };
        let recipe = match name {
            "explicit" => {
                unused("intervals/counts/isolated", interval_keys)?;
                unused("eigenvalues_file", self.eigenvalues_file.is_some())?;
                SpectrumRecipe::Explicit(
                    self.eigenvalues
                        .clone()
                        .ok_or_else(|| Error::Config("recipe explicit needs `eigenvalues`".into()))?,
                )
            }
            "file" => {
                unused("intervals/counts/isolated", interval_keys)?;
                unused("eigenvalues", self.eigenvalues.is_some())?;
                SpectrumRecipe::File(
                    self.eigenvalues_file
                        .clone()
                        .ok_or_else(|| Error::Config("recipe file needs `eigenvalues_file`".into()))?,
                )
            }
            "intervals" => {
                unused("eigenvalues", self.eigenvalues.is_some() || self.eigenvalues_file.is_some())?;
                SpectrumRecipe::Intervals {
                    intervals: self
                        .intervals
                        .clone()
                        .ok_or_else(|| Error::Config("recipe intervals needs `intervals`".into()))?,
                    counts: self.counts.clone(),
                    isolated: self.isolated.clone().unwrap_or_default(),
                }
            }
            "clustered_symmetric" | "clustered_alternating" => {
                unused(
                    "eigenvalue and interval keys",
                    interval_keys || self.eigenvalues.is_some() || self.eigenvalues_file.is_some(),
                )?;
                if name == "clustered_symmetric" {
                    SpectrumRecipe::ClusteredSymmetric
                } else {
                    SpectrumRecipe::ClusteredAlternating
                }
            }
            other => return Err(Error::Config(format!("unknown spectrum recipe {other:?}"))),
        };
        Ok(Some(recipe))
    }
}

impl RawConfig {
    fn resolve(self) -> Result<ExperimentConfig> {
        let ex = self.experiment;
        let preset = ex.preset.as_deref().map(str::parse).transpose()?;
        let recipe = self.spectrum.as_ref().map(RawSpectrum::recipe).transpose()?.flatten();
        let mut cfg = match (preset, recipe) {
            (Some(p), None) => ExperimentConfig::preset(p),
            (Some(p), Some(_)) => {
                return Err(Error::Config(format!(
                    "preset {p} fixes the spectrum; drop the [spectrum] recipe keys"
                )))
            }
            (None, Some(recipe)) => {
                let n = match (&recipe, ex.n) {
                    (SpectrumRecipe::Explicit(v), None) => v.len(),
                    (_, Some(n)) => n,
                    (_, None) => return Err(Error::Config("experiment.n is required for this recipe".into())),
                };
                let mut c = ExperimentConfig::preset(Preset::Fig1);
                c.preset = None;
                c.name = "experiment".into();
                c.out = PathBuf::from("out").join("experiment");
                c.n = n;
                c.m = ex.m.ok_or_else(|| Error::Config("experiment.m is required".into()))?;
                c.spectrum = recipe;
                c.families = vec![Family::B1Bbr, Family::B2Integral, Family::B3Tau, Family::BSl];
                c
            }
            (None, None) => return Err(Error::Config("set experiment.preset or a [spectrum] recipe".into())),
        };
        if let Some(name) = ex.name {
            cfg.out = PathBuf::from("out").join(&name);
            cfg.name = name;
        }
        if let Some(v) = ex.n {
            cfg.n = v;
        }
        if let Some(v) = ex.m {
            cfg.m = v;
        }
        if let Some(v) = ex.seed {
            cfg.seed = v;
        }
        if let Some(v) = ex.out {
            cfg.out = v;
        }
        if let Some(s) = &self.spectrum {
            if let Some(v) = s.mu {
                cfg.mu = v;
            }
            if let Some(v) = s.tol_cluster {
                cfg.tol_cluster = v;
            }
        }
        if let Some(map) = self.spectrum_spec {
            let flat = map
                .into_iter()
                .map(|(k, v)| {
                    let s = match v {
                        toml::Value::Float(f) => format!("{f:?}"),
                        toml::Value::Integer(i) => i.to_string(),
                        other => return Err(Error::Config(format!("spectrum_spec.{k} must be a number, got {other}"))),
                    };
                    Ok((k, s))
                })
                .collect::<Result<BTreeMap<_, _>>>()?;
            if let Some(k) = flat.keys().find(|k| !["a", "b", "b1", "b2", "mu", "scale", "shift"].contains(&k.as_str())) {
                return Err(Error::Config(format!("unknown key spectrum_spec.{k}")));
            }
            cfg.spectrum_spec = Some(SpectrumSpec::from_kv(&flat)?);
        }
        if let Some(b) = self.bounds {
            if let Some(f) = b.families {
                cfg.families = Family::parse_list(&f.join(","))?;
            }
            if let Some(v) = b.kmax {
                cfg.kmax = Some(v);
            }
            if let Some(v) = b.tol {
                cfg.tol = v;
            }
            if let Some(v) = b.k2 {
                cfg.k2 = K2Variant::parse(&v)?;
            }
            if let Some(v) = b.sl_ells {
                cfg.sl_ells = v;
            }
        }
        if let Some(eps) = self.report.and_then(|r| r.eps) {
            cfg.eps = eps;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_expand_to_their_spectra() {
        let c = ExperimentConfig::preset(Preset::Fig1);
        let e = c.spectrum.eigenvalues(c.n).unwrap();
        assert_eq!((c.n, c.m, e.len()), (2000, 20, 2000));
        assert_eq!(e.iter().filter(|&&x| x < 0.0).count(), 1000);
        assert_eq!((e[0], e[999], e[1000], e[1999]), (-1.0, -0.3, 0.3, 1.0));

        let c = ExperimentConfig::preset(Preset::Fig2);
        let e = c.spectrum.eigenvalues(c.n).unwrap();
        assert_eq!(e.iter().filter(|&&x| x == -1.0).count(), 10);
        assert!(e[10..].iter().all(|x| (0.1..=0.5).contains(&x.abs())));

        let c = ExperimentConfig::preset(Preset::Fig3);
        let e = c.spectrum.eigenvalues(c.n).unwrap();
        assert_eq!((c.n, c.m), (300, 1));
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[299] - 1.0).abs() < 1e-15);
        assert!((e[149] + 0.1).abs() < 1e-15 && (e[150] - 0.1).abs() < 1e-15);
        for i in 0..150 {
            assert_eq!(e[i], -e[299 - i]);
        }

        let c = ExperimentConfig::preset(Preset::Fig5);
        let e = c.spectrum.eigenvalues(300).unwrap();
        assert_eq!(e.iter().filter(|&&x| x < 0.0).count(), 150);
        assert!((e[0] + clustered_magnitude(298.0 / 299.0)).abs() < 1e-15);
        assert!((e[299] - 1.0).abs() < 1e-15);

        let c = ExperimentConfig::preset(Preset::Fig4);
        let e = c.spectrum.eigenvalues(c.n).unwrap();
        assert_eq!((e[0], e[299]), (-0.5, 1.0));
    }

    #[test]
    fn presets_scale_with_n() {
        let c = ExperimentConfig::preset(Preset::Fig1);
        let e = c.spectrum.eigenvalues(600).unwrap();
        assert_eq!(e.iter().filter(|&&x| x < 0.0).count(), 300);
        assert!(ExperimentConfig::preset(Preset::Fig3).spectrum.eigenvalues(301).is_err());
    }

    #[test]
    fn parse_full_file() {
        let text = r#"
[experiment]
name = "small"
n = 6
m = 2
seed = 9

[spectrum]
intervals = [[-1, -0.5], [0.5, 1.0]]
counts = [2, 2]
isolated = [[2.0, 2]]
mu = 0.0

[spectrum_spec]
a = 0.5
b1 = 1
b2 = 2.0
mu = 0
scale = 1
shift = 0

[bounds]
families = ["b2", "sl"]
kmax = 4
k2 = "printed"
sl_ells = [0, 1]

[report]
eps = [1e-2, 1e-3]
"#;
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.name, "small");
        assert_eq!(c.out, PathBuf::from("out/small"));
        assert_eq!((c.n, c.m, c.seed), (6, 2, 9));
        assert_eq!(c.spectrum.eigenvalues(6).unwrap(), vec![-1.0, -0.5, 0.5, 1.0, 2.0, 2.0]);
        assert_eq!(c.families, vec![Family::B2Integral, Family::BSl]);
        assert_eq!(c.k2, K2Variant::Printed);
        assert_eq!(c.kmax(), 4);
        assert_eq!(c.eps, vec![1e-2, 1e-3]);
        assert_eq!(c.spectrum_spec.unwrap().b2(), 2.0);
    }

    #[test]
    fn preset_with_overrides_and_explicit_n() {
        let c = ExperimentConfig::parse("[experiment]\npreset = \"fig1\"\nn = 600\nseed = 4\n").unwrap();
        assert_eq!((c.n, c.m, c.seed, c.preset), (600, 20, 4, Some(Preset::Fig1)));
        let c = ExperimentConfig::parse("[experiment]\nm = 1\n[spectrum]\neigenvalues = [-1, 1]\n").unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.spectrum, SpectrumRecipe::Explicit(vec![-1.0, 1.0]));
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "[experiment]\npreset = \"fig9\"\n",
            "[experiment]\npreset = \"fig1\"\ncolour = 1\n",
            "[experiment]\npreset = \"fig1\"\n[spectrum]\neigenvalues = [1]\n",
            "[experiment]\nm = 1\n[spectrum]\nintervals = [[-1, -0.5], [0.5, 1]]\n",
            "[experiment]\nn = 4\nm = 0\n[spectrum]\nintervals = [[-1, -0.5]]\n",
            "[experiment]\npreset = \"fig1\"\n[bounds]\nfamilies = [\"b7\"]\n",
            "[experiment]\npreset = \"fig1\"\n[report]\neps = [0.1, -1]\n",
            "[experiment]\npreset = \"fig1\"\n[spectrum_spec]\na = 0.3\n",
            "[experiment]\nm = 1\n[spectrum]\nrecipe = \"clustered_symmetric\"\neigenvalues = [1]\n",
            "[experiment]\n",
            "not toml at all [",
        ] {
            assert!(matches!(ExperimentConfig::parse(text), Err(Error::Config(_))), "{text}");
        }
        let c = ExperimentConfig::parse("[experiment]\nn = 4\nm = 1\n[spectrum]\nintervals = [[-1, -0.5]]\ncounts = [3]\n");
        assert!(c.is_ok(), "count check happens at expansion time");
        assert!(c.unwrap().spectrum.eigenvalues(4).is_err());
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list::<f64>("1e-1, 1e-2,", "eps").unwrap(), vec![0.1, 0.01]);
        assert!(parse_list::<usize>("1,x", "ell").is_err());
    }
}
