//! End-to-end runs: build the matrix, measure the projector decay, evaluate
//! bound curves and write the CSV and summary files.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::bounds::{bound_curve, sl_curve_fixed, BoundContext, BoundCurve, Family};
use crate::config::{ExperimentConfig, Preset};
use crate::error::Result;
use crate::factory::{generate, BandedHermitian};
use crate::io;
use crate::projector::{
    decay_profile, projector_diagnostics, spectral_projector, truncation_error_2norm, truncation_errors, DecayProfile,
    DecaySource, ProjectorDiagnostics, TruncationErrors,
};
use crate::report::{compare, noise_floor, Comparison};
use crate::rng::{SeededRng, ALGORITHM};
use crate::spectrum::{distinct_magnitudes_in, EigenvalueLadder, SpectrumSpec};

const POWER_ITERATIONS: usize = 500;
const POWER_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct RunResult {
    pub eigenvalues: Vec<f64>,
    pub matrix: BandedHermitian,
    pub spectrum: SpectrumSpec,
    pub ladder: EigenvalueLadder,
    pub n_e: usize,
    pub diagnostics: ProjectorDiagnostics,
    pub profile: DecayProfile,
    pub truncation: Vec<TruncationErrors>,
    pub curves: Vec<BoundCurve>,
    pub comparison: Comparison,
    /// Power-iteration `||P - P^(m_P)||_2` per report row.
    pub exact_two_norms: Vec<Option<f64>>,
}

/// Bound context for a spectrum given in original coordinates.
pub fn bound_context(cfg: &ExperimentConfig, eigenvalues: &[f64]) -> Result<BoundContext> {
    let spec = match cfg.spectrum_spec {
        Some(s) => s,
        None => SpectrumSpec::from_eigenvalues(eigenvalues, cfg.mu)?,
    };
    let normalized: Vec<f64> = eigenvalues.iter().map(|&x| spec.apply(x)).collect();
    let mut ctx = BoundContext::new(spec, cfg.m);
    ctx.ladder = Some(distinct_magnitudes_in(&normalized, cfg.tol_cluster, &spec)?);
    ctx.eigenvalues = Some(eigenvalues.to_vec());
    ctx.k2 = cfg.k2;
    ctx.tol = cfg.tol;
    Ok(ctx)
}

/// Inverse-only context: the eigenvalues must be positive.
pub fn inverse_context(eigenvalues: &[f64], m: usize, tol_cluster: f64) -> Result<BoundContext> {
    let lo = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // placeholder geometry; inverse families only read the eigenvalues
    let spec = SpectrumSpec::symmetric(lo.abs().max(f64::MIN_POSITIVE), hi.abs().max(2.0 * lo.abs()) + 1.0)?;
    let mut ctx = BoundContext::new(spec, m);
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(f64::total_cmp);
    ctx.ladder = Some(crate::spectrum::distinct_magnitudes(&sorted, tol_cluster)?);
    ctx.eigenvalues = Some(sorted);
    Ok(ctx)
}

/// Family curves followed by the fixed-`ell` curves that fit the ladder.
pub fn curves(ctx: &BoundContext, families: &[Family], sl_ells: &[usize], kmax: usize) -> Result<Vec<BoundCurve>> {
    let mut out = Vec::with_capacity(families.len() + sl_ells.len());
    for &f in families {
        out.push(bound_curve(f, ctx, kmax)?);
    }
    let nu = ctx.ladder.as_ref().map_or(0, EigenvalueLadder::nu);
    for &ell in sl_ells.iter().filter(|&&l| l < nu) {
        out.push(sl_curve_fixed(ctx, ell, kmax)?);
    }
    Ok(out)
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunResult> {
    cfg.validate()?;
    let eigenvalues = cfg.spectrum.eigenvalues(cfg.n)?;
    let mut rng = SeededRng::new(cfg.seed);
    let matrix = generate(&eigenvalues, cfg.m, &mut rng)?;
    let proj = spectral_projector(&matrix, cfg.mu)?;
    let diagnostics = projector_diagnostics(&proj.p);
    let profile = decay_profile(&proj.p, DecaySource::Projector);
    let truncation = truncation_errors(&proj.p);

    let ctx = bound_context(cfg, &eigenvalues)?;
    let curves = curves(&ctx, &cfg.families, &cfg.sl_ells, cfg.kmax())?;
    let comparison = compare(
        &profile.curve,
        &curves,
        &cfg.eps,
        cfg.m,
        Some(&truncation),
        noise_floor(cfg.n),
    );
    let exact_two_norms = comparison
        .rows
        .iter()
        .map(|r| r.m_exact.map(|k| truncation_error_2norm(&proj.p, k, POWER_ITERATIONS, POWER_TOL)))
        .collect();
    Ok(RunResult {
        eigenvalues,
        spectrum: ctx.spectrum,
        ladder: ctx.ladder.expect("set by bound_context"),
        matrix,
        n_e: proj.n_e,
        diagnostics,
        profile,
        truncation,
        curves,
        comparison,
        exact_two_norms,
    })
}

/// Report file name: `table1.csv` for the table preset, `report.csv` otherwise.
pub fn report_file_name(cfg: &ExperimentConfig) -> &'static str {
    if cfg.preset == Some(Preset::Table1) {
        "table1.csv"
    } else {
        "report.csv"
    }
}

/// Writes every output file under `cfg.out` and returns their paths.
pub fn write_outputs(cfg: &ExperimentConfig, res: &RunResult) -> Result<Vec<PathBuf>> {
    let dir = &cfg.out;
    let mut files = Vec::new();
    let mut put = |name: String, text: String| -> Result<()> {
        let p = dir.join(name);
        io::write_file(&p, &text)?;
        files.push(p);
        Ok(())
    };
    put("decay.csv".into(), io::decay_csv(&res.profile))?;
    put("truncation.csv".into(), io::truncation_csv(&res.truncation))?;
    for c in &res.curves {
        put(format!("bound_{}.csv", c.label), io::curve_csv(c))?;
    }
    put(report_file_name(cfg).into(), io::report_csv(&res.comparison.rows))?;
    put("plot.csv".into(), io::plot_csv(&res.profile.curve, &res.curves))?;
    put("summary.txt".into(), summary(cfg, res))?;
    Ok(files)
}

/// Plain-text digest of a run; contains no timings so reruns are byte-identical.
pub fn summary(cfg: &ExperimentConfig, res: &RunResult) -> String {
    let f = io::fmt_f64;
    let s_ = &res.spectrum;
    let mut s = String::new();
    let _ = writeln!(s, "name = {}", cfg.name);
    if let Some(p) = cfg.preset {
        let _ = writeln!(s, "preset = {p}");
    }
    let _ = writeln!(s, "n = {}\nm = {}\nseed = {}\nrng = {ALGORITHM}", cfg.n, cfg.m, cfg.seed);
    let _ = writeln!(s, "spectrum_recipe = {}\nmu = {}", cfg.spectrum.name(), f(cfg.mu));
    let _ = writeln!(
        s,
        "a = {}\nb1 = {}\nb2 = {}\nnu = {}\nk2 = {}",
        f(s_.a()),
        f(s_.b1()),
        f(s_.b2()),
        res.ladder.nu(),
        cfg.k2.name()
    );
    let _ = writeln!(
        s,
        "bandwidth = {}\ntruncated_magnitude = {}",
        res.matrix.bandwidth(),
        f(res.matrix.truncated_magnitude())
    );
    let d = &res.diagnostics;
    let _ = writeln!(
        s,
        "n_e = {}\ntrace = {}\nidempotency_fro = {}\nasymmetry_max = {}",
        res.n_e,
        f(d.trace),
        f(d.idempotency),
        f(d.asymmetry)
    );
    for c in &res.curves {
        let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={}", f(*v))).collect();
        let _ = writeln!(s, "curve {} {}", c.label, params.join(" "));
    }
    for (row, two) in res.comparison.rows.iter().zip(&res.exact_two_norms) {
        let _ = writeln!(
            s,
            "eps {:e}: m_P = {} err_2 = {} dominance = {}",
            row.epsilon,
            row.m_exact.map_or("-".to_string(), |v| v.to_string()),
            two.map_or("-".to_string(), f),
            row.dominance_consistent()
        );
    }
    let _ = writeln!(
        s,
        "noise_floor = {}\nviolations = {}",
        f(noise_floor(cfg.n)),
        res.comparison.violations.len()
    );
    for v in &res.comparison.violations {
        let _ = writeln!(
            s,
            "violation {} k={} measured={} bound={}",
            v.label,
            v.k,
            f(v.measured),
            f(v.bound)
        );
    }
    let _ = write!(s, "\n[spectrum_spec]\n{}", s_.to_kv());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;

    fn small(p: Preset, n: usize) -> ExperimentConfig {
        let mut c = ExperimentConfig::preset(p);
        c.n = n;
        c
    }

    #[test]
    fn fig3_pipeline_has_no_violations() {
        let mut cfg = small(Preset::Fig3, 60);
        cfg.sl_ells = vec![0, 1, 2];
        let res = run(&cfg).unwrap();
        assert_eq!(res.n_e, 30);
        assert_eq!(res.ladder.nu(), 30);
        assert!(res.comparison.violations.is_empty(), "{:?}", res.comparison.violations);
        let labels: Vec<&str> = res.curves.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["b2", "sl", "sl_l0", "sl_l1", "sl_l2"]);
        assert_eq!(res.comparison.rows.len(), 5);
    }

    #[test]
    fn outputs_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small(Preset::Fig4, 40);
        cfg.out = dir.path().join("a");
        let files_a = write_outputs(&cfg, &run(&cfg).unwrap()).unwrap();
        cfg.out = dir.path().join("b");
        let files_b = write_outputs(&cfg, &run(&cfg).unwrap()).unwrap();
        assert_eq!(files_a.len(), files_b.len());
        for (a, b) in files_a.iter().zip(&files_b) {
            assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), "{a:?}");
        }
        let names: Vec<String> = files_a
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert!(names.contains(&"bound_fuchs.csv".to_string()));
        assert!(names.contains(&"report.csv".to_string()));
    }

    #[test]
    fn inverse_context_reads_eigenvalues() {
        let ctx = inverse_context(&[3.0, 1.0, 2.0], 1, 0.0).unwrap();
        assert_eq!(ctx.eigenvalues.as_deref(), Some(&[1.0, 2.0, 3.0][..]));
        let c = bound_curve(Family::InvDemko, &ctx, 3).unwrap();
        assert_eq!(c.points[0].raw, 1.0);
    }
}
