use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gapline::bounds::proj::K2Variant;
use gapline::bounds::{BoundContext, Family};
use gapline::config::{parse_list, ExperimentConfig, Preset, SpectrumRecipe};
use gapline::experiment::{self, bound_context, curves, inverse_context};
use gapline::factory::eigen_residuals;
use gapline::projector::{
    decay_profile, projector_diagnostics, sign_from_projector, spectral_projector, truncation_errors, DecaySource,
};
use gapline::report::{compare, noise_floor, Violation};
use gapline::{generate, io, Error, SeededRng, SpectrumSpec};

const LARGE_N: usize = 3000;

const EXIT_VALIDATION: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(name = "gapline", version, about = "Decay bounds for spectral projectors of banded symmetric matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a banded matrix with a prescribed spectrum
    Generate(GenerateArgs),
    /// Measure the entry decay of the projector of a matrix file
    Analyze(AnalyzeArgs),
    /// Evaluate bound curves for a spectrum
    Bounds(BoundsArgs),
    /// Compare a decay profile with bound curves
    Compare(CompareArgs),
    /// Run a full preset experiment
    Reproduce(ReproduceArgs),
}

/// Where the spectrum comes from; at most one source.
#[derive(Args, Default)]
struct SpectrumSource {
    /// Start from a named preset
    #[arg(long, value_parser = parse_preset)]
    preset: Option<Preset>,
    /// Experiment config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Eigenvalue file, one value per line
    #[arg(long)]
    eigs: Option<PathBuf>,
    /// Comma-separated eigenvalues
    #[arg(long, allow_hyphen_values = true)]
    eigenvalues: Option<String>,
}

#[derive(Args, Default)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Split point between occupied and empty eigenvalues
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Permit n > 3000
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args, Default)]
struct BoundOpts {
    /// Quadrature tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated families: b1,b2,b3,quad,sl,demko,frommer,refined,hasson,fuchs
    #[arg(long)]
    families: Option<String>,
    /// Largest diagonal offset k
    #[arg(long)]
    kmax: Option<usize>,
    /// K2 constant of the b3 bound: proof or printed
    #[arg(long)]
    k2: Option<String>,
    /// Comma-separated fixed ell values for extra sl curves
    #[arg(long)]
    sl_ells: Option<String>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: SpectrumSource,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceKind {
    Projector,
    Sign,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Matrix file written by `generate`
    matrix: PathBuf,
    #[arg(long, value_enum, default_value = "projector")]
    source: SourceKind,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    source: SpectrumSource,
    /// Gap half-width of a normalized spectrum (instead of eigenvalues)
    #[arg(long)]
    a: Option<f64>,
    /// Outer radius of a symmetric normalized spectrum
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    b1: Option<f64>,
    #[arg(long)]
    b2: Option<f64>,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    opts: BoundOpts,
}

#[derive(Args)]
struct CompareArgs {
    /// Decay CSV written by `analyze`
    decay: PathBuf,
    /// Bound CSVs: bound_<family>.csv or family=path
    #[arg(required = true)]
    bounds: Vec<String>,
    /// Bandwidth of the analyzed matrix
    #[arg(long)]
    m: usize,
    /// Comma-separated thresholds
    #[arg(long, default_value = "1e-1,1e-2,1e-3,1e-4,1e-5")]
    eps: String,
    /// Truncation CSV written by `analyze`, for the error columns
    #[arg(long)]
    truncation: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(value_parser = parse_preset)]
    preset: Preset,
    /// Config file whose settings sit between the preset and the flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    opts: BoundOpts,
    /// Comma-separated thresholds
    #[arg(long)]
    eps: Option<String>,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Err(Error),
    Violations(Vec<Violation>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Err(e)
    }
}

type CliResult = std::result::Result<(), Failure>;

fn timed<T>(label: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    eprintln!("[time] {label}: {:.3}s", t.elapsed().as_secs_f64());
    out
}

fn apply_common(cfg: &mut ExperimentConfig, c: &Common) -> gapline::Result<()> {
    if let Some(v) = c.seed {
        cfg.seed = v;
    }
    if let Some(v) = &c.out {
        cfg.out = v.clone();
    }
    if let Some(v) = c.n {
        cfg.n = v;
    }
    if let Some(v) = c.m {
        cfg.m = v;
    }
    if let Some(v) = c.mu {
        cfg.mu = v;
    }
    check_size(cfg.n, c.allow_large)
}

fn apply_bound_opts(cfg: &mut ExperimentConfig, o: &BoundOpts) -> gapline::Result<()> {
    if let Some(v) = o.tol {
        cfg.tol = v;
    }
    if let Some(v) = &o.families {
        cfg.families = Family::parse_list(v)?;
    }
    if let Some(v) = o.kmax {
        cfg.kmax = Some(v);
    }
    if let Some(v) = &o.k2 {
        cfg.k2 = K2Variant::parse(v)?;
    }
    if let Some(v) = &o.sl_ells {
        cfg.sl_ells = parse_list(v, "ell")?;
    }
    Ok(())
}

fn check_size(n: usize, allow_large: bool) -> gapline::Result<()> {
    if n > LARGE_N && !allow_large {
        return Err(Error::Config(format!("n = {n} exceeds {LARGE_N}; pass --allow-large to proceed")));
    }
    Ok(())
}

/// Config from the spectrum source flags; `None` when no source was given.
fn source_config(src: &SpectrumSource) -> gapline::Result<Option<ExperimentConfig>> {
    let given = [
        src.preset.is_some(),
        src.config.is_some(),
        src.eigs.is_some(),
        src.eigenvalues.is_some(),
    ];
    if given.iter().filter(|g| **g).count() > 1 {
        return Err(Error::Config(
            "give at most one of --preset, --config, --eigs, --eigenvalues".into(),
        ));
    }
    if let Some(p) = src.preset {
        return Ok(Some(ExperimentConfig::preset(p)));
    }
    if let Some(path) = &src.config {
        return ExperimentConfig::load(path).map(Some);
    }
    let values = match (&src.eigs, &src.eigenvalues) {
        (Some(path), _) => io::read_eigenvalues(path)?,
        (_, Some(list)) => parse_list(list, "eigenvalue")?,
        _ => return Ok(None),
    };
    let mut cfg = ExperimentConfig::preset(Preset::Fig1);
    cfg.preset = None;
    cfg.name = "experiment".into();
    cfg.out = PathBuf::from("out").join("experiment");
    cfg.n = values.len();
    cfg.spectrum = SpectrumRecipe::Explicit(values);
    cfg.families = vec![Family::B1Bbr, Family::B2Integral, Family::B3Tau, Family::BSl];
    Ok(Some(cfg))
}

fn cmd_generate(args: GenerateArgs) -> CliResult {
    let mut cfg = source_config(&args.source)?
        .ok_or_else(|| Error::Config("generate needs --preset, --config, --eigs or --eigenvalues".into()))?;
    apply_common(&mut cfg, &args.common)?;
    let explicit = args.source.eigs.is_some() || args.source.eigenvalues.is_some();
    if explicit && args.common.m.is_none() {
        return Err(Error::Config("--m is required with an explicit spectrum".into()).into());
    }
    cfg.validate()?;
    let lambda = cfg.spectrum.eigenvalues(cfg.n)?;
    let h = timed("generate", || generate(&lambda, cfg.m, &mut SeededRng::new(cfg.seed)))?;
    let path = cfg.out.join("matrix.txt");
    let files = io::write_matrix(&path, &h)?;
    let basis = h.provenance().expect("generated matrices carry their eigenbasis");
    let (res, orth) = eigen_residuals(h.matrix(), basis);
    println!("n = {}  m = {}  seed = {}", h.n(), h.bandwidth(), cfg.seed);
    println!(
        "bandwidth certificate: {} nonzero entries outside the band; largest zeroed entry {:.3e}",
        h.band_violations(),
        h.truncated_magnitude()
    );
    println!("spectrum residual: max|HV - V diag(lambda)| = {res:.3e}, max|V^T V - I| = {orth:.3e}");
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> CliResult {
    let h = timed("load", || io::read_matrix(&args.matrix))?;
    check_size(h.n(), args.common.allow_large)?;
    let mu = args.common.mu.unwrap_or(0.0);
    let proj = timed("projector", || spectral_projector(&h, mu))?;
    let d = projector_diagnostics(&proj.p);
    let target = match args.source {
        SourceKind::Projector => proj.p.clone(),
        SourceKind::Sign => sign_from_projector(&proj.p),
    };
    let source = match args.source {
        SourceKind::Projector => DecaySource::Projector,
        SourceKind::Sign => DecaySource::Sign,
    };
    let profile = decay_profile(&target, source);
    let out = args.common.out.unwrap_or_else(|| PathBuf::from("."));
    let decay_path = out.join("decay.csv");
    let trunc_path = out.join("truncation.csv");
    io::write_file(&decay_path, &io::decay_csv(&profile))?;
    io::write_file(&trunc_path, &io::truncation_csv(&truncation_errors(&target)))?;
    println!("n = {}  m = {}  n_e = {}", h.n(), h.bandwidth(), proj.n_e);
    println!(
        "trace = {:.15}  ||P^2 - P||_F = {:.3e}  max|P - P^T| = {:.3e}",
        d.trace, d.idempotency, d.asymmetry
    );
    println!("wrote {}\nwrote {}", decay_path.display(), trunc_path.display());
    Ok(())
}

fn cmd_bounds(args: BoundsArgs) -> CliResult {
    let geometry = args.a.is_some() || args.b.is_some() || args.b1.is_some() || args.b2.is_some();
    let from_source = source_config(&args.source)?;
    if geometry && from_source.is_some() {
        return Err(Error::Config("give either --a/--b/--b1/--b2 or a spectrum source, not both".into()).into());
    }
    let mut cfg = match from_source {
        Some(c) => c,
        None if geometry => {
            let mut c = ExperimentConfig::preset(Preset::Fig1);
            c.preset = None;
            c.out = PathBuf::from(".");
            c.families = vec![Family::B1Bbr, Family::B2Integral, Family::B3Tau];
            c
        }
        None => return Err(Error::Config("bounds needs a spectrum: --a/--b or --preset/--config/--eigs".into()).into()),
    };
    apply_common(&mut cfg, &args.common)?;
    apply_bound_opts(&mut cfg, &args.opts)?;
    if args.common.out.is_none() && args.source.config.is_none() {
        cfg.out = PathBuf::from(".");
    }
    if cfg.m == 0 {
        return Err(Error::Config("m must be at least 1".into()).into());
    }
    let kmax = match (args.opts.kmax, geometry) {
        (Some(k), _) => k,
        (None, true) => 100 * cfg.m,
        (None, false) => cfg.kmax(),
    };
    let ctx = if geometry {
        let a = args.a.ok_or_else(|| Error::Config("--a is required with --b/--b1/--b2".into()))?;
        let (b1, b2) = match (args.b, args.b1, args.b2) {
            (Some(b), None, None) => (b, b),
            (None, Some(b1), Some(b2)) => (b1, b2),
            _ => return Err(Error::Config("give --b, or both --b1 and --b2".into()).into()),
        };
        let mut ctx = BoundContext::new(SpectrumSpec::asymmetric(a, b1, b2)?, cfg.m);
        ctx.k2 = cfg.k2;
        ctx.tol = cfg.tol;
        ctx
    } else {
        let lambda = cfg.spectrum.eigenvalues(cfg.n)?;
        if cfg.families.iter().all(|f| f.is_inverse_bound()) {
            inverse_context(&lambda, cfg.m, cfg.tol_cluster)?
        } else {
            bound_context(&cfg, &lambda)?
        }
    };
    let curves = timed("bounds", || curves(&ctx, &cfg.families, &cfg.sl_ells, kmax))?;
    for c in &curves {
        let path = cfg.out.join(format!("bound_{}.csv", c.label));
        io::write_file(&path, &io::curve_csv(c))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> CliResult {
    let profile = io::read_decay_csv(&args.decay)?;
    let eps: Vec<f64> = parse_list(&args.eps, "eps")?;
    if let Some(e) = eps.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::Config(format!("eps values must be positive, got {e}")).into());
    }
    if args.m == 0 {
        return Err(Error::Config("m must be at least 1".into()).into());
    }
    let mut curves = Vec::new();
    for arg in &args.bounds {
        let (family, label, path) = io::curve_source(arg)?;
        curves.push(io::read_curve_csv(&path, family, &label)?);
    }
    let truncation = args.truncation.as_deref().map(io::read_truncation_csv).transpose()?;
    let cmp = compare(&profile, &curves, &eps, args.m, truncation.as_deref(), noise_floor(profile.len()));
    let out = args.out.unwrap_or_else(|| PathBuf::from("."));
    let report = out.join("report.csv");
    let plot = out.join("plot.csv");
    io::write_file(&report, &io::report_csv(&cmp.rows))?;
    io::write_file(&plot, &io::plot_csv(&profile, &curves))?;
    print!("{}", io::report_csv(&cmp.rows));
    println!("wrote {}\nwrote {}", report.display(), plot.display());
    if cmp.violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violations(cmp.violations))
    }
}

fn cmd_reproduce(args: ReproduceArgs) -> CliResult {
    let mut cfg = ExperimentConfig::preset(args.preset);
    if let Some(path) = &args.config {
        let file = ExperimentConfig::load(path)?;
        if file.preset != Some(args.preset) {
            return Err(Error::Config(format!("config {} is not for preset {}", path.display(), args.preset)).into());
        }
        cfg = file;
    }
    apply_common(&mut cfg, &args.common)?;
    apply_bound_opts(&mut cfg, &args.opts)?;
    if let Some(e) = &args.eps {
        cfg.eps = parse_list(e, "eps")?;
    }
    let res = timed("run", || experiment::run(&cfg))?;
    let files = timed("write", || experiment::write_outputs(&cfg, &res))?;
    print!("{}", io::report_csv(&res.comparison.rows));
    for f in files {
        println!("wrote {}", f.display());
    }
    if res.comparison.violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violations(res.comparison.violations))
    }
}

fn report_failure(f: Failure) -> ExitCode {
    match f {
        Failure::Violations(v) => {
            eprintln!("error: {} bound violation(s)", v.len());
            for x in v.iter().take(20) {
                eprintln!("  {} k={} measured={:e} bound={:e}", x.label, x.k, x.measured, x.bound);
            }
            ExitCode::from(EXIT_VIOLATION)
        }
        Failure::Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(EXIT_NUMERICAL)
            } else {
                ExitCode::from(EXIT_VALIDATION)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Generate(a) => cmd_generate(a),
        Cmd::Analyze(a) => cmd_analyze(a),
        Cmd::Bounds(a) => cmd_bounds(a),
        Cmd::Compare(a) => cmd_compare(a),
        Cmd::Reproduce(a) => cmd_reproduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report_failure(f),
    }
}
