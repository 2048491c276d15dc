use std::path::Path;
use std::process::{Command, Output};

fn gapline(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapline"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn gapline")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn spectrum_arg(n: usize) -> String {
    let h = n / 2;
    let v: Vec<String> = (0..n)
        .map(|i| {
            let t = (i % h) as f64 / (h - 1) as f64;
            let x = if i < h { -1.0 + 0.7 * t } else { 0.3 + 0.7 * t };
            format!("{x}")
        })
        .collect();
    format!("--eigenvalues={}", v.join(","))
}

#[test]
fn generate_analyze_bounds_compare() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let eigs = spectrum_arg(80);

    let out = gapline(&["generate", &eigs, "--m", "4", "--seed", "3", "--out", "run"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["matrix.txt", "matrix.eigs", "matrix.basis"] {
        assert!(d.join("run").join(f).exists(), "{f}");
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("bandwidth"));

    let out = gapline(&["analyze", "run/matrix.txt", "--out", "run"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.join("run/decay.csv").exists());
    assert!(d.join("run/truncation.csv").exists());

    let out = gapline(
        &["bounds", &eigs, "--m", "4", "--families", "b1,b2,b3,sl", "--kmax", "79", "--out", "run"],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = gapline(
        &[
            "compare",
            "run/decay.csv",
            "run/bound_b1.csv",
            "run/bound_b2.csv",
            "run/bound_b3.csv",
            "run/bound_sl.csv",
            "--m",
            "4",
            "--truncation",
            "run/truncation.csv",
            "--out",
            "run",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(d.join("run/report.csv")).unwrap();
    assert!(report.starts_with("epsilon,m1,m2,m3,mSL,mP,err_max,err_1,err_inf,err_2"));
    assert_eq!(report.lines().count(), 6);

    // a bound that sits below the measured decay must be flagged
    let mut fake = String::from("k,raw,capped,param\n");
    for k in 0..80 {
        fake.push_str(&format!("{k},1e-30,1e-30,\n"));
    }
    std::fs::write(d.join("run/fake.csv"), fake).unwrap();
    let out = gapline(&["compare", "run/decay.csv", "b2=run/fake.csv", "--m", "4"], d);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("violation"));
}

#[test]
fn two_eigenvalue_tridiagonal() {
    let dir = tempfile::tempdir().unwrap();
    let out = gapline(&["generate", "--eigenvalues=-1,1", "--m", "1", "--out", "two"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bounds_from_geometry_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = gapline(
        &["bounds", "--a", "0.3", "--b", "1", "--m", "20", "--families", "b2", "--out", "g"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("g/bound_b2.csv")).unwrap();
    // default kmax is 100 m
    assert_eq!(csv.lines().count(), 1 + 2001);
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // zero bandwidth
    assert_eq!(code(&gapline(&["generate", "--eigenvalues=-1,1", "--m", "0"], d)), 2);
    // empty gap
    assert_eq!(code(&gapline(&["bounds", "--a", "0.5", "--b", "0.4", "--m", "1"], d)), 2);
    // size guard
    assert_eq!(code(&gapline(&["reproduce", "fig1", "--n", "4000", "--out", "big"], d)), 2);
    assert!(!d.join("big").exists());
    // missing input file
    assert_eq!(code(&gapline(&["analyze", "nope.txt"], d)), 2);
    // unknown preset
    assert_ne!(code(&gapline(&["reproduce", "fig9"], d)), 0);
}

#[test]
fn reproduce_fig4_writes_rate_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = gapline(&["reproduce", "fig4", "--out", "f4"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let f4 = dir.path().join("f4");
    for f in ["decay.csv", "plot.csv", "report.csv", "summary.txt", "bound_hasson.csv", "bound_fuchs.csv"] {
        assert!(f4.join(f).exists(), "{f}");
    }
}
