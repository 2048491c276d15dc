//! Text formats: matrix files with optional eigenvalue and basis companions,
//! and the CSV files written by the command-line tool.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::bounds::{BoundCurve, BoundPoint, Family};
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::factory::{BandedHermitian, Eigenbasis};
use crate::projector::{DecayProfile, TruncationErrors};
use crate::report::{TruncationReport, REPORT_HEADER};

pub const MATRIX_MAGIC: &str = "gapline-matrix v1";

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Companion paths `<stem>.eigs` and `<stem>.basis` next to a matrix file.
pub fn companion_paths(matrix: &Path) -> (PathBuf, PathBuf) {
    (matrix.with_extension("eigs"), matrix.with_extension("basis"))
}

fn matrix_text(m: &Mat, bw: usize) -> String {
    let n = m.rows();
    let mut s = String::with_capacity(n * n * 24 + 64);
    let _ = writeln!(s, "{MATRIX_MAGIC} n={n} m={bw}");
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                s.push(' ');
            }
            s.push_str(&fmt_f64(m[(i, j)]));
        }
        s.push('\n');
    }
    s
}

fn parse_matrix(path: &Path, text: &str) -> Result<(Mat, usize)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::parse(path, "empty file"))?;
    let rest = header
        .strip_prefix(MATRIX_MAGIC)
        .ok_or_else(|| Error::parse(path, format!("expected header starting with {MATRIX_MAGIC:?}")))?;
    let mut n = None;
    let mut m = None;
    for tok in rest.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(path, format!("bad header token {tok:?}")))?;
        let v: usize = val
            .parse()
            .map_err(|_| Error::parse(path, format!("bad header value {tok:?}")))?;
        match key {
            "n" => n = Some(v),
            "m" => m = Some(v),
            _ => return Err(Error::parse(path, format!("unknown header key {key:?}"))),
        }
    }
    let (n, m) = match (n, m) {
        (Some(n), Some(m)) => (n, m),
        _ => return Err(Error::parse(path, "header needs n= and m=")),
    };
    let mut data = Mat::zeros(n, n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::parse(path, format!("expected {n} rows, found {i}")))?;
        let mut count = 0;
        for (j, tok) in line.split_whitespace().enumerate() {
            if j >= n {
                return Err(Error::parse(path, format!("row {} has more than {n} entries", i + 1)));
            }
            data[(i, j)] = tok
                .parse()
                .map_err(|_| Error::parse(path, format!("row {}: bad number {tok:?}", i + 1)))?;
            count += 1;
        }
        if count != n {
            return Err(Error::parse(path, format!("row {} has {count} entries, expected {n}", i + 1)));
        }
    }
    if lines.next().is_some() {
        return Err(Error::parse(path, "trailing data after the last row"));
    }
    Ok((data, m))
}

/// Writes the matrix and, when provenance is present, its companions.
/// Returns every path written.
pub fn write_matrix(path: &Path, h: &BandedHermitian) -> Result<Vec<PathBuf>> {
    write_file(path, &matrix_text(h.matrix(), h.bandwidth()))?;
    let mut written = vec![path.to_path_buf()];
    if let Some(basis) = h.provenance() {
        let (eigs, vecs) = companion_paths(path);
        write_eigenvalues(&eigs, &basis.values)?;
        write_file(&vecs, &matrix_text(&basis.vectors, h.n().saturating_sub(1)))?;
        written.extend([eigs, vecs]);
    }
    Ok(written)
}

/// Reads a matrix file, checking symmetry and the declared bandwidth, and
/// attaches the companions when both exist.
pub fn read_matrix(path: &Path) -> Result<BandedHermitian> {
    let (data, m) = parse_matrix(path, &read_file(path)?)?;
    let scale = data.max_abs();
    if data.asymmetry() > 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::parse(path, "matrix is not symmetric"));
    }
    let h = BandedHermitian::new(data, m).map_err(|e| Error::parse(path, e.to_string()))?;
    let (eigs, vecs) = companion_paths(path);
    if eigs.exists() && vecs.exists() {
        let values = read_eigenvalues(&eigs)?;
        let (vectors, _) = parse_matrix(&vecs, &read_file(&vecs)?)?;
        return h
            .with_provenance(Eigenbasis { vectors, values })
            .map_err(|e| Error::parse(path, format!("companion files rejected: {e}")));
    }
    Ok(h)
}

pub fn write_eigenvalues(path: &Path, values: &[f64]) -> Result<()> {
    let mut s = String::new();
    for v in values {
        s.push_str(&fmt_f64(*v));
        s.push('\n');
    }
    write_file(path, &s)
}

/// One value per line; blank lines and `#` comments are skipped.
pub fn read_eigenvalues(path: &Path) -> Result<Vec<f64>> {
    let text = read_file(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        out.push(
            t.parse()
                .map_err(|_| Error::parse(path, format!("line {}: bad number {t:?}", i + 1)))?,
        );
    }
    if out.is_empty() {
        return Err(Error::parse(path, "no eigenvalues"));
    }
    Ok(out)
}

pub fn decay_csv(profile: &DecayProfile) -> String {
    let mut s = String::from("k,value\n");
    for (k, v) in profile.curve.iter().enumerate() {
        let _ = writeln!(s, "{k},{}", fmt_f64(*v));
    }
    s
}

/// Reads a `k,value` file into a dense curve indexed by `k`.
pub fn read_decay_csv(path: &Path) -> Result<Vec<f64>> {
    let text = read_file(path)?;
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("k,value") => {}
        _ => return Err(Error::parse(path, "expected header k,value")),
    }
    let mut curve = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let (k, v) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(path, format!("line {}: expected k,value", i + 2)))?;
        let k: usize = k.trim().parse().map_err(|_| Error::parse(path, format!("line {}: bad k", i + 2)))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::parse(path, format!("line {}: bad value", i + 2)))?;
        if k != curve.len() {
            return Err(Error::parse(path, format!("line {}: k values must be 0, 1, 2, ...", i + 2)));
        }
        curve.push(v);
    }
    Ok(curve)
}

pub fn curve_csv(curve: &BoundCurve) -> String {
    let mut s = String::from("k,raw,capped,param\n");
    for p in &curve.points {
        let param = p.param.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{param}", p.k, fmt_f64(p.raw), fmt_f64(p.capped));
    }
    s
}

/// Reads a `k,raw,capped,param` file. The family is not stored in the file
/// and must be supplied.
pub fn read_curve_csv(path: &Path, family: Family, label: &str) -> Result<BoundCurve> {
    let text = read_file(path)?;
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("k,raw,capped,param") => {}
        _ => return Err(Error::parse(path, "expected header k,raw,capped,param")),
    }
    let mut points = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = |what: &str| Error::parse(path, format!("line {}: {what}", i + 2));
        if cols.len() != 4 {
            return Err(bad("expected 4 columns"));
        }
        points.push(BoundPoint {
            k: cols[0].parse().map_err(|_| bad("bad k"))?,
            raw: cols[1].parse().map_err(|_| bad("bad raw value"))?,
            capped: cols[2].parse().map_err(|_| bad("bad capped value"))?,
            param: if cols[3].is_empty() {
                None
            } else {
                Some(cols[3].parse().map_err(|_| bad("bad param"))?)
            },
        });
    }
    Ok(BoundCurve {
        family,
        label: label.to_string(),
        params: Vec::new(),
        points,
    })
}

/// Resolves a bound-file argument: either `family=path`, or a path whose
/// stem is `bound_<label>` with `<label>` a family name or `sl_l<ell>`.
/// Returns `(family, label, path)`.
pub fn curve_source(arg: &str) -> Result<(Family, String, PathBuf)> {
    if let Some((fam, path)) = arg.split_once('=') {
        let family: Family = fam.parse()?;
        return Ok((family, family.name().to_string(), PathBuf::from(path)));
    }
    let path = PathBuf::from(arg);
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
    let label = stem.strip_prefix("bound_").ok_or_else(|| {
        Error::Config(format!("cannot tell the family of {arg:?}; name it bound_<family>.csv or pass family=path"))
    })?;
    let family = match label.strip_prefix("sl_l") {
        Some(ell) if ell.parse::<usize>().is_ok() => Family::BSl,
        _ => label.parse()?,
    };
    Ok((family, label.to_string(), path))
}

pub fn truncation_csv(rows: &[TruncationErrors]) -> String {
    let mut s = String::from("k,err_max,err_1,err_inf,err_2\n");
    for t in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            t.k,
            fmt_f64(t.max),
            fmt_f64(t.one),
            fmt_f64(t.inf),
            fmt_f64(t.two_bound)
        );
    }
    s
}

/// Inverse of [`truncation_csv`].
pub fn read_truncation_csv(path: &Path) -> Result<Vec<TruncationErrors>> {
    let text = read_file(path)?;
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("k,err_max,err_1,err_inf,err_2") => {}
        _ => return Err(Error::parse(path, "expected header k,err_max,err_1,err_inf,err_2")),
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = || Error::parse(path, format!("line {}: expected 5 numeric columns", i + 2));
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 5 {
            return Err(bad());
        }
        let v = |j: usize| cols[j].parse::<f64>().map_err(|_| bad());
        let k: usize = cols[0].parse().map_err(|_| bad())?;
        if k != out.len() {
            return Err(Error::parse(path, format!("line {}: k values must be 0, 1, 2, ...", i + 2)));
        }
        out.push(TruncationErrors {
            k,
            max: v(1)?,
            one: v(2)?,
            inf: v(3)?,
            two_bound: v(4)?,
        });
    }
    Ok(out)
}

pub fn report_csv(rows: &[TruncationReport]) -> String {
    let mut s = String::from(REPORT_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Wide table `k,D,<label>...` of capped values; blank where a curve has no point.
pub fn plot_csv(profile: &[f64], curves: &[BoundCurve]) -> String {
    let mut s = String::from("k,D");
    for c in curves {
        s.push(',');
        s.push_str(&c.label);
    }
    s.push('\n');
    let kmax = curves
        .iter()
        .filter_map(|c| c.points.last().map(|p| p.k))
        .chain(profile.len().checked_sub(1))
        .max()
        .unwrap_or(0);
    let lookup: Vec<Vec<Option<f64>>> = curves
        .iter()
        .map(|c| {
            let mut v = vec![None; kmax + 1];
            for p in &c.points {
                v[p.k] = Some(p.capped);
            }
            v
        })
        .collect();
    for k in 0..=kmax {
        s.push_str(&k.to_string());
        s.push(',');
        if let Some(d) = profile.get(k) {
            s.push_str(&fmt_f64(*d));
        }
        for col in &lookup {
            s.push(',');
            if let Some(v) = col[k] {
                s.push_str(&fmt_f64(v));
            }
        }
        s.push('\n');
    }
    s
}
