//! File emission: atomic writes, CSV serialization at full precision,
//! content digests, run manifests, and convenience SVG line plots.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::errors::{CliError, CliResult};

/// Write-then-rename so a crashed run never leaves a half-written artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path
        .parent()
        .ok_or_else(|| CliError::Usage(format!("{} has no parent directory", path.display())))?;
    std::fs::create_dir_all(dir)?;
    let mut tmp = PathBuf::from(path);
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} has no file name", path.display())))?;
    tmp.set_file_name(format!(".{}.tmp", name.to_string_lossy()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// 17-significant-digit scientific notation; enough to round-trip any f64
/// bit pattern, so identical runs yield identical bytes.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with a mandatory header, '.' decimal separator, newline-terminated rows.
pub fn render_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// One entry per emitted file, with a content digest for the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
}

/// Accumulates artifacts, then writes them plus a manifest listing them all.
pub struct OutputSet {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn new(dir: &Path) -> Self {
        OutputSet { dir: dir.to_path_buf(), files: Vec::new() }
    }

    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    pub fn records(&self) -> Vec<FileRecord> {
        self.files
            .iter()
            .map(|(name, bytes)| FileRecord { name: name.clone(), sha256: sha256_hex(bytes) })
            .collect()
    }

    /// Write every artifact, then the manifest naming them all, atomically.
    pub fn commit<M: Serialize>(self, manifest_name: &str, manifest: &M) -> CliResult<Vec<PathBuf>> {
        let mut written = Vec::new();
        for (name, bytes) in &self.files {
            let path = self.dir.join(name);
            write_atomic(&path, bytes)?;
            written.push(path);
        }
        let manifest_bytes = serde_json::to_vec_pretty(manifest)
            .map_err(|e| CliError::Usage(format!("manifest serialization: {e}")))?;
        let path = self.dir.join(manifest_name);
        write_atomic(&path, &manifest_bytes)?;
        written.push(path);
        Ok(written)
    }
}

/// Minimal line plot: fixed frame, one polyline per labelled curve.
pub fn render_svg(title: &str, t: &[f64], curves: &[(&str, &[f64])]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const ML: f64 = 60.0;
    const MR: f64 = 20.0;
    const MT: f64 = 40.0;
    const MB: f64 = 40.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

    let (t0, t1) = (t[0], t[t.len() - 1]);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (_, ys) in curves {
        for y in *ys {
            lo = lo.min(*y);
            hi = hi.max(*y);
        }
    }
    if !(hi > lo) {
        hi = lo + 1.0;
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let sx = |x: f64| ML + (x - t0) / (t1 - t0) * (W - ML - MR);
    let sy = |y: f64| H - MB - (y - lo) / (hi - lo) * (H - MT - MB);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(
        s,
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#333\"/>",
        W - ML - MR,
        H - MT - MB
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\">{title}</text>",
        0.5 * W
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\">t ({t0:.3}..{t1:.3})</text>",
        0.5 * W,
        H - 10.0
    );
    let _ = writeln!(
        s,
        "<text x=\"12\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
         transform=\"rotate(-90 12 {})\">{lo:.3}..{hi:.3}</text>",
        0.5 * H,
        0.5 * H
    );
    for (ci, (label, ys)) in curves.iter().enumerate() {
        let color = COLORS[ci % COLORS.len()];
        let mut points = String::new();
        for (x, y) in t.iter().zip(*ys) {
            let _ = write!(points, "{:.2},{:.2} ", sx(*x), sy(*y));
        }
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
             points=\"{}\"/>",
            points.trim_end()
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
             fill=\"{color}\">{label}</text>",
            W - MR - 120.0,
            MT + 18.0 * (ci as f64 + 1.0)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_full_precision() {
        let csv = render_csv(&["t", "x"], &[vec![0.0, 1.0 / 3.0]]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,x");
        let row = lines.next().unwrap();
        assert!(row.starts_with("0.0000000000000000e0,3.333333333333333"));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn fmt_round_trips_f64_exactly() {
        for v in [std::f64::consts::PI, 1.0 / 3.0, 6.02e23, -1.6e-19] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn digest_matches_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn svg_contains_each_curve() {
        let t = [0.0, 0.5, 1.0];
        let a = [0.0, 1.0, 0.0];
        let b = [1.0, 0.5, 0.0];
        let svg = render_svg("demo", &t, &[("p_left", &a), ("purity", &b)]);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("p_left") && svg.contains("purity"));
    }
}
