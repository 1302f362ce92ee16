//! File emission: LF-terminated CSV, pretty JSON and a standalone SVG plot.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tamagawa_core::ekstats::{gaussian_cdf, DistributionReport};

use crate::error::{CliError, CliResult};

/// Version stamped into every JSON file as `schema_version`.
pub const SCHEMA_VERSION: u32 = 1;

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })
}

fn write_bytes(path: PathBuf, bytes: &[u8]) -> CliResult<PathBuf> {
    fs::write(&path, bytes).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

/// Writes `header` and `rows` as CSV with `\n` line endings.
pub fn write_csv<R: Serialize>(dir: &Path, name: &str, header: &[&str], rows: &[R]) -> CliResult<PathBuf> {
    let mut w = csv::WriterBuilder::new().has_headers(false).terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io { path: dir.join(name), source: e.into_error() })?;
    write_bytes(dir.join(name), &bytes)
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_bytes(dir.join(name), text.as_bytes())
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> CliResult<PathBuf> {
    write_bytes(dir.join(name), text.as_bytes())
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// The empirical distribution function as a step curve against the Gaussian,
/// both on the normalized axis. Exactly two `polyline` elements.
pub fn cdf_svg(report: &DistributionReport, title: &str) -> String {
    let (lo, hi) = match (report.grid.first(), report.grid.last()) {
        (Some(&a), Some(&b)) if b > a => (a.min(-3.0), b.max(3.0)),
        _ => (-3.0, 3.0),
    };
    let sx = |t: f64| MARGIN + (t - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |p: f64| HEIGHT - MARGIN - p * (HEIGHT - 2.0 * MARGIN);

    let mut empirical = String::new();
    let mut prev = 0.0;
    let push = |s: &mut String, t: f64, p: f64| {
        let _ = write!(s, "{:.2},{:.2} ", sx(t), sy(p));
    };
    push(&mut empirical, lo, 0.0);
    for (&t, &p) in report.grid.iter().zip(&report.empirical_cdf) {
        push(&mut empirical, t, prev);
        push(&mut empirical, t, p);
        prev = p;
    }
    push(&mut empirical, hi, prev);

    let mut gaussian = String::new();
    let steps = 200;
    for i in 0..=steps {
        let t = lo + (hi - lo) * i as f64 / steps as f64;
        push(&mut gaussian, t, gaussian_cdf(t));
    }

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#);
    let _ = writeln!(svg, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, y0, y1) = (sx(lo), sx(hi), sy(0.0), sy(1.0));
    let _ = writeln!(svg, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#);
    for tick in [lo, 0.0, hi] {
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{tick:.2}</text>"#, sx(tick), y0 + 15.0);
    }
    for p in [0.0, 0.5, 1.0] {
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{p:.1}</text>"#, x0 - 5.0, sy(p) + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">(value − center) / scale</text>"#, (x0 + x1) / 2.0, HEIGHT - 12.0);
    let _ = writeln!(svg, r#"<text x="14" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">cumulative probability</text>"#, (y0 + y1) / 2.0, (y0 + y1) / 2.0);
    let _ = writeln!(svg, r#"<text x="{:.2}" y="24" font-size="13" text-anchor="middle">{} (KS {:.4})</text>"#, WIDTH / 2.0, escape(title), report.ks);
    let _ = writeln!(svg, r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#, empirical.trim_end());
    let _ = writeln!(svg, r#"<polyline fill="none" stroke="firebrick" stroke-width="1.5" stroke-dasharray="5,3" points="{}"/>"#, gaussian.trim_end());
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="11" fill="steelblue">empirical</text>"#, x0 + 10.0, y1 + 10.0);
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="11" fill="firebrick">Gaussian</text>"#, x0 + 10.0, y1 + 25.0);
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
