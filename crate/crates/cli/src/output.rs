//! Artifact writing. The SVG is drawn from the emitted JSON and CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use poncelet_core::mapped::SamplePoint;
use poncelet_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Plot geometry carried inside the JSON report.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Geometry {
    pub boundary: Vec<Vec<C64>>,
    pub chords: Vec<[C64; 2]>,
    pub curves: Vec<Vec<C64>>,
}

pub struct Artifacts {
    pub name: &'static str,
    pub report: serde_json::Value,
    pub points: Vec<SamplePoint>,
}

pub fn csv(points: &[SamplePoint]) -> String {
    let mut out = String::from("re,im,arg_lambda\n");
    for p in points {
        writeln!(out, "{},{},{}", p.z.re, p.z.im, p.arg_lambda).unwrap();
    }
    out
}

/// Writes the requested formats and returns the paths written.
pub fn write(dir: &Path, formats: &[Format], a: &Artifacts) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(&a.report)? + "\n";
    let mut written = Vec::new();
    let mut emit = |ext: &str, body: &str| -> Result<(), CliError> {
        let path = dir.join(format!("{}.{ext}", a.name));
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    for f in formats {
        match f {
            Format::Json => emit("json", &json)?,
            Format::Csv if !a.points.is_empty() => emit("csv", &csv(&a.points))?,
            Format::Csv => {}
            Format::Svg => {
                // The plot is rebuilt from the serialized report, never from
                // in-memory results.
                let emitted: serde_json::Value = serde_json::from_str(&json)?;
                let geometry: Geometry = match emitted.get("geometry") {
                    Some(g) => serde_json::from_value(g.clone())?,
                    None => Geometry::default(),
                };
                let dots: Vec<C64> = a.points.iter().map(|p| p.z).collect();
                emit("svg", &svg(&geometry, &dots))?;
            }
        }
    }
    Ok(written)
}

struct Bounds {
    min: C64,
    max: C64,
}

impl Bounds {
    fn of<'a>(points: impl Iterator<Item = &'a C64>) -> Option<Self> {
        let mut b: Option<Bounds> = None;
        for z in points.filter(|z| z.re.is_finite() && z.im.is_finite()) {
            let e = b.get_or_insert(Bounds { min: *z, max: *z });
            e.min = C64::new(e.min.re.min(z.re), e.min.im.min(z.im));
            e.max = C64::new(e.max.re.max(z.re), e.max.im.max(z.im));
        }
        b
    }
}

fn pt(z: C64) -> String {
    format!("{:.6},{:.6}", z.re, -z.im)
}

/// Boundary in black over light gray chords, with accented curves and sample
/// dots. The view box frames everything but the chords, plus a 5% margin.
pub fn svg(g: &Geometry, dots: &[C64]) -> String {
    let framed = g.boundary.iter().flatten().chain(g.curves.iter().flatten()).chain(dots);
    let bounds = Bounds::of(framed)
        .or_else(|| Bounds::of(g.chords.iter().flatten()))
        .unwrap_or(Bounds { min: C64::new(-1.0, -1.0), max: C64::new(1.0, 1.0) });
    let span = (bounds.max.re - bounds.min.re).max(bounds.max.im - bounds.min.im).max(1e-9);
    let margin = 0.05 * span;
    let (x0, y0) = (bounds.min.re - margin, -bounds.max.im - margin);
    let (w, h) = (bounds.max.re - bounds.min.re + 2.0 * margin, bounds.max.im - bounds.min.im + 2.0 * margin);
    let stroke = 0.002 * span;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.6} {y0:.6} {w:.6} {h:.6}" width="800" height="{:.0}">"#,
        800.0 * h / w
    )
    .unwrap();
    writeln!(out, r#"<rect x="{x0:.6}" y="{y0:.6}" width="{w:.6}" height="{h:.6}" fill="white"/>"#).unwrap();
    writeln!(out, r##"<g fill="none" stroke="#c8c8c8" stroke-width="{stroke:.6}">"##).unwrap();
    for [a, b] in &g.chords {
        writeln!(out, r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#, a.re, -a.im, b.re, -b.im).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    let polyline = |out: &mut String, line: &[C64]| {
        let pts: Vec<String> = line.iter().map(|&z| pt(z)).collect();
        writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" ")).unwrap();
    };
    writeln!(out, r#"<g fill="none" stroke="black" stroke-width="{:.6}">"#, 1.5 * stroke).unwrap();
    for line in &g.boundary {
        polyline(&mut out, line);
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, r##"<g fill="none" stroke="#d62728" stroke-width="{:.6}">"##, 1.5 * stroke).unwrap();
    for line in &g.curves {
        polyline(&mut out, line);
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, r##"<g fill="#1f77b4">"##).unwrap();
    for z in dots {
        writeln!(out, r#"<circle cx="{:.6}" cy="{:.6}" r="{:.6}"/>"#, z.re, -z.im, 2.0 * stroke).unwrap();
    }
    writeln!(out, "</g>\n</svg>").unwrap();
    out
}
