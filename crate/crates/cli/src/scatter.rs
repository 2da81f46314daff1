//! Scatter output of a validation run: a CSV of target vs achieved
//! positions and an optional SVG with circles at the targets and crosses at
//! the achieved positions.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use geoik_core::{Branch, JointAngles};

use crate::error::HarnessError;
use crate::roundtrip::ValidationReport;

pub const SCATTER_HEADER: [&str; 12] = [
    "idx",
    "target_x",
    "target_y",
    "target_z",
    "achieved_x",
    "achieved_y",
    "achieved_z",
    "pos_err",
    "ori_err",
    "shoulder",
    "elbow",
    "wrist",
];

/// Seventeen significant digits; parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRow {
    pub idx: usize,
    pub target: [f64; 3],
    pub achieved: [f64; 3],
    pub pos_err: f64,
    pub ori_err: f64,
    pub shoulder: Branch,
    pub elbow: Branch,
    pub wrist: Branch,
}

pub fn scatter_rows(report: &ValidationReport) -> Vec<ScatterRow> {
    report
        .records
        .iter()
        .map(|r| ScatterRow {
            idx: r.idx,
            target: r.target.p.to_array(),
            achieved: r.achieved.p.to_array(),
            pos_err: r.pos_err,
            ori_err: r.ori_err,
            shoulder: r.branch.shoulder,
            elbow: r.branch.elbow,
            wrist: r.branch.wrist,
        })
        .collect()
}

pub fn write_scatter_csv(
    report: &ValidationReport,
    path: impl AsRef<Path>,
) -> Result<(), HarnessError> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(SCATTER_HEADER)?;
    for row in scatter_rows(report) {
        let mut fields = vec![row.idx.to_string()];
        fields.extend(
            row.target
                .iter()
                .chain(row.achieved.iter())
                .map(|&v| fmt_f64(v)),
        );
        fields.push(fmt_f64(row.pos_err));
        fields.push(fmt_f64(row.ori_err));
        fields.extend([row.shoulder, row.elbow, row.wrist].map(|b| b.to_string()));
        w.write_record(&fields)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))?;
    Ok(())
}

pub fn read_scatter_csv(path: impl AsRef<Path>) -> Result<Vec<ScatterRow>, HarnessError> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path)?;
    let bad = |line: usize, msg: String| HarnessError::Parse {
        context: format!("{} row {line}", path.display()),
        msg,
    };
    let headers = r.headers()?.clone();
    if headers.iter().ne(SCATTER_HEADER) {
        return Err(bad(0, format!("unexpected header {headers:?}")));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64, HarnessError> {
            rec[i]
                .parse()
                .map_err(|e| bad(line + 1, format!("column {}: {e}", SCATTER_HEADER[i])))
        };
        let branch = |i: usize| -> Result<Branch, HarnessError> {
            rec[i].parse().map_err(|e| bad(line + 1, e))
        };
        rows.push(ScatterRow {
            idx: rec[0]
                .parse()
                .map_err(|e| bad(line + 1, format!("column idx: {e}")))?,
            target: [num(1)?, num(2)?, num(3)?],
            achieved: [num(4)?, num(5)?, num(6)?],
            pos_err: num(7)?,
            ori_err: num(8)?,
            shoulder: branch(9)?,
            elbow: branch(10)?,
            wrist: branch(11)?,
        });
    }
    Ok(rows)
}

const PANEL: f64 = 320.0;
const MARGIN: f64 = 36.0;

/// Three panels (x–y, x–z, y–z) with target circles and achieved crosses.
pub fn render_svg(report: &ValidationReport) -> String {
    let rows = scatter_rows(report);
    let width = 3.0 * PANEL + 4.0 * MARGIN;
    let height = PANEL + 2.0 * MARGIN;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let all: Vec<[f64; 3]> = rows.iter().flat_map(|r| [r.target, r.achieved]).collect();
    for (panel, (a, b, name)) in [(0, 1, "x-y"), (0, 2, "x-z"), (1, 2, "y-z")]
        .into_iter()
        .enumerate()
    {
        let ox = MARGIN + panel as f64 * (PANEL + MARGIN);
        let oy = MARGIN;
        let range = |k: usize| {
            let (lo, hi) = all
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[k]), hi.max(p[k]))
                });
            if lo.is_finite() && hi > lo {
                (lo, hi)
            } else {
                (-1.0, 1.0)
            }
        };
        let (ua, va) = range(a);
        let (ub, vb) = range(b);
        let px = |v: f64| ox + (v - ua) / (va - ua) * PANEL;
        let py = |v: f64| oy + PANEL - (v - ub) / (vb - ub) * PANEL;
        let _ = writeln!(
            svg,
            r##"<g><rect x="{ox}" y="{oy}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#888"/><text x="{}" y="{}" text-anchor="middle">{name}</text>"##,
            ox + PANEL / 2.0,
            oy - 10.0
        );
        for r in &rows {
            let (cx, cy) = (px(r.target[a]), py(r.target[b]));
            let _ = writeln!(
                svg,
                r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="none" stroke="#1f77b4"/>"##
            );
            let (x, y) = (px(r.achieved[a]), py(r.achieved[b]));
            let _ = writeln!(
                svg,
                r##"<path d="M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}" stroke="#d62728"/>"##,
                x - 3.0,
                y - 3.0,
                x + 3.0,
                y + 3.0,
                x - 3.0,
                y + 3.0,
                x + 3.0,
                y - 3.0
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn write_svg(report: &ValidationReport, path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let path = path.as_ref();
    fs::write(path, render_svg(report)).map_err(|e| HarnessError::io(path, e))
}

/// Trajectory CSV: one row per waypoint with the chosen angles.
pub fn write_trajectory_csv(
    angles: &[JointAngles],
    branches: &[geoik_core::BranchLabel],
    jumps: &[f64],
    path: impl AsRef<Path>,
) -> Result<(), HarnessError> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record([
        "idx", "theta1", "theta2", "theta3", "theta4", "theta5", "theta6", "branch", "jump",
    ])?;
    for (i, ((q, b), j)) in angles.iter().zip(branches).zip(jumps).enumerate() {
        let mut fields = vec![i.to_string()];
        fields.extend(q.0.iter().map(|&t| fmt_f64(t)));
        fields.push(b.to_string());
        fields.push(fmt_f64(*j));
        w.write_record(&fields)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))?;
    Ok(())
}
