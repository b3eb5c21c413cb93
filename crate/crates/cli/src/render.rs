//! Deterministic SVG drawing of a patch with an optional partition overlay.
//!
//! Conventions: y points up (the drawing is flipped), tiles of arm or ring
//! `i` are filled with `PALETTE[i % PALETTE.len()]`, tiles outside every part
//! with `UNASSIGNED`. Contacts between different parts are drawn bold,
//! threads as black polylines, the center as a red dot.

use std::fmt::Write;

use serde_json::Value;
use spiral_core::geometry::{ContactKind, Point};
use spiral_core::patch::{build_contact_graph, id_map, Patch};

use crate::commands::CliError;

pub const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f",
];
pub const UNASSIGNED: &str = "#e8e8e8";

/// Parts, threads and center taken from a report.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overlay {
    pub parts: Vec<Vec<usize>>,
    pub threads: Vec<Vec<Point>>,
    pub closed: bool,
    pub center: Option<Point>,
}

fn points(v: &Value) -> Result<Vec<Point>, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::MismatchedReport(format!("bad point list: {e}")))
}

impl Overlay {
    /// Reads an analysis or verify report (best verified candidate) or a
    /// ring report.
    pub fn from_report(p: &Patch, text: &str) -> Result<Overlay, CliError> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| CliError::MismatchedReport(format!("unreadable report: {e}")))?;
        let (src, parts_key, closed) = if let Some(ring) = v.get("ring") {
            (ring, "rings", true)
        } else {
            let best = v.get("candidates").and_then(Value::as_array).and_then(|cs| {
                cs.iter()
                    .find(|c| c.get("status").and_then(Value::as_str) == Some("verified"))
            });
            (best.unwrap_or(&Value::Null), "arms", false)
        };
        if src.is_null() {
            return Ok(Overlay::default());
        }
        let ids = id_map(p);
        let mut parts = Vec::new();
        for part in src.get(parts_key).and_then(Value::as_array).into_iter().flatten() {
            let mut tiles = Vec::new();
            for id in part.as_array().into_iter().flatten() {
                let id = id.as_str().unwrap_or_default();
                let &t = ids
                    .get(id)
                    .ok_or_else(|| CliError::MismatchedReport(format!("unknown tile id {id:?}")))?;
                tiles.push(t);
            }
            parts.push(tiles);
        }
        let mut threads = Vec::new();
        for t in src.get("threads").and_then(Value::as_array).into_iter().flatten() {
            threads.push(points(t)?);
        }
        let center = match src.get("center") {
            Some(c) if !c.is_null() => Some(
                serde_json::from_value(c.clone())
                    .map_err(|e| CliError::MismatchedReport(format!("bad center: {e}")))?,
            ),
            _ => None,
        };
        Ok(Overlay {
            parts,
            threads,
            closed,
            center,
        })
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn pt(q: Point) -> String {
    format!("{},{}", num(q.x), num(-q.y))
}

fn point_list(pts: impl IntoIterator<Item = Point>) -> String {
    pts.into_iter().map(pt).collect::<Vec<_>>().join(" ")
}

pub fn render_svg(p: &Patch, overlay: &Overlay, graph: bool) -> Result<String, CliError> {
    let (mut lo, mut hi) = (
        Point::new(f64::INFINITY, f64::INFINITY),
        Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for t in p.tiles() {
        for v in t.shape.vertices() {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
    }
    let diag = p.diameter();
    let margin = 0.03 * diag;
    let stroke = 0.002 * diag;
    let (w, h) = (hi.x - lo.x + 2.0 * margin, hi.y - lo.y + 2.0 * margin);
    let mut part_of = vec![None; p.len()];
    for (k, part) in overlay.parts.iter().enumerate() {
        for &t in part {
            part_of[t] = Some(k);
        }
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        num(lo.x - margin),
        num(-hi.y - margin),
        num(w),
        num(h),
        (800.0 * h / w).round() as i64
    );
    s.push_str("<g id=\"tiles\">\n");
    for (i, t) in p.tiles().iter().enumerate() {
        let fill = part_of[i].map_or(UNASSIGNED, |k| PALETTE[k % PALETTE.len()]);
        let _ = writeln!(
            s,
            r##"<polygon class="tile" data-id="{}" points="{}" fill="{fill}" stroke="#333333" stroke-width="{}"/>"##,
            t.id,
            point_list(t.shape.vertices().iter().copied()),
            num(stroke)
        );
    }
    s.push_str("</g>\n");

    let g = build_contact_graph(p)?;
    if !overlay.parts.is_empty() {
        s.push_str("<g id=\"cut\">\n");
        for e in g.edges() {
            if e.kind != ContactKind::Segmental || part_of[e.a] == part_of[e.b] {
                continue;
            }
            for &(a, b) in &e.contact.segments {
                let _ = writeln!(
                    s,
                    r##"<line class="cut" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000000" stroke-width="{}"/>"##,
                    num(a.x),
                    num(-a.y),
                    num(b.x),
                    num(-b.y),
                    num(4.0 * stroke)
                );
            }
        }
        s.push_str("</g>\n");
    }

    if graph {
        let cents: Vec<Point> = p.tiles().iter().map(|t| t.shape.centroid()).collect();
        s.push_str("<g id=\"dg\">\n");
        for e in g.edges().iter().filter(|e| e.kind == ContactKind::Segmental) {
            let (a, b) = (cents[e.a], cents[e.b]);
            let _ = writeln!(
                s,
                r##"<line class="dg-edge" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#555555" stroke-width="{}"/>"##,
                num(a.x),
                num(-a.y),
                num(b.x),
                num(-b.y),
                num(stroke)
            );
        }
        for c in &cents {
            let _ = writeln!(
                s,
                r##"<circle class="node" cx="{}" cy="{}" r="{}" fill="#555555"/>"##,
                num(c.x),
                num(-c.y),
                num(3.0 * stroke)
            );
        }
        s.push_str("</g>\n");
    }

    if !overlay.threads.is_empty() {
        s.push_str("<g id=\"threads\">\n");
        for t in &overlay.threads {
            let mut pts = t.clone();
            if overlay.closed {
                pts.extend(t.first().copied());
            }
            let _ = writeln!(
                s,
                r##"<polyline class="thread" points="{}" fill="none" stroke="#000000" stroke-width="{}"/>"##,
                point_list(pts),
                num(2.0 * stroke)
            );
        }
        s.push_str("</g>\n");
    }
    if let Some(c) = overlay.center {
        let _ = writeln!(
            s,
            r##"<circle class="center" cx="{}" cy="{}" r="{}" fill="#d62728"/>"##,
            num(c.x),
            num(-c.y),
            num(5.0 * stroke)
        );
    }
    s.push_str("</svg>");
    Ok(s)
}
