//! SVG overlay of every unit's polygon for one variable.

use std::fmt::Write as _;

use crate::aggregation::SymbolicTable;
use crate::error::Result;
use crate::polygon::{bounding_box_of, Point, Polygon};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Frame {
    lo: Point,
    scale: f64,
}

impl Frame {
    fn new(polygons: &[Polygon]) -> Result<Self> {
        let (mut lo, mut hi) = bounding_box_of(polygons)?;
        let mut span = (hi.x - lo.x).max(hi.y - lo.y);
        if span == 0.0 {
            span = 1.0;
            lo = Point::new(lo.x - 0.5, lo.y - 0.5);
            hi = Point::new(lo.x + 1.0, lo.y + 1.0);
        }
        // square frame so polygons keep their shape
        let cx = 0.5 * (lo.x + hi.x);
        let cy = 0.5 * (lo.y + hi.y);
        let lo = Point::new(cx - 0.5 * span, cy - 0.5 * span);
        Ok(Frame { lo, scale: (SIZE - 2.0 * MARGIN) / span })
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (MARGIN + (p.x - self.lo.x) * self.scale, SIZE - MARGIN - (p.y - self.lo.y) * self.scale)
    }
}

/// Renders the polygons of `variable` for all units on one shared frame.
/// Degenerate polygons are drawn as dots. Output is deterministic.
pub fn render_svg(table: &SymbolicTable, variable: &str) -> Result<String> {
    let z = table.variable_index(variable)?;
    let polygons: Vec<Polygon> = table.units().iter().map(|u| u.polygons[z].clone()).collect();
    let frame = Frame::new(&polygons)?;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{w}" fill="none" stroke="#cccccc"/>"##,
        w = SIZE - 2.0 * MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="28" font-family="sans-serif" font-size="16" text-anchor="middle">{} ({}-gon)</text>"#,
        escape(variable),
        table.vertex_count(),
        x = SIZE / 2.0
    );

    for (i, (unit, poly)) in table.units().iter().zip(&polygons).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let label = escape(&unit.label);
        let _ = writeln!(out, r#"<g id="unit-{i}">"#);
        if poly.is_degenerate() {
            let (x, y) = frame.map(poly.circumcenter());
            let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="{color}"/>"#);
        } else {
            let points: Vec<String> = poly
                .vertices()
                .iter()
                .map(|&v| {
                    let (x, y) = frame.map(v);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polygon points="{}" fill="{color}" fill-opacity="0.08" stroke="{color}" stroke-width="1.5"/>"#,
                points.join(" ")
            );
        }
        let (x, y) = frame.map(Point::new(poly.center(), poly.center() + poly.radius()));
        let _ = writeln!(
            out,
            r#"<text x="{x:.3}" y="{ty:.3}" font-family="sans-serif" font-size="10" fill="{color}" text-anchor="middle">{label}</text>"#,
            ty = y - 4.0
        );
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
