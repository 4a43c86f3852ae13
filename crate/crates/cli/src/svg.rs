//! Deterministic SVG 1.1 emission.
//!
//! Coordinates are printed with a fixed format so identical inputs always
//! produce identical bytes; -0.0 and float dust below the print precision
//! are clamped to 0 first.

use fullshift::penrose::{faces, TilingWindow};

const SCALE: f64 = 48.0;
const MARGIN: f64 = 24.0;

fn num(x: f64) -> String {
    let x = if x.abs() < 5e-5 { 0.0 } else { x };
    format!("{x:.4}")
}

fn document(width: f64, height: f64, style: &str, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <style>{style}</style>\n{body}</svg>\n",
        w = num(width),
        h = num(height),
    )
}

struct Frame {
    min_x: f64,
    max_y: f64,
}

impl Frame {
    /// Fit a frame around math-space points; y grows upward in math space
    /// and downward in the SVG, so the map flips it.
    fn fit(points: &[(f64, f64)]) -> (Frame, f64, f64) {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for &(x, y) in points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
        if points.is_empty() {
            min_x = 0.0;
            max_x = 0.0;
            min_y = 0.0;
            max_y = 0.0;
        }
        let w = (max_x - min_x) * SCALE + 2.0 * MARGIN;
        let h = (max_y - min_y) * SCALE + 2.0 * MARGIN;
        (Frame { min_x, max_y }, w, h)
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.min_x) * SCALE + MARGIN,
            (self.max_y - y) * SCALE + MARGIN,
        )
    }
}

const PENROSE_STYLE: &str = ".thick{fill:#c9b8e8;stroke:#4a3870;stroke-width:1.2}\
.thin{fill:#f3d9a7;stroke:#8a6420;stroke-width:1.2}\
.edge{stroke:#555;stroke-width:0.8}\
.vert{fill:#333}\
.marked{fill:#d4373e;stroke:#7a1016;stroke-width:1.5}";

/// Window drawing: rhombus faces classed thick/thin, the edge graph, vertex
/// dots, and the marked vertex if present. An empty window renders to a
/// well-formed document with no shapes.
pub fn penrose_window_svg(w: &TilingWindow) -> String {
    let pts: Vec<(f64, f64)> = w.vertices.iter().map(|v| v.point().approx()).collect();
    let (frame, width, height) = Frame::fit(&pts);
    let mut body = String::new();
    for f in faces(w) {
        let cls = if f.thick { "thick" } else { "thin" };
        let corners: Vec<String> = f
            .corners
            .iter()
            .map(|&i| {
                let (x, y) = frame.map(pts[i].0, pts[i].1);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        body.push_str(&format!(
            "<polygon class=\"{cls}\" points=\"{}\"/>\n",
            corners.join(" ")
        ));
    }
    for &(i, j, _) in &w.edges {
        let (x1, y1) = frame.map(pts[i].0, pts[i].1);
        let (x2, y2) = frame.map(pts[j].0, pts[j].1);
        body.push_str(&format!(
            "<line class=\"edge\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        ));
    }
    for p in &pts {
        let (x, y) = frame.map(p.0, p.1);
        body.push_str(&format!(
            "<circle class=\"vert\" cx=\"{}\" cy=\"{}\" r=\"2\"/>\n",
            num(x),
            num(y)
        ));
    }
    if let Some(m) = w.marked {
        let (x, y) = frame.map(pts[m].0, pts[m].1);
        body.push_str(&format!(
            "<circle class=\"marked\" cx=\"{}\" cy=\"{}\" r=\"5\"/>\n",
            num(x),
            num(y)
        ));
    }
    document(width, height, PENROSE_STYLE, &body)
}

const CHAIR_STYLE: &str = ".cell{stroke:#333;stroke-width:1}\
.s0{fill:#bdd7ee}.s1{fill:#c6e0b4}.s2{fill:#f8cbad}.s3{fill:#d9d2e9}\
.glyph{stroke:#222;stroke-width:2.5;fill:none;stroke-linecap:round}";

/// One unit square per cell, filled by symbol class, plus an orientation
/// glyph (an open chevron rotated by the symbol index).
pub fn chair_patch_svg(cells: &[(i64, i64, usize)]) -> String {
    let pts: Vec<(f64, f64)> = cells
        .iter()
        .flat_map(|&(x, y, _)| [(x as f64, y as f64), (x as f64 + 1.0, y as f64 + 1.0)])
        .collect();
    let (frame, width, height) = Frame::fit(&pts);
    let mut body = String::new();
    for &(cx, cy, sym) in cells {
        // map the cell's top-left corner (math-space upper edge y+1)
        let (px, py) = frame.map(cx as f64, cy as f64 + 1.0);
        body.push_str(&format!(
            "<rect class=\"cell s{sym}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n",
            num(px),
            num(py),
            num(SCALE),
            num(SCALE)
        ));
        let (gx1, gy1) = (px + 0.70 * SCALE, py + 0.30 * SCALE);
        let (gx2, gy2) = (px + 0.30 * SCALE, py + 0.30 * SCALE);
        let (gx3, gy3) = (px + 0.30 * SCALE, py + 0.70 * SCALE);
        let (ccx, ccy) = (px + 0.5 * SCALE, py + 0.5 * SCALE);
        body.push_str(&format!(
            "<path class=\"glyph\" d=\"M {} {} L {} {} L {} {}\" transform=\"rotate({} {} {})\"/>\n",
            num(gx1),
            num(gy1),
            num(gx2),
            num(gy2),
            num(gx3),
            num(gy3),
            90 * (sym as i64),
            num(ccx),
            num(ccy)
        ));
    }
    document(width, height, CHAIR_STYLE, &body)
}
