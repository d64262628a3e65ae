//! SVG and plain-text pictures of a mosaic.

use std::fmt::Write as _;

use crate::complement::ComplementDecomposition;
use crate::diagram::extract_unchecked;
use crate::grid::{Board, Geometry};
use crate::mosaic::Mosaic;
use crate::tiles::{chord_point, slot_angle, Drawing, TileFace};

const SCALE: f64 = 40.0;
/// half-width of an under-crossing gap, in tile units
const GAP: f64 = 0.09;

fn to_svg(p: (f64, f64)) -> (f64, f64) {
    (p.0 * SCALE, -p.1 * SCALE)
}

fn tile_outline(b: &Board, cell: usize) -> Vec<(f64, f64)> {
    let (cx, cy) = b.center(cell);
    match b.geometry() {
        Geometry::Hex => (0..6)
            .map(|k| {
                let a = (90.0 - 60.0 * k as f64).to_radians();
                (cx + a.cos(), cy + a.sin())
            })
            .collect(),
        Geometry::Rect => [(-0.5, 0.5), (0.5, 0.5), (0.5, -0.5), (-0.5, -0.5)]
            .iter()
            .map(|&(dx, dy)| (cx + dx, cy + dy))
            .collect(),
    }
}

fn midpoint(b: &Board, cell: usize, slot: u8) -> (f64, f64) {
    let (cx, cy) = b.center(cell);
    let a = slot_angle(b.geometry(), slot);
    (cx + b.apothem() * a.cos(), cy + b.apothem() * a.sin())
}

fn chord_end(b: &Board, cell: usize, slot: u8) -> (f64, f64) {
    let (cx, cy) = b.center(cell);
    let (x, y) = chord_point(b.geometry(), slot);
    (cx + b.apothem() * x, cy + b.apothem() * y)
}

/// Path data for one tile crossing from `entry` to `exit`, skipping the
/// parameter intervals in `gaps` (0 at `entry`).
fn chord_segments(b: &Board, cell: usize, entry: u8, exit: u8, gaps: &[f64], d: &mut String, pen_down: &mut bool) {
    let p0 = chord_end(b, cell, entry);
    let p1 = chord_end(b, cell, exit);
    let lerp = |t: f64| (p0.0 + t * (p1.0 - p0.0), p0.1 + t * (p1.1 - p0.1));
    let line_to = |p: (f64, f64), d: &mut String, pen: &mut bool| {
        let (x, y) = to_svg(p);
        let cmd = if *pen { 'L' } else { 'M' };
        let _ = write!(d, "{cmd}{x:.2},{y:.2} ");
        *pen = true;
    };
    line_to(midpoint(b, cell, entry), d, pen_down);
    line_to(p0, d, pen_down);
    let len = ((p1.0 - p0.0).powi(2) + (p1.1 - p0.1).powi(2)).sqrt();
    let half = GAP / len;
    let mut sorted = gaps.to_vec();
    sorted.sort_by(f64::total_cmp);
    for t in sorted {
        line_to(lerp((t - half).max(0.0)), d, pen_down);
        *pen_down = false;
        line_to(lerp((t + half).min(1.0)), d, pen_down);
    }
    line_to(p1, d, pen_down);
    line_to(midpoint(b, cell, exit), d, pen_down);
}

/// Crossing parameters along strand `strand` of `face` walked from slot
/// `entry`, where that strand passes under.
fn under_params(face: &TileFace, strand: usize, entry: u8) -> Vec<f64> {
    let dr = Drawing::of(face);
    let forward = face.strands()[strand].0 == entry;
    face.crossings()
        .into_iter()
        .filter_map(|(i, j)| {
            let other = if i == strand {
                j
            } else if j == strand {
                i
            } else {
                return None;
            };
            if face.is_over(strand, other) {
                return None;
            }
            let t = dr.param(strand, other);
            Some(if forward { t } else { 1.0 - t })
        })
        .collect()
}

/// SVG picture: tile outlines, one `path` per link component with gaps where
/// it passes under, and optionally the complement as dashed paths beneath.
pub fn svg(m: &Mosaic, overlay: Option<&ComplementDecomposition>) -> String {
    let b = m.board();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for c in 0..b.len() {
        for p in tile_outline(b, c) {
            let (x, y) = to_svg(p);
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
    }
    let pad = 8.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.2} {:.2} {:.2} {:.2}">"#,
        x0 - pad,
        y0 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad
    );
    let _ = writeln!(
        out,
        r##"<g class="grid" fill="none" stroke="#bbbbbb" stroke-width="1">"##
    );
    for c in 0..b.len() {
        let pts: Vec<String> = tile_outline(b, c)
            .into_iter()
            .map(|p| {
                let (x, y) = to_svg(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(out, r#"<polygon class="tile" points="{}"/>"#, pts.join(" "));
    }
    let _ = writeln!(out, "</g>");
    if let Some(comp) = overlay {
        let _ = writeln!(
            out,
            r##"<g class="complement" fill="none" stroke="#3b6fd8" stroke-width="2" stroke-dasharray="4 3">"##
        );
        for (k, c) in comp.components.iter().enumerate() {
            let mut d = String::new();
            let mut pen = false;
            for p in &c.pieces {
                let (s0, s1) = (midpoint(b, p.cell, p.entry), midpoint(b, p.cell, p.exit));
                for q in [s0, s1] {
                    let (x, y) = to_svg(q);
                    let _ = write!(d, "{}{x:.2},{y:.2} ", if pen { 'L' } else { 'M' });
                    pen = true;
                }
            }
            let _ = writeln!(
                out,
                r#"<path class="complement" data-component="{k}" d="{}"/>"#,
                d.trim_end()
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let d = extract_unchecked(m);
    let _ = writeln!(
        out,
        r##"<g class="link" fill="none" stroke="#2f8f3a" stroke-width="3" stroke-linecap="round">"##
    );
    for (k, walk) in d.components.iter().enumerate() {
        let mut path = String::new();
        let mut pen = false;
        let mut gaps = 0;
        for s in walk {
            let face = m.face(s.cell);
            let params = under_params(face, s.strand, s.entry);
            gaps += params.len();
            chord_segments(b, s.cell, s.entry, s.exit, &params, &mut path, &mut pen);
        }
        let _ = writeln!(
            out,
            r#"<path class="strand" data-component="{k}" data-gaps="{gaps}" d="{}"/>"#,
            path.trim_end()
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

/// Tile codes laid out row by row, hexagonal rows offset to show the stagger.
pub fn ascii(m: &Mosaic) -> String {
    let b = m.board();
    let width = (0..b.len()).map(|c| m.face(c).code().len()).max().unwrap_or(1);
    let longest = (1..=b.rows()).map(|r| b.row_len(r)).max().unwrap_or(0);
    let mut out = String::new();
    for row in 1..=b.rows() {
        let indent = match b.geometry() {
            Geometry::Hex => (longest - b.row_len(row)) * (width + 1) / 2,
            Geometry::Rect => 0,
        };
        out.push_str(&" ".repeat(indent));
        let codes: Vec<String> = (1..=b.row_len(row))
            .map(|col| {
                let c = b.row_col_index(row, col).unwrap();
                format!("{:<width$}", m.face(c).code())
            })
            .collect();
        out.push_str(codes.join(" ").trim_end());
        out.push('\n');
    }
    out
}
