//! Deterministic SVG figures. Every number is printed with three decimals
//! so the same input always yields the same bytes.

use std::fmt::Write;

use vantage::enumeration::arrangement_cells;
use vantage::geometry::CandidateSet;
use vantage::scalar::Rational;
use vantage::witnesses::six_point_config;
use vantage::Error;

use crate::output::CliResult;

const SIZE: f64 = 480.0;
const PALETTE: [&str; 3] = ["#1f4e9c", "#c0392b", "#2e8b57"];

/// Maps a square world window onto the canvas, y pointing up.
struct View {
    x0: f64,
    y0: f64,
    span: f64,
}

impl View {
    fn fit(pts: &[[f64; 2]], margin: f64) -> View {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in pts {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9) * (1.0 + 2.0 * margin);
        View {
            x0: (lo[0] + hi[0]) / 2.0 - span / 2.0,
            y0: (lo[1] + hi[1]) / 2.0 - span / 2.0,
            span,
        }
    }

    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        ((p[0] - self.x0) / self.span * SIZE, SIZE - (p[1] - self.y0) / self.span * SIZE)
    }

    fn corners(&self) -> Vec<[f64; 2]> {
        let (a, b, s) = (self.x0, self.y0, self.span);
        vec![[a, b], [a + s, b], [a + s, b + s], [a, b + s]]
    }
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
         <title>{title}</title>\n<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    )
}

fn dot(out: &mut String, view: &View, p: [f64; 2], color: &str, label: &str) {
    let (x, y) = view.px(p);
    let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4.000\" fill=\"{color}\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" font-family=\"sans-serif\">{label}</text>",
        x + 6.0,
        y - 6.0
    );
}

fn planar(c: &CandidateSet) -> CliResult<Vec<[f64; 2]>> {
    if c.dim() != 2 {
        return Err(Error::Domain(format!("plots need planar points, got dimension {}", c.dim())).into());
    }
    Ok(c.points().iter().map(|p| {
        let v = p.to_f64();
        [v[0], v[1]]
    }).collect())
}

pub fn six_point() -> String {
    let pts: Vec<[f64; 2]> = six_point_config().iter().map(|[x, y]| [x.mid(), y.mid()]).collect();
    let view = View::fit(&pts, 0.15);
    let mut out = header("six-point configuration");
    for (tri, color) in [(&pts[..3], PALETTE[0]), (&pts[3..], PALETTE[1])] {
        let path: Vec<String> = tri.iter().map(|&p| view.px(p)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(out, "<polygon points=\"{}\" fill=\"none\" stroke=\"{color}\"/>", path.join(" "));
    }
    for (i, p) in pts.iter().enumerate() {
        let (color, label) = if i < 3 { (PALETTE[0], format!("c{}", i + 1)) } else { (PALETTE[1], format!("c'{}", i - 2)) };
        dot(&mut out, &view, *p, color, &label);
    }
    out.push_str("</svg>\n");
    out
}

pub fn points(c: &CandidateSet) -> CliResult<String> {
    let pts = planar(c)?;
    let view = View::fit(&pts, 0.15);
    let mut out = header("candidate points");
    for (i, p) in pts.iter().enumerate() {
        dot(&mut out, &view, *p, PALETTE[0], &i.to_string());
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Keeps the part of `poly` where `a·x + b·y + c` has the sign of `side`.
fn clip(poly: &[[f64; 2]], (a, b, c): (f64, f64, f64), side: f64) -> Vec<[f64; 2]> {
    let f = |p: &[f64; 2]| side * (a * p[0] + b * p[1] + c);
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fq) = (f(&p), f(&q));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

pub fn bisectors(c: &CandidateSet) -> CliResult<String> {
    let pts = planar(c)?;
    let (lines, cells) = arrangement_cells(c)?;
    let view = View::fit(&pts, 0.6);
    let eqs: Vec<(f64, f64, f64)> = lines
        .iter()
        .map(|l| (to_f64(&l.normal[0]), to_f64(&l.normal[1]), to_f64(&l.offset)))
        .collect();
    let mut out = header("bisector arrangement");
    for (i, cell) in cells.iter().enumerate() {
        let poly = cell
            .constraints
            .iter()
            .fold(view.corners(), |poly, &(id, side)| clip(&poly, eqs[id], side as f64));
        if poly.len() < 3 {
            continue;
        }
        let path: Vec<String> = poly.iter().map(|&p| view.px(p)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let shade = 235 - (i * 37 % 60) as u8;
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"rgb({shade},{shade},250)\" stroke=\"none\"/>",
            path.join(" ")
        );
    }
    for &eq in &eqs {
        let seg = clip_line(&view, eq);
        if let Some([p, q]) = seg {
            let ((x1, y1), (x2, y2)) = (view.px(p), view.px(q));
            let _ = writeln!(
                out,
                "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"#555555\"/>"
            );
        }
    }
    for (i, p) in pts.iter().enumerate() {
        dot(&mut out, &view, *p, PALETTE[1], &i.to_string());
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// The segment of `a·x + b·y + c = 0` inside the view window.
fn clip_line(view: &View, (a, b, c): (f64, f64, f64)) -> Option<[[f64; 2]; 2]> {
    let corners = view.corners();
    let mut hits = Vec::new();
    for i in 0..4 {
        let (p, q) = (corners[i], corners[(i + 1) % 4]);
        let (fp, fq) = (a * p[0] + b * p[1] + c, a * q[0] + b * q[1] + c);
        if fp == 0.0 {
            hits.push(p);
        } else if (fp > 0.0) != (fq > 0.0) && fq != 0.0 {
            let t = fp / (fp - fq);
            hits.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    (hits.len() >= 2).then(|| [hits[0], hits[1]])
}

fn to_f64(r: &Rational) -> f64 {
    vantage::Interval::from_rational(r).mid()
}

/// Points on a line with `x ↦ sign(x)·log₁₀(1 + |x|)`, coloured by part.
pub fn flanked(c: &CandidateSet, parts: [usize; 3]) -> CliResult<String> {
    if c.dim() != 1 {
        return Err(Error::Domain("flanked plots are one-dimensional".into()).into());
    }
    let xs: Vec<f64> = c
        .points()
        .iter()
        .map(|p| {
            let x = to_f64(p.coord(0));
            x.signum() * (1.0 + x.abs()).log10()
        })
        .collect();
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(1e-9);
    let px = |x: f64| 20.0 + (x - lo) / span * (SIZE - 40.0);
    let mut out = header("flanked configuration (log-compressed)");
    let mid = SIZE / 2.0;
    let _ = writeln!(
        out,
        "<line x1=\"10.000\" y1=\"{mid:.3}\" x2=\"{:.3}\" y2=\"{mid:.3}\" stroke=\"#999999\"/>",
        SIZE - 10.0
    );
    let names = ["C'", "C1", "C2"];
    let mut start = 0;
    for (part, &len) in parts.iter().enumerate() {
        for (j, &x) in xs[start..start + len].iter().enumerate() {
            let y = mid - 12.0 * (1 + j % 4) as f64 * if part == 0 { 1.0 } else { -1.0 };
            let _ = writeln!(
                out,
                "<circle cx=\"{:.3}\" cy=\"{y:.3}\" r=\"3.000\" fill=\"{}\"/>",
                px(x),
                PALETTE[part]
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" font-family=\"sans-serif\" fill=\"{}\">{}</text>",
            20.0 + 60.0 * part as f64,
            20.0,
            PALETTE[part],
            names[part]
        );
        start += len;
    }
    out.push_str("</svg>\n");
    Ok(out)
}
