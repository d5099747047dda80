//! SVG rendering of a Neumann partition: filled faces, separatrices,
//! boundary, and one glyph per critical point (filled disk for a maximum,
//! open disk for a minimum, cross for a saddle).

use std::fmt::Write;

use crate::complex::{FaceClass, NeumannComplex};
use crate::critical::{CircleKind, CriticalKind};
use crate::eigenfield::EigenField;
use crate::geometry::Point;

/// Pixel size of one unit of length.
const SCALE: f64 = 400.0;
const BOUNDARY_SAMPLES: usize = 720;

struct Frame {
    lo: Point,
    hi: Point,
}

impl Frame {
    fn map(&self, p: Point) -> (f64, f64) {
        ((p.x - self.lo.x) * SCALE, (self.hi.y - p.y) * SCALE)
    }

    fn path(&self, pts: &[Point], close: bool) -> String {
        let mut d = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, x, y);
        }
        if close {
            d.push_str(" Z");
        }
        d
    }
}

/// SVG document for `complex`, built from `field`.
pub fn render_svg(field: &EigenField, complex: &NeumannComplex) -> String {
    let (lo, hi) = field.domain().bounding_box();
    let pad = Point::new(0.05, 0.05);
    let frame = Frame {
        lo: lo - pad,
        hi: hi + pad,
    };
    let (w, h) = (
        (frame.hi.x - frame.lo.x) * SCALE,
        (frame.hi.y - frame.lo.y) * SCALE,
    );
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(
        s,
        "<style>.face-boundary{{fill:#dbe8f5}} .face-interior{{fill:#f5e3c8}} \
         .separatrix{{fill:none;stroke:#204080;stroke-width:1.5}} \
         .domain{{fill:none;stroke:#000;stroke-width:2}} \
         .critical-circle{{fill:none;stroke:#802020;stroke-width:1.5;stroke-dasharray:4 3}} \
         .max{{fill:#000}} .min{{fill:#fff;stroke:#000;stroke-width:1.5}} \
         .saddle{{stroke:#000;stroke-width:2}} .degenerate{{fill:#c00}}</style>"
    );
    let _ = writeln!(
        s,
        "<title>{} mode {} eigenvalue {:.10}</title>",
        field.spec().label(),
        field.index(),
        field.eigenvalue()
    );

    s.push_str("<g id=\"faces\">\n");
    for (i, f) in complex.faces.iter().enumerate() {
        let class = match f.class {
            FaceClass::BoundaryNd => "face-boundary",
            FaceClass::InteriorNd => "face-interior",
        };
        let mut d = frame.path(f.outline(), true);
        for hole in f.hole_outlines() {
            d.push(' ');
            d.push_str(&frame.path(hole, true));
        }
        let _ = writeln!(s, r#"<path id="face-{i}" class="{class}" fill-rule="evenodd" d="{d}"/>"#);
    }
    s.push_str("</g>\n<g id=\"separatrices\">\n");
    for (i, e) in complex.edges.iter().enumerate() {
        if e.is_separatrix() {
            let _ = writeln!(s, r#"<path id="edge-{i}" class="separatrix" d="{}"/>"#, frame.path(&e.polyline, false));
        }
    }
    s.push_str("</g>\n<g id=\"boundary\">\n");
    for c in field.domain().boundary() {
        let pts: Vec<Point> = (0..BOUNDARY_SAMPLES)
            .map(|i| c.position(std::f64::consts::TAU * i as f64 / BOUNDARY_SAMPLES as f64))
            .collect();
        let _ = writeln!(s, r#"<path class="domain" d="{}"/>"#, frame.path(&pts, true));
    }
    for c in &complex.critical.circles {
        let (x, y) = frame.map(c.center);
        let kind = match c.kind {
            CircleKind::MaxCurve => "max-curve",
            CircleKind::MinCurve => "min-curve",
            CircleKind::Degenerate => "degenerate-curve",
        };
        let _ = writeln!(
            s,
            r#"<circle class="critical-circle {kind}" cx="{x:.2}" cy="{y:.2}" r="{:.2}"/>"#,
            c.radius * SCALE
        );
    }
    s.push_str("</g>\n<g id=\"critical\">\n");
    let r = 5.0;
    for (i, p) in complex.critical.points.iter().enumerate() {
        let (x, y) = frame.map(p.location);
        let _ = match p.kind {
            CriticalKind::Max => writeln!(s, r#"<circle id="cp-{i}" class="max" cx="{x:.2}" cy="{y:.2}" r="{r}"/>"#),
            CriticalKind::Min => writeln!(s, r#"<circle id="cp-{i}" class="min" cx="{x:.2}" cy="{y:.2}" r="{r}"/>"#),
            CriticalKind::Saddle => writeln!(
                s,
                r#"<path id="cp-{i}" class="saddle" d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}"/>"#,
                x - r,
                y - r,
                x + r,
                y + r,
                x - r,
                y + r,
                x + r,
                y - r
            ),
            CriticalKind::Degenerate => writeln!(
                s,
                r#"<rect id="cp-{i}" class="degenerate" x="{:.2}" y="{:.2}" width="{}" height="{}"/>"#,
                x - r,
                y - r,
                2.0 * r,
                2.0 * r
            ),
        };
    }
    s.push_str("</g>\n</svg>\n");
    s
}
