//! SVG picture of the fundamental domain with the lifts of a closed geodesic.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::oracle::{OracleError, SchottkyConfig};
use crate::word::{CyclicWord, Letter};

const SIZE: f64 = 640.0;
const RADIUS: f64 = 300.0;

fn px(x: f64, y: f64) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * x, SIZE / 2.0 - RADIUS * y)
}

fn at(theta: f64) -> (f64, f64) {
    px(theta.cos(), theta.sin())
}

/// Path segment along the geodesic between two ideal points, assuming the
/// pen already sits at `from`.
fn geodesic_segment(from: f64, to: f64) -> String {
    let ccw = (to - from).rem_euclid(2.0 * PI);
    let (x, y) = at(to);
    if (ccw - PI).abs() < 1e-9 {
        return format!(" L {x:.3} {y:.3}");
    }
    let span = if ccw < PI { ccw } else { 2.0 * PI - ccw };
    let r = RADIUS * (span / 2.0).tan();
    // y points down, so a short counterclockwise hop is sweep 1
    let sweep = u8::from(ccw < PI);
    format!(" A {r:.3} {r:.3} 0 0 {sweep} {x:.3} {y:.3}")
}

fn circle_segment(to: f64, ccw_span: f64) -> String {
    let (x, y) = at(to);
    let large = u8::from(ccw_span > PI);
    format!(" A {RADIUS:.3} {RADIUS:.3} 0 {large} 0 {x:.3} {y:.3}")
}

/// Boundary of the fundamental domain: bisector arcs joined by the free
/// arcs of the circle between consecutive half-spaces.
fn domain_path(cfg: &SchottkyConfig) -> String {
    let arr = cfg.kind.arrangement();
    let first = cfg.arc(arr[0]);
    let (x, y) = at(first.start());
    let mut d = format!("M {x:.3} {y:.3}");
    for (n, &e) in arr.iter().enumerate() {
        let arc = cfg.arc(e);
        let next = cfg.arc(arr[(n + 1) % 4]);
        d.push_str(&geodesic_segment(arc.start(), arc.end()));
        let gap = (next.start() - arc.end()).rem_euclid(2.0 * PI);
        d.push_str(&circle_segment(next.start(), gap));
    }
    d.push_str(" Z");
    d
}

/// SVG document for `w` on the surface of `cfg`.
///
/// Every lift crossing the domain is a `path.lift`; crossings of two lifts
/// are `circle.crossing`, with class `in-p` when the point lies in the
/// fundamental domain (those are the self-intersections).
pub fn render_svg(cfg: &SchottkyConfig, w: &CyclicWord) -> Result<String, OracleError> {
    let crossings = cfg.intersection_points(w)?;
    let axes = cfg.lift_axes(w);
    let mut s = String::new();
    let c = SIZE / 2.0;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{} on the {}</title>", w, cfg.kind);
    let _ = writeln!(
        s,
        "<style>.domain{{fill:#dde6f2;stroke:none}} .bisector{{fill:none;stroke:#345;stroke-width:1.5}} \
         .lift{{fill:none;stroke:#b22;stroke-width:1.2}} .in-p{{fill:#111}} .out-p{{fill:#999}} \
         .boundary{{fill:none;stroke:#000;stroke-width:1}} text{{font:12px sans-serif}}</style>"
    );
    let _ = writeln!(s, r#"<path class="domain" d="{}"/>"#, domain_path(cfg));
    let _ = writeln!(s, r#"<circle class="boundary" cx="{c}" cy="{c}" r="{RADIUS}"/>"#);
    for e in Letter::ALL {
        let arc = cfg.arc(e);
        let (x, y) = at(arc.start());
        let _ = writeln!(
            s,
            r#"<path class="bisector" data-letter="{}" d="M {x:.3} {y:.3}{}"/>"#,
            e,
            geodesic_segment(arc.start(), arc.end())
        );
        let (lx, ly) = px(1.06 * arc.center.cos(), 1.06 * arc.center.sin());
        let _ = writeln!(s, r#"<text x="{lx:.3}" y="{ly:.3}" text-anchor="middle">D({e})</text>"#);
    }
    for (n, g) in axes.iter().enumerate() {
        let (x, y) = at(g.backward.angle);
        let _ = writeln!(
            s,
            r#"<path class="lift" data-index="{}" d="M {x:.3} {y:.3}{}"/>"#,
            n + 1,
            geodesic_segment(g.backward.angle, g.forward.angle)
        );
    }
    for cr in &crossings {
        let (x, y) = px(cr.point.x, cr.point.y);
        let class = if cr.in_domain { "in-p" } else { "out-p" };
        let _ = writeln!(
            s,
            r#"<circle class="crossing {class}" data-pair="{},{}" cx="{x:.3}" cy="{y:.3}" r="3"/>"#,
            cr.i, cr.j
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
