//! A plain circular layout; good enough for the few sets of a demo schema.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use emdm_er::erd::{ErModel, Shape};

const W: f64 = 120.0;
const H: f64 = 44.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn dash(dotted: bool) -> &'static str {
    if dotted {
        " stroke-dasharray=\"4 3\""
    } else {
        ""
    }
}

/// Loops alternate between the two sides of a node facing away from the
/// drawing's middle, each new pair reaching further out.
/// Returns the path and the label anchor.
fn self_loop(x: f64, y: f64, nth: usize, outward: (f64, f64)) -> (String, f64, f64) {
    let mut sides = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
    if outward.0.abs() + outward.1.abs() > 1e-6 {
        sides.sort_by(|a: &(f64, f64), b| {
            (b.0 * outward.0 + b.1 * outward.1).total_cmp(&(a.0 * outward.0 + a.1 * outward.1))
        });
    }
    let reach = 40.0 + 30.0 * (nth / 2) as f64;
    let (ux, uy) = sides[nth % 2];
    // start and end on the chosen side, a little apart along it
    let (hx, hy) = (ux * W / 2.0, uy * H / 2.0);
    let (px, py) = (-uy * 10.0, ux * 10.0);
    let (sx, sy, ex, ey) = (x + hx - px, y + hy - py, x + hx + px, y + hy + py);
    let (c1x, c1y) = (sx + ux * reach - px * 2.5, sy + uy * reach - py * 2.5);
    let (c2x, c2y) = (ex + ux * reach + px * 2.5, ey + uy * reach + py * 2.5);
    let path = format!("M{sx:.1},{sy:.1} C{c1x:.1},{c1y:.1} {c2x:.1},{c2y:.1} {ex:.1},{ey:.1}");
    let (lx, ly) = (
        x + hx + ux * (reach * 0.75 + 8.0),
        y + hy + uy * (reach * 0.75 + 8.0) + 4.0,
    );
    let lx = lx + ux * 20.0;
    (path, lx, ly)
}

pub fn render<'a>(model: &'a ErModel, show_attributes: bool) -> String {
    let n = model.nodes().len();
    let ring = if n <= 1 {
        0.0
    } else {
        (n as f64 * (W + 60.0) / (2.0 * PI)).max(160.0)
    };
    let margin = if show_attributes { 230.0 } else { 130.0 };
    let size = 2.0 * (ring + margin);
    let c = size / 2.0;
    let pos: HashMap<&str, (f64, f64)> = model
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let a = 2.0 * PI * i as f64 / n.max(1) as f64 - PI / 2.0;
            (node.label.as_str(), (c + ring * a.cos(), c + ring * a.sin()))
        })
        .collect();

    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size:.0} {size:.0}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    out.push_str(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" \
         orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker>\
         <marker id=\"arrow2\" viewBox=\"0 0 18 10\" refX=\"18\" refY=\"5\" markerWidth=\"14\" markerHeight=\"8\" \
         orient=\"auto\"><path d=\"M0,0 L8,5 L0,10 z M8,0 L16,5 L8,10 z\"/></marker></defs>",
    );

    // arrows between one pair of sets, either way round, fan out symmetrically
    let pair = |a: &'a str, b: &'a str| if a <= b { (a, b) } else { (b, a) };
    let mut total: HashMap<(&str, &str), usize> = HashMap::new();
    for e in model.edges() {
        *total.entry(pair(&e.from, &e.to)).or_default() += 1;
    }
    let mut seen: HashMap<(&str, &str), usize> = HashMap::new();
    let mut labels = String::new();
    for e in model.edges() {
        let (x1, y1) = pos[e.from.as_str()];
        let (x2, y2) = pos[e.to.as_str()];
        let key = pair(&e.from, &e.to);
        let k = seen.entry(key).or_default();
        let nth = *k;
        *k += 1;
        let label = if e.double_arrow {
            format!("{} (1-1)", e.label)
        } else {
            e.label.clone()
        };
        let marker = if e.double_arrow { "arrow2" } else { "arrow" };
        let (path, lx, ly) = if e.is_self_loop() {
            self_loop(x1, y1, nth, (x1 - c, y1 - c))
        } else {
            let offset = nth as f64 - (total[&key] - 1) as f64 / 2.0;
            let sign = if e.from.as_str() == key.0 { 1.0 } else { -1.0 };
            let (dx, dy) = (x2 - x1, y2 - y1);
            let len = (dx * dx + dy * dy).sqrt().max(1.0);
            let bend = 70.0 * offset * sign;
            let (mx, my) = ((x1 + x2) / 2.0 - dy / len * bend, (y1 + y2) / 2.0 + dx / len * bend);
            // stop at the target's bounding box
            let t = 1.0
                - ((W / 2.0) / dx.abs().max(1e-9))
                    .min((H / 2.0) / dy.abs().max(1e-9))
                    .min(0.5);
            let (ex, ey) = (x1 + dx * t, y1 + dy * t);
            // labels of a bundle also slide along their curves
            let u = 0.5 + 0.15 * offset * sign;
            let at = |p0: f64, p1: f64, p2: f64| (1.0 - u) * (1.0 - u) * p0 + 2.0 * u * (1.0 - u) * p1 + u * u * p2;
            (
                format!("M{x1:.1},{y1:.1} Q{mx:.1},{my:.1} {ex:.1},{ey:.1}"),
                at(x1, mx, ex),
                at(y1, my, ey) - 4.0,
            )
        };
        let _ = write!(
            out,
            "<path d=\"{path}\" fill=\"none\" stroke=\"#333\"{} marker-end=\"url(#{marker})\"/>",
            dash(e.dotted)
        );
        // a white copy underneath keeps labels readable over crossing lines
        let _ = write!(
            labels,
            "<text x=\"{lx:.1}\" y=\"{ly:.1}\" text-anchor=\"middle\" fill=\"#fff\" stroke=\"#fff\" \
             stroke-width=\"4\">{label}</text>\
             <text x=\"{lx:.1}\" y=\"{ly:.1}\" text-anchor=\"middle\" fill=\"#06c\">{label}</text>",
            label = esc(&label)
        );
    }

    for node in model.nodes() {
        let (x, y) = pos[node.label.as_str()];
        if show_attributes && !node.ellipses.is_empty() {
            let m = node.ellipses.len() as f64;
            // a full ring for a lone set, otherwise an arc facing away from the middle
            let (from, span) = if n == 1 {
                (-PI / 2.0, 2.0 * PI)
            } else {
                ((y - c).atan2(x - c) - PI / 2.0, PI)
            };
            for (i, a) in node.ellipses.iter().enumerate() {
                let ang = if n == 1 {
                    from + span * i as f64 / m
                } else {
                    from + span * (i as f64 + 0.5) / m
                };
                let (ax, ay) = (x + (140.0 + 6.0 * m) * ang.cos(), y + (95.0 + 4.0 * m) * ang.sin());
                let rx = (a.label.chars().count() as f64 * 3.6 + 14.0).max(36.0);
                let deco = if a.underlined {
                    " text-decoration=\"underline\""
                } else {
                    ""
                };
                let _ = write!(
                    out,
                    "<line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{ax:.1}\" y2=\"{ay:.1}\" stroke=\"#999\"{}/>\
                     <ellipse cx=\"{ax:.1}\" cy=\"{ay:.1}\" rx=\"{rx:.0}\" ry=\"15\" fill=\"#fff\" stroke=\"#555\"{}/>\
                     <text x=\"{ax:.1}\" y=\"{:.1}\" text-anchor=\"middle\"{deco}>{}</text>",
                    dash(a.dotted),
                    dash(a.dotted),
                    ay + 4.0,
                    esc(&a.label)
                );
            }
        }
        match node.shape {
            Shape::Rectangle => {
                let _ = write!(
                    out,
                    "<rect class=\"entity\" x=\"{:.1}\" y=\"{:.1}\" width=\"{W}\" height=\"{H}\" fill=\"#fffbe6\" stroke=\"#333\"{}/>",
                    x - W / 2.0,
                    y - H / 2.0,
                    dash(node.dotted)
                );
            }
            Shape::Diamond => {
                let _ = write!(
                    out,
                    "<polygon class=\"relationship\" points=\"{:.1},{y:.1} {x:.1},{:.1} {:.1},{y:.1} {x:.1},{:.1}\" fill=\"#eef6ff\" stroke=\"#333\"{}/>",
                    x - W / 2.0 - 10.0,
                    y - H / 2.0 - 6.0,
                    x + W / 2.0 + 10.0,
                    y + H / 2.0 + 6.0,
                    dash(node.dotted)
                );
            }
        }
        let _ = write!(
            out,
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-weight=\"bold\">{}</text>",
            y + 4.0,
            esc(&node.label)
        );
    }
    out.push_str(&labels);
    out.push_str("</svg>");
    out
}
