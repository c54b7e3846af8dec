use std::fmt::Write as _;

use super::{ExportOptions, RankDir};
use crate::erd::{AttributeEllipse, ErModel, Shape};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn html_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn ellipse_id(set: &str, attr: &str) -> String {
    quote(&format!("{set}__{attr}"))
}

fn ellipse_attrs(e: &AttributeEllipse) -> String {
    let label = if e.underlined {
        format!("<<U>{}</U>>", html_escape(&e.label))
    } else {
        quote(&e.label)
    };
    let mut attrs = format!("shape=ellipse, label={label}");
    if e.dotted {
        attrs.push_str(", style=dotted");
    }
    attrs
}

pub fn to_dot(model: &ErModel, options: &ExportOptions) -> String {
    let rankdir = match options.rankdir {
        RankDir::LR => "LR",
        RankDir::TB => "TB",
    };
    let mut out = String::from("digraph ER {\n");
    let _ = writeln!(out, "  rankdir={rankdir};");
    for n in model.nodes() {
        let shape = match n.shape {
            Shape::Rectangle => "box",
            Shape::Diamond => "diamond",
        };
        let style = if n.dotted { ", style=dotted" } else { "" };
        let _ = writeln!(out, "  {} [shape={shape}{style}];", quote(&n.label));
        for e in &n.ellipses {
            let _ = writeln!(out, "  {} [{}];", ellipse_id(&n.label, &e.label), ellipse_attrs(e));
            let style = if e.dotted { ", style=dotted" } else { "" };
            let _ = writeln!(
                out,
                "  {} -> {} [dir=none{style}];",
                quote(&n.label),
                ellipse_id(&n.label, &e.label)
            );
        }
    }
    for e in model.edges() {
        let mut attrs = if e.double_arrow {
            format!("label={}, arrowhead=normalnormal", quote(&format!("{} (1-1)", e.label)))
        } else {
            format!("label={}", quote(&e.label))
        };
        if e.dotted {
            attrs.push_str(", style=dotted");
        }
        let _ = writeln!(out, "  {} -> {} [{attrs}];", quote(&e.from), quote(&e.to));
    }
    out.push_str("}\n");
    out
}
