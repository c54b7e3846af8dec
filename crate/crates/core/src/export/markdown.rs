use std::fmt::Write as _;

use super::ExportOptions;
use crate::erd::{Category, ErModel, Restriction};

fn item(r: &Restriction) -> String {
    match &r.comment {
        Some(c) => format!("{} ({c})", r.text),
        None => r.text.clone(),
    }
}

fn list(out: &mut String, header: &str, items: &[&Restriction]) {
    let _ = writeln!(out, "{header}\n");
    for r in items {
        let _ = writeln!(out, "- {}", item(r));
    }
    if !items.is_empty() {
        out.push('\n');
    }
}

/// One section per diagram node, restrictions grouped a. to e.
pub fn to_markdown(model: &ErModel, options: &ExportOptions) -> String {
    let mut out = String::from("# Restriction set\n");
    for node in model.nodes() {
        let _ = writeln!(out, "\n## {}\n", node.label);
        let of = |c: Category| -> Vec<&Restriction> {
            model.restrictions_of(&node.label).filter(|r| r.category == c).collect()
        };
        match of(Category::MaxCardinality).first() {
            Some(r) => {
                let _ = writeln!(out, "a. {}\n", item(r));
            }
            None => out.push_str("a. Maximum cardinality: unbounded\n\n"),
        }
        list(&mut out, "b. Data ranges:", &of(Category::DataRange));
        let compulsory: Vec<String> = of(Category::Compulsory).iter().map(|r| item(r)).collect();
        if compulsory.is_empty() {
            out.push_str("c. Compulsory data:\n\n");
        } else {
            let _ = writeln!(out, "c. Compulsory data: {}\n", compulsory.join(", "));
        }
        list(&mut out, "d. Uniqueness:", &of(Category::Uniqueness));
        list(&mut out, "e. Other types of restrictions:", &of(Category::Other));
    }
    if options.include_informal && !model.informal().is_empty() {
        while out.ends_with("\n\n") {
            out.pop();
        }
        out.push_str("\n# Informal description\n\n");
        for e in model.informal() {
            let _ = writeln!(out, "- **{}**: {}", e.subject, e.text);
        }
    }
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}
