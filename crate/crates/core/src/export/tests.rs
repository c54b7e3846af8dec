use super::*;
use crate::corpus::GENEALOGY;
use crate::erd::Shape;
use crate::parser::parse_schema;
use crate::rea2::{rea2, Rea2Request};

fn model(req: Rea2Request) -> ErModel {
    let s = parse_schema(GENEALOGY).unwrap().schema;
    rea2(&s, &req).unwrap().model
}

#[test]
fn rulers_dot() {
    let dot = to_dot(&model(Rea2Request::single("RULERS")), &ExportOptions::default());
    assert_eq!(dot.matches("shape=box").count(), 1);
    assert_eq!(dot.matches("shape=ellipse").count(), 7);
    assert!(dot.contains("\"RULERS__x\" [shape=ellipse, label=<<U>x</U>>];"));
    assert!(dot.contains("\"RULERS__Age\" [shape=ellipse, label=\"Age\", style=dotted];"));
    assert_eq!(dot.matches("label=\"").count(), 6);
    assert!(!dot.contains("-> \"RULERS\""));
    assert!(dot.ends_with("}\n"));
}

#[test]
fn whole_model_dot() {
    let dot = to_dot(
        &model(Rea2Request::whole_model()),
        &ExportOptions {
            rankdir: RankDir::TB,
            ..Default::default()
        },
    );
    assert!(dot.contains("rankdir=TB;"));
    assert_eq!(dot.matches("shape=box").count(), 7);
    let arrows: Vec<&str> = dot
        .lines()
        .filter(|l| l.contains("-> ") && !l.contains("dir=none"))
        .collect();
    assert_eq!(arrows.len(), 16);
    assert_eq!(
        arrows
            .iter()
            .filter(|l| l.starts_with("  \"RULERS\" -> \"RULERS\""))
            .count(),
        3
    );
    assert!(dot.contains("\"COUNTRIES\" -> \"CITIES\" [label=\"Capital (1-1)\", arrowhead=normalnormal];"));
}

#[test]
fn empty_model_exports() {
    let m = ErModel::new();
    assert_eq!(
        to_dot(&m, &ExportOptions::default()),
        "digraph ER {\n  rankdir=LR;\n}\n"
    );
    assert_eq!(
        to_markdown(&m, &ExportOptions::new(Format::Markdown)),
        "# Restriction set\n"
    );
    assert_eq!(from_json(&to_json(&m)).unwrap(), m);
}

#[test]
fn headers_only_without_restrictions() {
    let mut m = ErModel::new();
    m.add_node("A", Shape::Rectangle, false).unwrap();
    let md = to_markdown(&m, &ExportOptions::new(Format::Markdown));
    assert_eq!(
        md,
        "# Restriction set\n\n## A\n\na. Maximum cardinality: unbounded\n\nb. Data ranges:\n\nc. Compulsory data:\n\n\
         d. Uniqueness:\n\ne. Other types of restrictions:\n"
    );
}

#[test]
fn rulers_markdown_items() {
    let md = to_markdown(
        &model(Rea2Request::single("RULERS")),
        &ExportOptions::new(Format::Markdown),
    );
    assert!(md.contains("a. max(card(RULERS)) = 10^16\n"));
    assert!(md.contains("- Sex: {'M', 'F', 'N'}\n"));
    assert!(md.contains("c. Compulsory data: x, Name, Sex\n"));
    assert!(md.contains("- Founder (Nobody founds more than one dynasty.)\n"));
    assert!(md.contains("- Mother acyclic (Nobody may be his/her maternal ancestor or descendant.)\n"));
    assert!(md.contains("# Informal description"));
    let bare = to_markdown(
        &model(Rea2Request::single("RULERS")),
        &ExportOptions {
            format: Format::Markdown,
            include_informal: false,
            ..Default::default()
        },
    );
    assert!(!bare.contains("Informal"));
}

#[test]
fn json_round_trip_and_category_names() {
    let m = model(Rea2Request::whole_model());
    let text = to_json(&m);
    assert_eq!(from_json(&text).unwrap(), m);
    for name in ["max-cardinality", "data-range", "compulsory", "uniqueness", "other"] {
        assert!(text.contains(&format!("\"category\": \"{name}\"")), "{name}");
    }
}

#[test]
fn quoting() {
    let mut m = ErModel::new();
    m.add_node("A\"B", Shape::Diamond, true).unwrap();
    m.add_ellipse("A\"B", "<k>", false, true).unwrap();
    let dot = to_dot(&m, &ExportOptions::default());
    assert!(dot.contains("\"A\\\"B\" [shape=diamond, style=dotted];"));
    assert!(dot.contains("label=<<U>&lt;k&gt;</U>>"));
}

#[test]
fn format_names() {
    assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
    assert_eq!("DOT".parse::<Format>().unwrap(), Format::Dot);
    assert!("svg".parse::<Format>().is_err());
    assert_eq!(Format::Json.extension(), "json");
    assert_eq!("tb".parse::<RankDir>().unwrap(), RankDir::TB);
}
