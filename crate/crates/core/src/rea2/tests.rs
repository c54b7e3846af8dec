use super::*;
use crate::corpus::GENEALOGY;
use crate::erd::Shape;
use crate::parser::parse_schema;

fn genealogy() -> EmdmSchema {
    parse_schema(GENEALOGY).unwrap().schema
}

fn schema(src: &str) -> EmdmSchema {
    parse_schema(src).unwrap_or_else(|e| panic!("{e}")).schema
}

fn texts(model: &ErModel, category: Category) -> Vec<&str> {
    model
        .restrictions()
        .iter()
        .filter(|r| r.category == category)
        .map(|r| r.text.as_str())
        .collect()
}

const CHAIN: &str = "A\nx <-> NAT(2) total\nf -> B\nB\nx <-> NAT(2) total\ng -> C\nC\nx <-> NAT(2) total\n";

#[test]
fn single_erd_of_rulers() {
    let out = rea2(&genealogy(), &Rea2Request::sub_model("RULERS", 0)).unwrap();
    let m = &out.model;
    assert_eq!(m.nodes().len(), 1);
    let node = &m.nodes()[0];
    assert_eq!((node.shape, node.dotted), (Shape::Rectangle, false));
    let ellipses: Vec<(&str, bool)> = node.ellipses.iter().map(|e| (e.label.as_str(), e.dotted)).collect();
    assert_eq!(
        ellipses,
        [
            ("x", false),
            ("Name", false),
            ("Sex", false),
            ("BirthYear", false),
            ("PassedAwayYear", false),
            ("URL", false),
            ("Age", true)
        ]
    );
    assert!(node.ellipses[0].underlined);
    assert!(m.edges().is_empty());

    assert_eq!(texts(m, Category::MaxCardinality), ["max(card(RULERS)) = 10^16"]);
    assert_eq!(
        texts(m, Category::DataRange),
        [
            "Name: ASCII(255)",
            "Sex: {'M', 'F', 'N'}",
            "BirthYear: [-6500, CurrentYear()]",
            "PassedAwayYear: [-6500, CurrentYear()]",
            "URL: ASCII(255)"
        ]
    );
    assert_eq!(texts(m, Category::Compulsory), ["x", "Name", "Sex"]);
    let mut unique = texts(m, Category::Uniqueness);
    unique.sort();
    assert_eq!(unique, ["Founder", "Name • Dynasty • BirthYear"]);
    let other = texts(m, Category::Other);
    assert_eq!(other[0], "Age = isNull(PassedAwayYear, CurrentYear()) - BirthYear");
    assert_eq!(other[1..3], ["Mother acyclic", "Father acyclic"]);
    let labels: Vec<&str> = m
        .restrictions()
        .iter()
        .filter(|r| r.subject.starts_with("C_"))
        .map(|r| r.subject.as_str())
        .collect();
    let expected: Vec<String> = (3..=14).map(|i| format!("C_{i}")).collect();
    assert_eq!(labels, expected);
    assert_eq!(out.counters.max_body_runs(), 1);
}

#[test]
fn missing_radius_means_zero() {
    let s = genealogy();
    assert_eq!(
        rea2(&s, &Rea2Request::single("RULERS")).unwrap(),
        rea2(&s, &Rea2Request::sub_model("RULERS", 0)).unwrap()
    );
}

#[test]
fn unknown_and_value_centers() {
    let s = genealogy();
    let err = rea2(&s, &Rea2Request::single("PEOPLE")).unwrap_err();
    assert_eq!(err.to_string(), "Unknown set name PEOPLE!");
    let v = schema("VALUE SEXES = {'F', 'M'}\nA\n");
    assert_eq!(
        rea2(&v, &Rea2Request::single("SEXES")).unwrap_err(),
        Rea2Error::ValueSetCenter("SEXES".into())
    );
}

#[test]
fn radius_one_discovers_everything() {
    let s = genealogy();
    let one = rea2(&s, &Rea2Request::sub_model("RULERS", 1)).unwrap();
    let table = one.table.clone().unwrap();
    assert_eq!(table.rows()[0], ("RULERS".to_string(), 0));
    let mut rest: Vec<(&str, usize)> = table.rows()[1..].iter().map(|(s, l)| (s.as_str(), *l)).collect();
    rest.sort();
    assert_eq!(
        rest,
        [
            ("CITIES", 1),
            ("COUNTRIES", 1),
            ("DYNASTIES", 1),
            ("MARRIAGES", 1),
            ("REIGNS", 1),
            ("TITLES", 1)
        ]
    );
    let five = rea2(&s, &Rea2Request::sub_model("RULERS", 5)).unwrap();
    assert_eq!(five.table, one.table);
    assert_eq!(five.model, one.model);
}

#[test]
fn chain_radius_one_stops_at_b() {
    let s = schema(CHAIN);
    let out = rea2(&s, &Rea2Request::sub_model("A", 1)).unwrap();
    let rows: Vec<(&str, usize)> = out
        .table
        .as_ref()
        .unwrap()
        .rows()
        .iter()
        .map(|(s, l)| (s.as_str(), *l))
        .collect();
    assert_eq!(rows, [("A", 0), ("B", 1)]);
    assert!(out.model.node("C").is_none());
    assert_eq!(out.model.edges().len(), 1);
    // the boundary function still gets its restrictions and description
    assert!(out.model.has_informal("B.g"));
}

#[test]
fn spill_boundary_spills_one_hop() {
    let s = schema(CHAIN);
    let literal = Rea2Options { spill_boundary: true };
    let out = rea2_with(&s, &Rea2Request::sub_model("A", 1), literal).unwrap();
    assert!(out.model.node("C").is_some());
    assert_eq!(out.model.edges().len(), 2);
    assert_eq!(out.counters.max_body_runs(), 1);
}

#[test]
fn other_set_appends_once() {
    let mut t = SubModelTable::new("RULERS");
    assert!(t.other_set("CITIES", 1));
    assert!(!t.other_set("CITIES", 1));
    assert!(!t.other_set("RULERS", 1));
    assert!(t.other_set("COUNTRIES", 2));
    assert_eq!(t.level_of("COUNTRIES"), Some(2));
    assert_eq!(t.len(), 3);
}

#[test]
fn cardinal_counts_object_sets() {
    assert_eq!(compute_cardinal(&genealogy()), 7);
    assert_eq!(compute_cardinal(&EmdmSchema::default()), 0);
    assert_eq!(compute_cardinal(&schema(CHAIN)), 3);
}

#[test]
fn whole_genealogy_model() {
    let out = rea2(&genealogy(), &Rea2Request::whole_model()).unwrap();
    let m = &out.model;
    assert_eq!(m.nodes().len(), 7);
    assert!(m.nodes().iter().all(|n| n.shape == Shape::Rectangle && !n.dotted));
    assert_eq!(m.edges().len(), 16);
    let loops: Vec<&str> = m
        .edges()
        .iter()
        .filter(|e| e.is_self_loop())
        .map(|e| e.label.as_str())
        .collect();
    assert_eq!(loops, ["Mother", "Father", "KilledBy"]);
    let from_rulers = m.edges().iter().filter(|e| e.from == "RULERS").count();
    assert_eq!(from_rulers, 8);
    for i in 1..=26 {
        let label = format!("C_{i}");
        assert_eq!(
            m.restrictions().iter().filter(|r| r.subject == label).count(),
            1,
            "{label}"
        );
    }
    let capital = m.edges().iter().find(|e| e.label == "Capital").unwrap();
    assert!(capital.double_arrow);
    assert_eq!(out.counters.max_body_runs(), 1);
    assert!(out.table.is_none());
}

#[test]
fn relationship_at_radius_zero_brings_role_targets() {
    let s = schema(
        "PRODUCTS\nx <-> NAT(4) total\nWAREHOUSES\nx <-> NAT(2) total\nSTOCKS(p: PRODUCTS, w: WAREHOUSES)\n\
         Qty -> NAT(6) total\n",
    );
    let out = rea2(&s, &Rea2Request::single("STOCKS")).unwrap();
    let m = &out.model;
    assert_eq!(m.node("STOCKS").unwrap().shape, Shape::Diamond);
    assert_eq!(m.node("PRODUCTS").unwrap().shape, Shape::Rectangle);
    assert!(m.node("WAREHOUSES").is_some());
    let labels: Vec<&str> = m.edges().iter().map(|e| e.label.as_str()).collect();
    assert_eq!(labels, ["p", "w"]);
    assert_eq!(texts(m, Category::MaxCardinality)[0], "max(card(STOCKS)) = 10^6");
    assert!(texts(m, Category::Compulsory).contains(&"p"));
}

#[test]
fn computed_sets_are_dotted() {
    let s = schema(
        "A\nx <-> NAT(2) total\nB\nx <-> NAT(2) total\nCOMPUTED R(l: A, r: B) = A × B\nCOMPUTED C = {x ∈ A | x > 1}\n",
    );
    let out = rea2(&s, &Rea2Request::whole_model()).unwrap();
    let r = out.model.node("R").unwrap();
    assert_eq!((r.shape, r.dotted), (Shape::Diamond, true));
    let c = out.model.node("C").unwrap();
    assert_eq!((c.shape, c.dotted), (Shape::Rectangle, true));
}

#[test]
fn inclusions_draw_injections() {
    let s = schema("PEOPLE\nx <-> NAT(4) total\nKINGS SUBSETOF PEOPLE\n");
    let out = rea2(&s, &Rea2Request::sub_model("KINGS", 1)).unwrap();
    let e = &out.model.edges()[0];
    assert_eq!(
        (e.from.as_str(), e.to.as_str(), e.label.as_str()),
        ("KINGS", "PEOPLE", "⊆PEOPLE")
    );
    assert!(e.double_arrow);
    assert!(texts(&out.model, Category::Compulsory).contains(&"⊆PEOPLE"));
    assert!(texts(&out.model, Category::Uniqueness).contains(&"⊆PEOPLE"));
}

#[test]
fn plain_function_only_describes() {
    let s = schema("A\nB\nf : A -> B\n");
    let out = rea2(&s, &Rea2Request::whole_model()).unwrap();
    assert!(out.model.has_informal("A.f"));
    assert!(out.model.restrictions().iter().all(|r| r.subject != "A.f"));
}

#[test]
fn function_flags_become_restrictions() {
    let s = schema(
        "A\nx <-> NAT(2) total\nn -> NAT(3) default 7\nf : A -> A onto reflexive (Every a relates to itself.)\n",
    );
    let out = rea2(&s, &Rea2Request::whole_model()).unwrap();
    let other = texts(&out.model, Category::Other);
    assert!(other.contains(&"n's default value is 7"));
    assert!(other.contains(&"f onto"));
    assert!(other.contains(&"f reflexive"));
}

#[test]
fn oracle_examples() {
    let s = schema(CHAIN);
    let d = bfs_oracle(&s, "A");
    assert_eq!(
        d.into_iter().collect::<Vec<_>>(),
        [("A".into(), 0), ("B".into(), 1), ("C".into(), 2)]
    );
    let lonely = schema("A\nB\n");
    assert_eq!(bfs_oracle(&lonely, "A").len(), 1);
    let g = bfs_oracle(&genealogy(), "RULERS");
    assert_eq!(g.len(), 7);
    assert!(g.iter().all(|(s, &d)| (s == "RULERS") == (d == 0) && d <= 1));
}

#[test]
fn long_chain_does_not_overflow() {
    let s = schema(&crate::synth::chain(20_000));
    let out = rea2(&s, &Rea2Request::whole_model()).unwrap();
    assert_eq!(out.model.nodes().len(), 20_000);
    assert_eq!(out.counters.max_body_runs(), 1);
}

#[test]
fn runs_are_deterministic() {
    let s = genealogy();
    for req in [Rea2Request::whole_model(), Rea2Request::sub_model("MARRIAGES", 2)] {
        assert_eq!(rea2(&s, &req).unwrap(), rea2(&s, &req).unwrap());
    }
}
