mod common;

use std::collections::BTreeMap;

use emdm_er::erd::Shape;
use emdm_er::export::{from_json, to_dot, to_json, to_markdown, ExportOptions, Format};
use emdm_er::rea2::bfs_oracle;
use emdm_er::schema::{EmdmSchema, MappingKind};
use emdm_er::{rea2, Rea2Output, Rea2Request};
use proptest::prelude::*;

fn check_oracle(schema: &EmdmSchema) -> Result<(), TestCaseError> {
    for center in schema.non_value_sets() {
        let dist = bfs_oracle(schema, &center.name);
        let diameter = dist.values().copied().max().unwrap_or(0).max(1);
        for r in 1..=diameter + 1 {
            let out = rea2(schema, &Rea2Request::sub_model(&center.name, r as u32)).unwrap();
            let got: BTreeMap<String, usize> = out.table.as_ref().unwrap().rows().iter().cloned().collect();
            let want: BTreeMap<String, usize> = dist
                .iter()
                .filter(|(_, &d)| d <= r)
                .map(|(s, &d)| (s.clone(), d))
                .collect();
            prop_assert_eq!(&got, &want, "center {} radius {}", center.name, r);
            prop_assert!(out.counters.max_body_runs() <= 1);
            let levels: Vec<usize> = out.table.unwrap().rows().iter().map(|(_, l)| *l).collect();
            prop_assert!(levels.windows(2).all(|w| w[0] <= w[1]));
        }
    }
    Ok(())
}

fn check_sound(schema: &EmdmSchema, out: &Rea2Output) -> Result<(), TestCaseError> {
    let m = &out.model;
    for node in m.nodes() {
        let def = schema.set(&node.label).expect("node names a set");
        prop_assert!(!def.kind.is_value());
        let shape = if def.kind.is_relationship() {
            Shape::Diamond
        } else {
            Shape::Rectangle
        };
        prop_assert_eq!(node.shape, shape);
        prop_assert_eq!(node.dotted, def.kind.is_computed());
        let attrs = schema.attributes_of(&def.name).unwrap();
        let want: Vec<(&str, bool)> = attrs.iter().map(|a| (a.name.as_str(), a.is_computed())).collect();
        let got: Vec<(&str, bool)> = node.ellipses.iter().map(|e| (e.label.as_str(), e.dotted)).collect();
        prop_assert_eq!(got, want);
        for c in schema.constraints_involving(&def.name).unwrap() {
            let n = m
                .restrictions()
                .iter()
                .filter(|r| r.subject == c.display_name())
                .count();
            prop_assert_eq!(n, 1, "constraint {}", c.display_name());
        }
    }
    for e in m.edges() {
        prop_assert!(m.node(&e.from).is_some() && m.node(&e.to).is_some());
    }
    Ok(())
}

fn check_whole(schema: &EmdmSchema) -> Result<Rea2Output, TestCaseError> {
    let out = rea2(schema, &Rea2Request::whole_model()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    check_sound(schema, &out)?;
    prop_assert_eq!(out.model.nodes().len(), schema.non_value_sets().len());
    let structural: Vec<_> = schema.mappings().iter().filter(|f| f.is_structural()).collect();
    prop_assert_eq!(out.model.edges().len(), structural.len());
    for f in structural {
        let e = out
            .model
            .edges()
            .iter()
            .find(|e| e.from == f.domain && e.label == f.name)
            .expect("arrow drawn");
        prop_assert_eq!(e.to.as_str(), f.codomain.set_name().unwrap());
        prop_assert_eq!(e.dotted, f.is_computed());
        prop_assert_eq!(
            e.double_arrow,
            f.one_to_one || f.kind == MappingKind::CanonicalInjection
        );
    }
    prop_assert!(out.counters.max_body_runs() <= 1);
    Ok(out)
}

#[test]
fn oracle_equivalence_on_genealogy() {
    check_oracle(&common::genealogy()).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sub_models_match_bfs(seed in any::<u64>()) {
        let (_, schema) = common::random_schema(seed);
        check_oracle(&schema)?;
    }

    #[test]
    fn whole_models_are_sound_and_complete(seed in any::<u64>()) {
        let (_, schema) = common::random_schema(seed);
        check_whole(&schema)?;
    }

    #[test]
    fn single_erds_are_sound(seed in any::<u64>()) {
        let (_, schema) = common::random_schema(seed);
        for s in schema.non_value_sets() {
            let out = rea2(&schema, &Rea2Request::single(&s.name)).unwrap();
            check_sound(&schema, &out)?;
            prop_assert!(out.counters.max_body_runs() <= 1);
            if !s.kind.is_relationship() {
                prop_assert_eq!(out.model.nodes().len(), 1);
                prop_assert!(out.model.edges().is_empty());
            } else {
                // role targets that are relationships bring their own roles
                for e in out.model.edges() {
                    let f = schema.functions_defined_on(&e.from).unwrap().into_iter().find(|f| f.name == e.label).unwrap();
                    prop_assert_eq!(f.kind, MappingKind::Role);
                }
            }
        }
    }

    #[test]
    fn translation_and_export_are_deterministic(seed in any::<u64>()) {
        let (_, schema) = common::random_schema(seed);
        let a = rea2(&schema, &Rea2Request::whole_model()).unwrap();
        let b = rea2(&schema, &Rea2Request::whole_model()).unwrap();
        prop_assert_eq!(&a, &b);
        for format in Format::ALL {
            let opts = ExportOptions::new(format);
            prop_assert_eq!(
                emdm_er::export::export(&a.model, &opts),
                emdm_er::export::export(&b.model, &opts)
            );
        }
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), center in 0usize..50, r in 0u32..4) {
        let (_, schema) = common::random_schema(seed);
        let sets = schema.non_value_sets();
        let name = sets[center % sets.len()].name.clone();
        let out = rea2(&schema, &Rea2Request::sub_model(&name, r)).unwrap();
        let back = from_json(&to_json(&out.model)).unwrap();
        prop_assert_eq!(&back, &out.model);
        prop_assert_eq!(to_markdown(&back, &ExportOptions::new(Format::Markdown)), to_markdown(&out.model, &ExportOptions::new(Format::Markdown)));
    }

    #[test]
    fn dot_output_parses(seed in any::<u64>()) {
        let (_, schema) = common::random_schema(seed);
        let model = rea2(&schema, &Rea2Request::whole_model()).unwrap().model;
        let g = common::dot::parse(&to_dot(&model, &ExportOptions::default())).map_err(TestCaseError::fail)?;
        let boxes = g.nodes.iter().filter(|(_, a)| matches!(a.get("shape").map(String::as_str), Some("box" | "diamond"))).count();
        prop_assert_eq!(boxes, model.nodes().len());
        let arrows = g.edges.iter().filter(|(_, _, a)| !a.contains_key("dir")).count();
        prop_assert_eq!(arrows, model.edges().len());
    }
}
