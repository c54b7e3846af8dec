use std::fmt::Write as _;

use super::involved::quantifier_domains;
use crate::schema::{Codomain, ConstraintDef, ConstraintKind, EmdmSchema, MappingDef, MappingKind, SetDef, SetKind};

enum Item<'a> {
    Set(&'a SetDef),
    Mapping(&'a MappingDef),
    Constraint(&'a ConstraintDef),
}

impl Item<'_> {
    fn decl_index(&self) -> usize {
        match self {
            Item::Set(s) => s.decl_index,
            Item::Mapping(m) => m.decl_index,
            Item::Constraint(c) => c.decl_index,
        }
    }
}

fn comment(out: &mut String, c: &Option<String>) {
    if let Some(c) = c {
        let _ = write!(out, " ({c})");
    }
}

fn roles(def: &SetDef) -> String {
    if def.roles.is_empty() {
        return String::new();
    }
    let list: Vec<String> = def.roles.iter().map(|r| format!("{}: {}", r.name, r.target)).collect();
    format!("({})", list.join(", "))
}

/// Renders a schema back into the DSL, in declaration order. Parsing the
/// output yields a schema equal to the input.
pub fn print_schema(schema: &EmdmSchema) -> String {
    let mut items: Vec<Item> = schema.sets().iter().map(Item::Set).collect();
    items.extend(schema.mappings().iter().map(Item::Mapping));
    items.extend(schema.constraints().iter().map(Item::Constraint));
    items.sort_by_key(Item::decl_index);

    let mut out = String::new();
    let mut block: Option<&str> = None;

    for item in &items {
        match item {
            Item::Set(s) => {
                match s.kind {
                    SetKind::Value => {
                        let _ = write!(
                            out,
                            "\nVALUE {} = {}",
                            s.name,
                            s.values.as_ref().map(ToString::to_string).unwrap_or_default()
                        );
                        comment(&mut out, &s.comment);
                        out.push('\n');
                        continue;
                    }
                    SetKind::Entity | SetKind::Relationship => {
                        let _ = write!(out, "\n{}{}", s.name, roles(s));
                    }
                    SetKind::ComputedEntity | SetKind::ComputedRelationship => {
                        let _ = write!(out, "\nCOMPUTED {}{}", s.name, roles(s));
                        if let Some(f) = &s.formula {
                            let _ = write!(out, " = {f}");
                        }
                    }
                }
                comment(&mut out, &s.comment);
                out.push('\n');
                block = Some(&s.name);
            }
            Item::Mapping(m) => match m.kind {
                MappingKind::Role => {}
                MappingKind::CanonicalInjection => {
                    let sup = m.codomain.set_name().unwrap_or_default();
                    let _ = write!(out, "{} SUBSETOF {sup}", m.domain);
                    comment(&mut out, &m.comment);
                    out.push('\n');
                    block = Some(&m.domain);
                }
                _ => {
                    if block.is_some() || m.declared_in != m.domain {
                        reopen(&mut out, block, &m.declared_in);
                        block = Some(&m.declared_in);
                    }
                    out.push_str(&mapping_line(m));
                    out.push('\n');
                }
            },
            Item::Constraint(c) => {
                if let Some(b) = c.declared_in.as_deref() {
                    reopen(&mut out, block, b);
                    block = Some(b);
                }
                out.push_str(&constraint_line(c));
                out.push('\n');
            }
        }
    }
    out.trim_start().to_string()
}

/// Emits a bare header line when `want` is not the open block.
fn reopen(out: &mut String, block: Option<&str>, want: &str) {
    if block != Some(want) {
        let _ = writeln!(out, "\n{want}");
    }
}

fn mapping_line(m: &MappingDef) -> String {
    let mut line = String::new();
    let arrow = if m.one_to_one { "↔" } else { "→" };
    let in_block = m.declared_in == m.domain && !m.is_structural();
    match (&m.codomain, in_block) {
        (Codomain::Unspecified, _) => {
            let _ = write!(line, "{} = {}", m.name, m.formula.as_deref().unwrap_or_default());
            comment(&mut line, &m.comment);
            return line;
        }
        (c, true) => {
            let _ = write!(line, "{} {arrow} {c}", m.name);
        }
        (c, false) => {
            let _ = write!(line, "{} : {} {arrow} {c}", m.name, m.domain);
        }
    }
    if m.total {
        line.push_str(" total");
    }
    if m.onto {
        line.push_str(" onto");
    }
    if let Some(d) = &m.default_value {
        let _ = write!(line, " default {d}");
    }
    for p in &m.dyadic_props {
        let _ = write!(line, " {}", p.keyword());
    }
    if let Some(f) = &m.formula {
        let _ = write!(line, " = {f}");
    }
    comment(&mut line, &m.comment);
    line
}

fn constraint_line(c: &ConstraintDef) -> String {
    let mut line = String::new();
    let derived: Vec<String> = match &c.kind {
        ConstraintKind::Formula(text) => quantifier_domains(text),
        _ => c.involved_sets.clone(),
    };
    let extra: Vec<&str> = c
        .involved_sets
        .iter()
        .filter(|s| !derived.contains(s))
        .map(String::as_str)
        .collect();
    if let Some(label) = &c.label {
        line.push_str(label);
        if !extra.is_empty() {
            let _ = write!(line, " [{}]", extra.join(", "));
        }
        line.push_str(" : ");
    }
    line.push_str(&c.body_text());
    comment(&mut line, &c.comment);
    line
}
