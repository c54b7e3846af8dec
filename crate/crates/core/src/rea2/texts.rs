//! Wording of restriction entries and informal descriptions.

use crate::schema::{
    Codomain, ConstraintDef, ConstraintKind, EmdmSchema, MappingDef, MappingKind, MaxCardinal, SetDef,
};

pub(super) fn max_cardinality(set: &str, card: MaxCardinal) -> String {
    format!("max(card({set})) = {card}")
}

pub(super) fn data_range(m: &MappingDef) -> Option<String> {
    match &m.codomain {
        Codomain::Values(_) | Codomain::ValueSet(_) => Some(format!("{}: {}", m.name, m.codomain)),
        _ => None,
    }
}

pub(super) fn formula(m: &MappingDef) -> String {
    format!("{} = {}", m.name, m.formula.as_deref().unwrap_or_default())
}

/// Restriction text of a constraint; keys read as the mapping product alone.
pub(super) fn constraint(c: &ConstraintDef) -> String {
    match (&c.kind, &c.label) {
        (ConstraintKind::Key(refs), _) => {
            let names: Vec<&str> = refs.iter().map(|r| r.name.as_str()).collect();
            names.join(" • ")
        }
        (_, Some(label)) => format!("{label}: {}", c.body_text()),
        (_, None) => c.body_text(),
    }
}

fn value_phrase(schema: &EmdmSchema, codomain: &Codomain) -> String {
    match codomain {
        Codomain::Values(v) => v.describe(),
        Codomain::ValueSet(name) => match schema.set(name).and_then(|s| s.values.as_ref()) {
            Some(v) => format!("a {name} value ({})", v.describe()),
            None => format!("a {name} value"),
        },
        Codomain::Set(s) => format!("a {s} object"),
        Codomain::Unspecified => "a computed value".into(),
    }
}

fn attribute_phrase(schema: &EmdmSchema, a: &MappingDef) -> String {
    if a.is_identifier {
        return format!("{}, its object integer identifier", a.name);
    }
    match &a.formula {
        Some(f) => format!("{}, computed as {f}", a.name),
        None => format!("{}, {}", a.name, value_phrase(schema, &a.codomain)),
    }
}

pub(super) fn set_description(schema: &EmdmSchema, def: &SetDef, card: Option<MaxCardinal>) -> String {
    let mut text = format!("The set of {}", def.name);
    if def.kind.is_computed() {
        text.push_str(" (computed");
        if let Some(f) = &def.formula {
            text.push_str(" as ");
            text.push_str(f);
        }
        text.push(')');
    }
    if !def.roles.is_empty() {
        let roles: Vec<String> = def
            .roles
            .iter()
            .map(|r| format!("{} (role {})", r.target, r.name))
            .collect();
        text.push_str(&format!(" relates {} and", roles.join(", ")));
    }
    let attrs = schema.attributes_of(&def.name).unwrap_or_default();
    if attrs.is_empty() {
        text.push_str(" stores no properties.");
    } else {
        let list: Vec<String> = attrs.iter().map(|a| attribute_phrase(schema, a)).collect();
        text.push_str(&format!(" stores properties {}.", list.join(", ")));
    }
    for sup in &def.supersets {
        text.push_str(&format!(" It is a subset of {sup}."));
    }
    match card {
        Some(c) => text.push_str(&format!(" At most {c} objects may be stored.")),
        None => text.push_str(" Its maximum cardinal is not bounded by an identifier."),
    }
    if let Some(c) = &def.comment {
        text.push(' ');
        text.push_str(c);
    }
    text
}

pub(super) fn function_description(schema: &EmdmSchema, f: &MappingDef) -> String {
    if let Some(formula) = &f.formula {
        return format!("{} of {} is computed as {formula}.", f.name, f.domain);
    }
    let mut text = match f.kind {
        MappingKind::Role => format!(
            "Role {} maps every {} object to a {} object",
            f.name, f.domain, f.codomain
        ),
        MappingKind::CanonicalInjection => {
            format!("Every {} object is also a {} object", f.domain, f.codomain)
        }
        _ => format!(
            "{} maps {} objects to {}",
            f.name,
            f.domain,
            value_phrase(schema, &f.codomain)
        ),
    };
    let mut props = Vec::new();
    if f.total {
        props.push("compulsory".to_string());
    }
    if f.one_to_one {
        props.push("one-to-one".to_string());
    }
    if f.onto {
        props.push("onto".to_string());
    }
    if let Some(v) = &f.default_value {
        props.push(format!("defaulting to {v}"));
    }
    props.extend(f.dyadic_props.iter().map(|p| p.keyword().to_string()));
    if !props.is_empty() {
        text.push_str(&format!("; it is {}", props.join(", ")));
    }
    text.push('.');
    if let Some(c) = &f.comment {
        text.push(' ');
        text.push_str(c);
    }
    text
}

pub(super) fn constraint_description(c: &ConstraintDef) -> String {
    let mut text = format!(
        "Constraint {} on {}: {}.",
        c.display_name(),
        c.involved_sets.join(", "),
        c.body_text()
    );
    if let Some(comment) = &c.comment {
        text.push(' ');
        text.push_str(comment);
    }
    text
}
