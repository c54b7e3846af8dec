use std::collections::{HashMap, HashSet};

use crate::diag::ParseDiagnostic;
use crate::schema::{Codomain, ConstraintKind, EmdmSchema, MappingKind, SetKind};
use crate::value_set::ValueSetExpr;

/// Checks every schema invariant, reporting problems as diagnostics.
///
/// Duplicate mapping declarations with identical signatures are warnings;
/// all other violations are errors.
pub fn validate_schema(schema: &EmdmSchema) -> Vec<ParseDiagnostic> {
    let mut out = Vec::new();
    let span = |i: usize| schema.span_of(i).unwrap_or_default();
    let kind_of = |name: &str| schema.set(name).map(|s| s.kind);
    let is_object = |name: &str| kind_of(name).is_some_and(|k| !k.is_value());

    let mut names = HashSet::new();
    for s in schema.sets() {
        let at = span(s.decl_index);
        if !names.insert(s.name.as_str()) {
            out.push(ParseDiagnostic::error(at, format!("set {} declared twice", s.name)));
        }
        if s.roles.is_empty() == s.kind.is_relationship() {
            out.push(ParseDiagnostic::error(
                at,
                format!(
                    "set {}: roles must be declared exactly for relationship-type sets",
                    s.name
                ),
            ));
        }
        for r in &s.roles {
            match kind_of(&r.target) {
                None => out.push(ParseDiagnostic::error(
                    at,
                    format!("unknown set {} in role {}", r.target, r.name),
                )),
                Some(SetKind::Value) => out.push(ParseDiagnostic::error(
                    at,
                    format!("role {} of {} targets value set {}", r.name, s.name, r.target),
                )),
                Some(_) => {}
            }
        }
        for sup in &s.supersets {
            if !is_object(sup) {
                out.push(ParseDiagnostic::error(
                    at,
                    format!("{} ⊆ {}: superset must be a declared non-value set", s.name, sup),
                ));
            }
        }
        match (&s.kind, &s.values) {
            (SetKind::Value, Some(expr)) => {
                if let Err(e) = expr.check() {
                    out.push(ParseDiagnostic::error(at, format!("value set {}: {e}", s.name)));
                }
            }
            (SetKind::Value, None) => out.push(ParseDiagnostic::error(
                at,
                format!("value set {} has no definition", s.name),
            )),
            (_, Some(_)) => out.push(ParseDiagnostic::error(
                at,
                format!("object set {} cannot have values", s.name),
            )),
            _ => {}
        }
    }
    inclusion_cycles(schema, &mut out);

    let mut first_by_key: HashMap<(&str, &str), usize> = HashMap::new();
    for (mi, m) in schema.mappings().iter().enumerate() {
        let at = span(m.decl_index);
        let label = format!("{} : {} → {}", m.name, m.domain, m.codomain);
        if let Some(&prev) = first_by_key.get(&(m.domain.as_str(), m.name.as_str())) {
            if schema.mappings()[prev].same_signature(m) {
                out.push(ParseDiagnostic::warning(
                    at,
                    format!("duplicate declaration of {label} ignored"),
                ));
            } else {
                out.push(ParseDiagnostic::error(
                    at,
                    format!("conflicting redeclaration of {} on {}", m.name, m.domain),
                ));
            }
            continue;
        }
        first_by_key.insert((&m.domain, &m.name), mi);

        if !is_object(&m.domain) {
            out.push(ParseDiagnostic::error(
                at,
                format!("{label}: domain must be a declared non-value set"),
            ));
        }
        match &m.codomain {
            Codomain::Set(c) if !is_object(c) => {
                out.push(ParseDiagnostic::error(at, format!("{label}: unknown set {c}")))
            }
            Codomain::ValueSet(v) if kind_of(v) != Some(SetKind::Value) => {
                out.push(ParseDiagnostic::error(at, format!("{label}: {v} is not a value set")))
            }
            Codomain::Values(expr) => {
                if let Err(e) = expr.check() {
                    out.push(ParseDiagnostic::error(at, format!("{label}: {e}")));
                }
            }
            _ => {}
        }
        let set_codomain = m.is_structural();
        let kind_ok = match m.kind {
            MappingKind::Attribute => !set_codomain && m.codomain != Codomain::Unspecified,
            MappingKind::Structural | MappingKind::Role | MappingKind::CanonicalInjection => set_codomain,
            MappingKind::Computed => true,
        };
        if !kind_ok {
            out.push(ParseDiagnostic::error(
                at,
                format!("{label}: codomain does not fit a {:?} mapping", m.kind),
            ));
        }
        if m.is_computed() != m.formula.is_some() {
            out.push(ParseDiagnostic::error(
                at,
                format!("{label}: only computed mappings carry a formula"),
            ));
        }
        if !m.dyadic_props.is_empty() && !m.is_self_map() {
            out.push(ParseDiagnostic::error(
                at,
                format!("{label}: dyadic properties need a self-map, but {} is not one", m.name),
            ));
        }
        if m.kind == MappingKind::Role && !m.total {
            out.push(ParseDiagnostic::error(at, format!("role {} must be total", m.name)));
        }
        if m.kind == MappingKind::CanonicalInjection && !(m.total && m.one_to_one) {
            out.push(ParseDiagnostic::error(
                at,
                "canonical injections are total and one-to-one",
            ));
        }
        if m.is_identifier && !(m.total && m.one_to_one && matches!(m.codomain, Codomain::Values(ValueSetExpr::Nat(_))))
        {
            out.push(ParseDiagnostic::error(
                at,
                format!("identifier x of {} must be `x <-> NAT(d) total`", m.domain),
            ));
        }
    }

    for c in schema.constraints() {
        let at = span(c.decl_index);
        let name = c.display_name();
        match &c.kind {
            ConstraintKind::Key(refs) => {
                if refs.is_empty() {
                    out.push(ParseDiagnostic::error(at, format!("{name}: empty key")));
                }
                if refs.iter().any(|r| r.domain != refs[0].domain) {
                    out.push(ParseDiagnostic::error(
                        at,
                        format!("{name}: key mappings must share their domain"),
                    ));
                }
                for r in refs {
                    if schema.mapping(r).is_none() {
                        out.push(ParseDiagnostic::error(at, format!("{name}: unknown mapping {r}")));
                    }
                }
            }
            ConstraintKind::Composition { outer, inner, .. } => match (schema.mapping(outer), schema.mapping(inner)) {
                (Some(f), Some(g)) => {
                    if g.codomain.set_name() != Some(f.domain.as_str()) {
                        out.push(ParseDiagnostic::error(
                            at,
                            format!("{name}: {} and {} do not compose", f.name, g.name),
                        ));
                    } else if f.codomain.set_name() != Some(g.domain.as_str()) {
                        out.push(ParseDiagnostic::error(
                            at,
                            format!("{name}: composite is not a self-map"),
                        ));
                    }
                }
                _ => out.push(ParseDiagnostic::error(
                    at,
                    format!("{name}: unknown mapping in composition"),
                )),
            },
            ConstraintKind::Formula(_) => {}
        }
        if c.involved_sets.is_empty() {
            out.push(ParseDiagnostic::error(at, format!("{name} involves no set")));
        }
        for s in &c.involved_sets {
            if !is_object(s) {
                out.push(ParseDiagnostic::error(
                    at,
                    format!("{name}: involved set {s} is not a declared non-value set"),
                ));
            }
        }
    }
    out
}

/// Reports each inclusion cycle once, at its first declared member.
fn inclusion_cycles(schema: &EmdmSchema, out: &mut Vec<ParseDiagnostic>) {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    let sets = schema.sets();
    let pos: HashMap<&str, usize> = sets.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    let mut mark = vec![Mark::Fresh; sets.len()];
    for root in 0..sets.len() {
        if mark[root] != Mark::Fresh {
            continue;
        }
        // iterative DFS over (node, next superset index)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Active;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            let supers = &sets[node].supersets;
            if *next >= supers.len() {
                mark[node] = Mark::Done;
                stack.pop();
                continue;
            }
            let sup = &supers[*next];
            *next += 1;
            let Some(&t) = pos.get(sup.as_str()) else { continue };
            match mark[t] {
                Mark::Fresh => {
                    mark[t] = Mark::Active;
                    stack.push((t, 0));
                }
                Mark::Active => {
                    let start = stack.iter().position(|&(n, _)| n == t).unwrap_or(0);
                    let mut path: Vec<&str> = stack[start..].iter().map(|&(n, _)| sets[n].name.as_str()).collect();
                    path.push(&sets[t].name);
                    out.push(ParseDiagnostic::error(
                        schema.span_of(sets[t].decl_index).unwrap_or_default(),
                        format!("inclusion cycle {}", path.join(" ⊆ ")),
                    ));
                }
                Mark::Done => {}
            }
        }
    }
}
