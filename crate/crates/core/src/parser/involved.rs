use std::sync::OnceLock;

use regex::Regex;

use crate::schema::{Codomain, ConstraintKind, EmdmSchema};

fn quantifier_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?:∀|∃!?|\bforall\b|\bexists\b)\s*[\p{L}_][\p{L}\p{N}_]*(?:\s*,\s*[\p{L}_][\p{L}\p{N}_]*)*\s*(?:∈|\bin\b)\s*([\p{L}_][\p{L}\p{N}_]*)",
        )
        .expect("quantifier pattern")
    })
}

/// Quantifier domains (`∀x ∈ S`, `∃z ∈ S`, `forall x, y in S`) of a formula,
/// distinct, in first-occurrence order.
pub fn quantifier_domains(formula: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for cap in quantifier_re().captures_iter(formula) {
        let name = cap[1].to_string();
        if !out.contains(&name) {
            out.push(name);
        }
    }
    out
}

/// Sets a constraint involves. `schema` needs its sets and mappings; its
/// constraints are not consulted.
///
/// Keys involve their shared domain, compositions the non-value endpoints of
/// both mappings, and formulas their quantifier domains. A formula that
/// ranges over an undeclared set, or over no object set at all, is an error.
pub fn extract_involved_sets(kind: &ConstraintKind, schema: &EmdmSchema) -> Result<Vec<String>, String> {
    let mut out: Vec<String> = Vec::new();
    let push = |s: &str, out: &mut Vec<String>| {
        if !out.iter().any(|o| o == s) {
            out.push(s.to_string());
        }
    };
    match kind {
        ConstraintKind::Key(refs) => {
            let first = refs.first().ok_or("key without mappings")?;
            push(&first.domain, &mut out);
        }
        ConstraintKind::Composition { outer, inner, .. } => {
            for r in [outer, inner] {
                push(&r.domain, &mut out);
                if let Some(Codomain::Set(c)) = schema.mapping(r).map(|m| &m.codomain) {
                    push(c, &mut out);
                }
            }
        }
        ConstraintKind::Formula(text) => {
            for name in quantifier_domains(text) {
                match schema.set(&name) {
                    None => return Err(format!("formula quantifies over unknown set {name}")),
                    Some(s) if s.kind.is_value() => {}
                    Some(_) => push(&name, &mut out),
                }
            }
            if out.is_empty() {
                return Err("formula does not quantify over any object set".into());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_occurrence_order() {
        let c26 = "(∀x, y ∈ REIGNS)(x ≠ y ∧ Country(x) = Country(y)) ∨ (∃z ∈ MARRIAGES)(Husband(z) = Ruler(x))";
        assert_eq!(quantifier_domains(c26), ["REIGNS", "MARRIAGES"]);
        assert_eq!(quantifier_domains("(∀x ∈ RULERS)(0 ≤ Age(x) ≤ 140)"), ["RULERS"]);
        assert_eq!(
            quantifier_domains("forall x, y in A (exists z in B (f(z) = x))"),
            ["A", "B"]
        );
        assert!(quantifier_domains("Age(x) ≤ 140").is_empty());
        // "in" inside a word is not a quantifier keyword
        assert!(quantifier_domains("forall within").is_empty());
    }
}
