//! Parser for the textual (E)MDM schema language (`.emdm` files).
//!
//! See `docs/grammar.md` for the EBNF. Parsing runs in three stages: lines
//! are classified into raw declarations, set headers are registered, then
//! mappings and constraints are name-resolved against the declared sets.

mod decl;
mod involved;
mod lexer;
mod printer;
mod validate;

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

pub use involved::{extract_involved_sets, quantifier_domains};
pub use printer::print_schema;
pub use validate::validate_schema;

use crate::diag::{ParseDiagnostic, SourceSpan};
use crate::schema::{
    Codomain, ConstraintDef, ConstraintKind, EmdmSchema, MappingDef, MappingKind, MappingRef, Role, SetDef, SetKind,
};
use crate::value_set::ValueSetExpr;
use decl::{Decl, RawCodomain, RawConstraint};

/// A successfully parsed schema with its (non-fatal) warnings.
#[derive(Debug, Clone)]
pub struct ParsedSchema {
    pub schema: EmdmSchema,
    pub diagnostics: Vec<ParseDiagnostic>,
}

#[derive(Debug, Clone, Error)]
#[error("schema has {} error(s); first: {}", self.error_count(), self.first_error())]
pub struct ParseFailure {
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl ParseFailure {
    pub fn errors(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    fn error_count(&self) -> usize {
        self.errors().count()
    }

    fn first_error(&self) -> String {
        self.errors().next().map(ToString::to_string).unwrap_or_default()
    }
}

/// Parses, resolves and validates a schema. Identical duplicate mapping
/// declarations are dropped with a warning; any error fails the parse.
pub fn parse_schema(source: &str) -> Result<ParsedSchema, ParseFailure> {
    let (lines, mut diags) = lexer::logical_lines(source);
    let mut b = Builder::default();
    for line in &lines {
        match decl::parse_decl(&line.text) {
            Ok(d) => b.declare(d, line.span, &mut diags),
            Err(msg) => diags.push(ParseDiagnostic::error(line.span, msg)),
        }
    }
    let schema = b.finish(&mut diags);
    diags.extend(validate_schema(&schema));
    diags.sort_by_key(|d| (d.span.line, d.span.column));
    if diags.iter().any(ParseDiagnostic::is_error) {
        return Err(ParseFailure { diagnostics: diags });
    }
    Ok(ParsedSchema {
        schema: dedupe_mappings(schema),
        diagnostics: diags,
    })
}

/// Keeps the first of each group of mappings sharing `(domain, name)`, then
/// renumbers declarations densely so equal sources give equal indices.
fn dedupe_mappings(schema: EmdmSchema) -> EmdmSchema {
    let spans = schema.spans().clone();
    let (mut sets, mappings, mut constraints) = schema.into_parts();
    let mut seen = HashSet::new();
    let mut mappings: Vec<MappingDef> = mappings
        .into_iter()
        .filter(|m| seen.insert((m.domain.clone(), m.name.clone())))
        .collect();
    let mut kept: Vec<usize> = sets
        .iter()
        .map(|s| s.decl_index)
        .chain(mappings.iter().map(|m| m.decl_index))
        .chain(constraints.iter().map(|c| c.decl_index))
        .collect();
    kept.sort_unstable();
    let rank: HashMap<usize, usize> = kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let spans = kept
        .iter()
        .filter_map(|old| spans.get(old).map(|s| (rank[old], *s)))
        .collect();
    sets.iter_mut().for_each(|s| s.decl_index = rank[&s.decl_index]);
    mappings.iter_mut().for_each(|m| m.decl_index = rank[&m.decl_index]);
    constraints.iter_mut().for_each(|c| c.decl_index = rank[&c.decl_index]);
    EmdmSchema::new(sets, mappings, constraints).with_spans(spans)
}

struct PendingMapping {
    name: String,
    domain: Option<String>,
    block: Option<String>,
    one_to_one: bool,
    codomain: Option<RawCodomain>,
    flags: decl::MappingFlags,
    formula: Option<String>,
    comment: Option<String>,
    decl_index: usize,
    span: SourceSpan,
}

struct PendingConstraint {
    label: Option<String>,
    overrides: Vec<String>,
    body: RawConstraint,
    comment: Option<String>,
    block: Option<String>,
    decl_index: usize,
    span: SourceSpan,
}

#[derive(Default)]
struct Builder {
    sets: Vec<SetDef>,
    set_pos: HashMap<String, usize>,
    /// Roles and canonical injections, synthesized from headers.
    synthesized: Vec<MappingDef>,
    mappings: Vec<PendingMapping>,
    constraints: Vec<PendingConstraint>,
    block: Option<String>,
    next_index: usize,
    spans: BTreeMap<usize, SourceSpan>,
}

impl Builder {
    fn index(&mut self, span: SourceSpan) -> usize {
        let i = self.next_index;
        self.next_index += 1;
        self.spans.insert(i, span);
        i
    }

    fn add_set(&mut self, mut def: SetDef, span: SourceSpan) -> usize {
        def.decl_index = self.index(span);
        let pos = self.sets.len();
        self.set_pos.insert(def.name.clone(), pos);
        self.sets.push(def);
        pos
    }

    fn add_roles(&mut self, set: &str, roles: &[(String, String)], span: SourceSpan) {
        for (role, target) in roles {
            let i = self.index(span);
            let mut m = MappingDef::new(role.clone(), MappingKind::Role, set, Codomain::Set(target.clone()), i);
            m.total = true;
            self.synthesized.push(m);
        }
    }

    /// Handles a header for a set that may already exist. Returns true when
    /// the header should create the set.
    fn header(&mut self, candidate: &SetDef, span: SourceSpan, diags: &mut Vec<ParseDiagnostic>) -> bool {
        let Some(&pos) = self.set_pos.get(&candidate.name) else {
            return true;
        };
        let existing = &self.sets[pos];
        let bare = candidate.kind == SetKind::Entity && candidate.comment.is_none();
        if existing.kind.is_value() {
            diags.push(ParseDiagnostic::error(
                span,
                format!("{} is a value set and cannot open a block", candidate.name),
            ));
        } else if !bare {
            let same = existing.kind == candidate.kind
                && existing.roles == candidate.roles
                && existing.formula == candidate.formula
                && existing.comment == candidate.comment;
            if same {
                diags.push(ParseDiagnostic::warning(
                    span,
                    format!("duplicate declaration of set {} ignored", candidate.name),
                ));
            } else {
                diags.push(ParseDiagnostic::error(
                    span,
                    format!("conflicting redeclaration of set {}", candidate.name),
                ));
            }
        }
        if !existing.kind.is_value() {
            self.block = Some(candidate.name.clone());
        }
        false
    }

    fn declare(&mut self, decl: Decl, span: SourceSpan, diags: &mut Vec<ParseDiagnostic>) {
        match decl {
            Decl::ValueSet { name, expr, comment } => {
                let mut def = SetDef::new(name, SetKind::Value, 0);
                def.values = Some(expr);
                def.comment = comment;
                if self.set_pos.contains_key(&def.name) {
                    diags.push(ParseDiagnostic::error(
                        span,
                        format!("set {} already declared", def.name),
                    ));
                } else {
                    self.add_set(def, span);
                }
            }
            Decl::Entity { name, comment } => {
                let mut def = SetDef::new(name.clone(), SetKind::Entity, 0);
                def.comment = comment;
                if self.header(&def, span, diags) {
                    self.add_set(def, span);
                    self.block = Some(name);
                }
            }
            Decl::Relationship { name, roles, comment } => {
                let mut def = SetDef::new(name.clone(), SetKind::Relationship, 0);
                def.roles = to_roles(&roles);
                def.comment = comment;
                if self.header(&def, span, diags) {
                    self.add_set(def, span);
                    self.add_roles(&name, &roles, span);
                    self.block = Some(name);
                }
            }
            Decl::Computed {
                name,
                roles,
                formula,
                comment,
            } => {
                let kind = if roles.is_empty() {
                    SetKind::ComputedEntity
                } else {
                    SetKind::ComputedRelationship
                };
                let mut def = SetDef::new(name.clone(), kind, 0);
                def.roles = to_roles(&roles);
                def.formula = formula;
                def.comment = comment;
                if self.header(&def, span, diags) {
                    self.add_set(def, span);
                    self.add_roles(&name, &roles, span);
                    self.block = Some(name);
                }
            }
            Decl::Inclusion {
                name,
                superset,
                comment,
            } => {
                let pos = match self.set_pos.get(&name) {
                    Some(&p) if self.sets[p].kind.is_value() => {
                        diags.push(ParseDiagnostic::error(
                            span,
                            format!("value set {name} cannot have inclusions"),
                        ));
                        return;
                    }
                    Some(&p) => p,
                    None => self.add_set(SetDef::new(name.clone(), SetKind::Entity, 0), span),
                };
                self.sets[pos].supersets.push(superset.clone());
                let i = self.index(span);
                let mut m = MappingDef::new(
                    format!("⊆{superset}"),
                    MappingKind::CanonicalInjection,
                    name.clone(),
                    Codomain::Set(superset),
                    i,
                );
                m.total = true;
                m.one_to_one = true;
                m.comment = comment;
                self.synthesized.push(m);
                self.block = Some(name);
            }
            Decl::Mapping {
                name,
                domain,
                one_to_one,
                codomain,
                flags,
                formula,
                comment,
            } => {
                let decl_index = self.index(span);
                self.mappings.push(PendingMapping {
                    name,
                    domain,
                    block: self.block.clone(),
                    one_to_one,
                    codomain,
                    flags,
                    formula,
                    comment,
                    decl_index,
                    span,
                });
            }
            Decl::Constraint {
                label,
                overrides,
                body,
                comment,
            } => {
                let decl_index = self.index(span);
                self.constraints.push(PendingConstraint {
                    label,
                    overrides,
                    body,
                    comment,
                    block: self.block.clone(),
                    decl_index,
                    span,
                });
            }
        }
    }

    fn resolve_mapping(&self, p: PendingMapping) -> Result<MappingDef, String> {
        let domain = p.domain.clone().or_else(|| p.block.clone()).ok_or_else(|| {
            format!(
                "mapping {} has no domain: declare it inside a set block or as `{} : DOMAIN -> CODOMAIN`",
                p.name, p.name
            )
        })?;
        if !self.set_pos.contains_key(&domain) {
            return Err(format!("unknown set {domain} in declaration of {}", p.name));
        }
        let codomain = match p.codomain {
            None => Codomain::Unspecified,
            Some(RawCodomain::Expr(e)) => Codomain::Values(e),
            Some(RawCodomain::Name(n)) => match self.set_pos.get(&n).map(|&i| self.sets[i].kind) {
                None => return Err(format!("unknown set {n} in declaration of {}", p.name)),
                Some(SetKind::Value) => Codomain::ValueSet(n),
                Some(_) => Codomain::Set(n),
            },
        };
        let kind = if p.formula.is_some() {
            MappingKind::Computed
        } else if matches!(codomain, Codomain::Set(_)) {
            MappingKind::Structural
        } else {
            MappingKind::Attribute
        };
        let mut m = MappingDef::new(p.name, kind, domain.clone(), codomain, p.decl_index);
        m.declared_in = p.block.unwrap_or(domain);
        m.one_to_one = p.one_to_one;
        m.total = p.flags.total;
        m.onto = p.flags.onto;
        m.default_value = p.flags.default;
        m.dyadic_props = p.flags.dyadic;
        m.formula = p.formula;
        m.comment = p.comment;
        m.is_identifier = m.name == "x" && kind == MappingKind::Attribute;
        Ok(m)
    }

    fn finish(mut self, diags: &mut Vec<ParseDiagnostic>) -> EmdmSchema {
        let mut mappings = std::mem::take(&mut self.synthesized);
        for p in std::mem::take(&mut self.mappings) {
            let span = p.span;
            match self.resolve_mapping(p) {
                Ok(m) => mappings.push(m),
                Err(msg) => diags.push(ParseDiagnostic::error(span, msg)),
            }
        }
        mappings.sort_by_key(|m| m.decl_index);
        let sets = std::mem::take(&mut self.sets);
        let interim = EmdmSchema::new(sets, mappings, Vec::new());

        let mut constraints = Vec::new();
        for p in std::mem::take(&mut self.constraints) {
            match resolve_constraint(&interim, &p) {
                Ok(c) => constraints.push(c),
                Err(msg) => diags.push(ParseDiagnostic::error(p.span, msg)),
            }
        }
        let (sets, mappings, _) = interim.into_parts();
        EmdmSchema::new(sets, mappings, constraints).with_spans(self.spans)
    }
}

fn to_roles(roles: &[(String, String)]) -> Vec<Role> {
    roles
        .iter()
        .map(|(n, t)| Role {
            name: n.clone(),
            target: t.clone(),
        })
        .collect()
}

/// Picks one candidate, preferring those involving the current block.
fn choose<T: Clone>(what: &str, candidates: Vec<(T, bool)>) -> Result<T, String> {
    let preferred: Vec<&T> = candidates.iter().filter(|(_, p)| *p).map(|(c, _)| c).collect();
    match (preferred.len(), candidates.len()) {
        (1, _) => Ok(preferred[0].clone()),
        (_, 1) => Ok(candidates[0].0.clone()),
        (_, 0) => Err(format!("cannot resolve {what}")),
        _ => Err(format!("ambiguous {what}")),
    }
}

fn resolve_constraint(schema: &EmdmSchema, p: &PendingConstraint) -> Result<ConstraintDef, String> {
    let block = p.block.as_deref();
    let kind = match &p.body {
        RawConstraint::Key(names) => {
            for n in names {
                if schema.mappings_named(n).next().is_none() {
                    return Err(format!("unknown mapping {n} in key"));
                }
            }
            let mut domains: Vec<&str> = Vec::new();
            for m in schema.mappings_named(&names[0]) {
                if !domains.contains(&m.domain.as_str()) {
                    domains.push(&m.domain);
                }
            }
            domains.retain(|d| names.iter().all(|n| schema.mappings_named(n).any(|m| m.domain == *d)));
            let candidates = domains.into_iter().map(|d| (d.to_string(), Some(d) == block)).collect();
            let domain = choose(
                &format!("key {}: its mappings share no domain", names.join(" • ")),
                candidates,
            )
            .map_err(|e| e.replace("cannot resolve ", ""))?;
            ConstraintKind::Key(
                names
                    .iter()
                    .map(|n| MappingRef {
                        domain: domain.clone(),
                        name: n.clone(),
                    })
                    .collect(),
            )
        }
        RawConstraint::Composition { outer, inner, property } => {
            for n in [outer, inner] {
                if !schema.mappings_named(n).any(MappingDef::is_structural) {
                    return Err(format!("unknown structural function {n} in composition"));
                }
            }
            let mut pairs: Vec<((MappingRef, MappingRef), bool)> = Vec::new();
            let mut composable = false;
            for g in schema.mappings_named(inner).filter(|m| m.is_structural()) {
                let mid = g.codomain.set_name().unwrap_or_default();
                for f in schema.mappings_named(outer).filter(|m| m.domain == mid) {
                    composable = true;
                    if f.codomain.set_name() == Some(g.domain.as_str()) {
                        let pair = (f.mapping_ref(), g.mapping_ref());
                        let prefer = block.is_some_and(|b| b == g.domain || b == f.domain);
                        if !pairs.iter().any(|(q, _)| *q == pair) {
                            pairs.push((pair, prefer));
                        }
                    }
                }
            }
            if pairs.is_empty() {
                return Err(if composable {
                    format!("{outer} ° {inner} is not a self-map")
                } else {
                    format!("{outer} and {inner} do not compose")
                });
            }
            let (outer, inner) = choose(&format!("composition {outer} ° {inner}"), pairs)?;
            ConstraintKind::Composition {
                outer,
                inner,
                property: *property,
            }
        }
        RawConstraint::Formula(text) => ConstraintKind::Formula(text.clone()),
    };
    let mut involved = match (&kind, p.overrides.is_empty()) {
        // explicit overrides may stand in for missing quantifiers
        (ConstraintKind::Formula(text), false) => {
            let mut found = Vec::new();
            for name in quantifier_domains(text) {
                match schema.set(&name) {
                    None => return Err(format!("formula quantifies over unknown set {name}")),
                    Some(s) if s.kind.is_value() => {}
                    Some(_) if !found.contains(&name) => found.push(name),
                    Some(_) => {}
                }
            }
            found
        }
        _ => extract_involved_sets(&kind, schema)?,
    };
    for o in &p.overrides {
        match schema.set(o) {
            None => return Err(format!("unknown set {o} in involved-set list")),
            Some(s) if s.kind.is_value() => return Err(format!("{o} is a value set")),
            Some(_) if !involved.contains(o) => involved.push(o.clone()),
            Some(_) => {}
        }
    }
    Ok(ConstraintDef {
        label: p.label.clone(),
        kind,
        involved_sets: involved,
        comment: p.comment.clone(),
        declared_in: p.block.clone(),
        decl_index: p.decl_index,
    })
}

/// Parses a standalone value-set expression such as `NAT(16)` or
/// `[-6500, CurrentYear()]`.
pub fn parse_value_set_expr(text: &str) -> Result<ValueSetExpr, String> {
    match decl::parse_decl(&format!("v -> {text}"))? {
        decl::Decl::Mapping {
            codomain: Some(RawCodomain::Expr(e)),
            flags,
            formula: None,
            comment: None,
            ..
        } if flags == decl::MappingFlags::default() => {
            e.check()?;
            Ok(e)
        }
        _ => Err(format!("malformed value-set expression `{text}`")),
    }
}
