//! In-memory (E)MDM schema: sets, mappings and constraints, plus the
//! lookups the translation algorithm walks over.
//!
//! An [`EmdmSchema`] is immutable once built. Lists returned by the lookup
//! methods are always in declaration order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::SourceSpan;
use crate::value_set::{Literal, ValueSetExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("Unknown set name {0}!")]
    UnknownSet(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetKind {
    Entity,
    Relationship,
    Value,
    ComputedEntity,
    ComputedRelationship,
}

impl SetKind {
    pub fn is_value(self) -> bool {
        self == SetKind::Value
    }

    pub fn is_relationship(self) -> bool {
        matches!(self, SetKind::Relationship | SetKind::ComputedRelationship)
    }

    pub fn is_computed(self) -> bool {
        matches!(self, SetKind::ComputedEntity | SetKind::ComputedRelationship)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Role {
    pub name: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDef {
    pub name: String,
    pub kind: SetKind,
    /// Non-empty iff the set is relationship-type.
    pub roles: Vec<Role>,
    /// Inclusions `name ⊆ superset`, in declaration order.
    pub supersets: Vec<String>,
    /// Defining expression of a declared value set.
    pub values: Option<ValueSetExpr>,
    /// Defining expression of a computed set, kept verbatim.
    pub formula: Option<String>,
    pub comment: Option<String>,
    pub decl_index: usize,
}

impl SetDef {
    pub fn new(name: impl Into<String>, kind: SetKind, decl_index: usize) -> Self {
        SetDef {
            name: name.into(),
            kind,
            roles: Vec::new(),
            supersets: Vec::new(),
            values: None,
            formula: None,
            comment: None,
            decl_index,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MappingKind {
    Attribute,
    Structural,
    Computed,
    Role,
    CanonicalInjection,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Codomain {
    /// A non-value set (object or computed set).
    Set(String),
    /// A declared value set, by name.
    ValueSet(String),
    /// An inline value-set expression.
    Values(ValueSetExpr),
    /// Computed mapping whose value codomain was not declared.
    Unspecified,
}

impl Codomain {
    pub fn set_name(&self) -> Option<&str> {
        match self {
            Codomain::Set(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Codomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codomain::Set(s) | Codomain::ValueSet(s) => f.write_str(s),
            Codomain::Values(v) => write!(f, "{v}"),
            Codomain::Unspecified => f.write_str("?"),
        }
    }
}

/// Dyadic-relation properties of self-maps and composite self-maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DyadicProperty {
    Acyclic,
    Reflexive,
    Irreflexive,
    Symmetric,
    Asymmetric,
    Transitive,
}

impl DyadicProperty {
    pub const ALL: [DyadicProperty; 6] = [
        DyadicProperty::Acyclic,
        DyadicProperty::Reflexive,
        DyadicProperty::Irreflexive,
        DyadicProperty::Symmetric,
        DyadicProperty::Asymmetric,
        DyadicProperty::Transitive,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            DyadicProperty::Acyclic => "acyclic",
            DyadicProperty::Reflexive => "reflexive",
            DyadicProperty::Irreflexive => "irreflexive",
            DyadicProperty::Symmetric => "symmetric",
            DyadicProperty::Asymmetric => "asymmetric",
            DyadicProperty::Transitive => "transitive",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.keyword() == word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingDef {
    pub name: String,
    pub kind: MappingKind,
    pub domain: String,
    pub codomain: Codomain,
    pub total: bool,
    pub one_to_one: bool,
    pub onto: bool,
    pub default_value: Option<Literal>,
    /// The surrogate object identifier `x`.
    pub is_identifier: bool,
    pub dyadic_props: Vec<DyadicProperty>,
    /// Computation formula, verbatim (computed mappings only).
    pub formula: Option<String>,
    pub comment: Option<String>,
    /// Set block the declaration was written in; equals `domain` unless the
    /// mapping was declared with an explicit domain inside another block.
    pub declared_in: String,
    pub decl_index: usize,
}

impl MappingDef {
    pub fn new(
        name: impl Into<String>,
        kind: MappingKind,
        domain: impl Into<String>,
        codomain: Codomain,
        decl_index: usize,
    ) -> Self {
        let domain = domain.into();
        MappingDef {
            name: name.into(),
            kind,
            declared_in: domain.clone(),
            domain,
            codomain,
            total: false,
            one_to_one: false,
            onto: false,
            default_value: None,
            is_identifier: false,
            dyadic_props: Vec::new(),
            formula: None,
            comment: None,
            decl_index,
        }
    }

    pub fn is_computed(&self) -> bool {
        self.kind == MappingKind::Computed
    }

    /// True for mappings drawn as arrows: their codomain is a non-value set.
    pub fn is_structural(&self) -> bool {
        matches!(self.codomain, Codomain::Set(_))
    }

    pub fn is_self_map(&self) -> bool {
        self.codomain.set_name() == Some(self.domain.as_str())
    }

    pub fn mapping_ref(&self) -> MappingRef {
        MappingRef {
            domain: self.domain.clone(),
            name: self.name.clone(),
        }
    }

    /// Everything but comment, block and position: two declarations with
    /// equal signatures are duplicates.
    pub fn same_signature(&self, other: &MappingDef) -> bool {
        self.name == other.name
            && self.kind == other.kind
            && self.domain == other.domain
            && self.codomain == other.codomain
            && self.total == other.total
            && self.one_to_one == other.one_to_one
            && self.onto == other.onto
            && self.default_value == other.default_value
            && self.is_identifier == other.is_identifier
            && self.dyadic_props == other.dyadic_props
            && self.formula == other.formula
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MappingRef {
    pub domain: String,
    pub name: String,
}

impl fmt::Display for MappingRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.domain, self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintKind {
    /// Minimal uniqueness of a mapping product.
    Key(Vec<MappingRef>),
    /// Dyadic property of the composite self-map `outer ∘ inner`.
    Composition {
        outer: MappingRef,
        inner: MappingRef,
        property: DyadicProperty,
    },
    /// Any other closed formula, verbatim.
    Formula(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintDef {
    pub label: Option<String>,
    pub kind: ConstraintKind,
    pub involved_sets: Vec<String>,
    pub comment: Option<String>,
    /// Block context at declaration, used to disambiguate mapping names.
    pub declared_in: Option<String>,
    pub decl_index: usize,
}

impl ConstraintDef {
    /// Label, or a positional name for unlabeled constraints.
    pub fn display_name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => format!("#{}", self.decl_index),
        }
    }

    /// Body rendered in canonical notation (Unicode operators).
    pub fn body_text(&self) -> String {
        match &self.kind {
            ConstraintKind::Key(refs) => {
                let names: Vec<&str> = refs.iter().map(|r| r.name.as_str()).collect();
                format!("{} key", names.join(" • "))
            }
            ConstraintKind::Composition { outer, inner, property } => {
                format!("{} ° {} {}", outer.name, inner.name, property.keyword())
            }
            ConstraintKind::Formula(text) => text.clone(),
        }
    }
}

/// Upper bound of a set's cardinal; always a power of ten here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MaxCardinal {
    pub exponent: u32,
}

impl fmt::Display for MaxCardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "10^{}", self.exponent)
    }
}

#[derive(Debug, Clone, Default)]
struct SetIndex {
    defined_on: Vec<usize>,
    into: Vec<usize>,
    attributes: Vec<usize>,
    /// Structural mappings declared inside this set's block.
    owned: Vec<usize>,
    constraints: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct EmdmSchema {
    sets: Vec<SetDef>,
    mappings: Vec<MappingDef>,
    constraints: Vec<ConstraintDef>,
    by_name: HashMap<String, usize>,
    index: Vec<SetIndex>,
    spans: BTreeMap<usize, SourceSpan>,
}

impl PartialEq for EmdmSchema {
    fn eq(&self, other: &Self) -> bool {
        self.sets == other.sets && self.mappings == other.mappings && self.constraints == other.constraints
    }
}

impl Eq for EmdmSchema {}

impl EmdmSchema {
    /// Builds the schema and its lookup indices. No validation happens here;
    /// see [`crate::parser::validate_schema`].
    pub fn new(sets: Vec<SetDef>, mappings: Vec<MappingDef>, constraints: Vec<ConstraintDef>) -> Self {
        let mut by_name = HashMap::with_capacity(sets.len());
        for (i, s) in sets.iter().enumerate() {
            by_name.entry(s.name.clone()).or_insert(i);
        }
        let mut index = vec![SetIndex::default(); sets.len()];
        for (mi, m) in mappings.iter().enumerate() {
            if let Some(&d) = by_name.get(&m.domain) {
                if m.is_structural() {
                    index[d].defined_on.push(mi);
                } else {
                    index[d].attributes.push(mi);
                }
            }
            if let Some(c) = m.codomain.set_name().and_then(|c| by_name.get(c)) {
                index[*c].into.push(mi);
            }
            if m.is_structural() {
                if let Some(&b) = by_name.get(&m.declared_in) {
                    index[b].owned.push(mi);
                }
            }
        }
        for (ci, c) in constraints.iter().enumerate() {
            let mut seen = HashSet::new();
            for s in &c.involved_sets {
                if let Some(&si) = by_name.get(s) {
                    if seen.insert(si) {
                        index[si].constraints.push(ci);
                    }
                }
            }
        }
        EmdmSchema {
            sets,
            mappings,
            constraints,
            by_name,
            index,
            spans: BTreeMap::new(),
        }
    }

    pub(crate) fn with_spans(mut self, spans: BTreeMap<usize, SourceSpan>) -> Self {
        self.spans = spans;
        self
    }

    pub(crate) fn spans(&self) -> &BTreeMap<usize, SourceSpan> {
        &self.spans
    }

    /// Source position of the declaration with the given ordinal, if parsed.
    pub fn span_of(&self, decl_index: usize) -> Option<SourceSpan> {
        self.spans.get(&decl_index).copied()
    }

    pub fn sets(&self) -> &[SetDef] {
        &self.sets
    }

    pub fn mappings(&self) -> &[MappingDef] {
        &self.mappings
    }

    pub fn constraints(&self) -> &[ConstraintDef] {
        &self.constraints
    }

    pub fn into_parts(self) -> (Vec<SetDef>, Vec<MappingDef>, Vec<ConstraintDef>) {
        (self.sets, self.mappings, self.constraints)
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty() && self.mappings.is_empty() && self.constraints.is_empty()
    }

    pub fn set(&self, name: &str) -> Option<&SetDef> {
        self.by_name.get(name).map(|&i| &self.sets[i])
    }

    fn slot(&self, name: &str) -> Result<&SetIndex, SchemaError> {
        self.by_name
            .get(name)
            .map(|&i| &self.index[i])
            .ok_or_else(|| SchemaError::UnknownSet(name.to_string()))
    }

    fn pick<'a>(&'a self, ids: &'a [usize]) -> impl Iterator<Item = &'a MappingDef> + 'a {
        ids.iter().map(move |&i| &self.mappings[i])
    }

    /// Non-value sets in declaration order.
    pub fn non_value_sets(&self) -> Vec<&SetDef> {
        self.sets.iter().filter(|s| !s.kind.is_value()).collect()
    }

    /// Mappings with domain `set` and a non-value set codomain: structural
    /// functions, set-valued computed mappings, roles and canonical injections.
    pub fn functions_defined_on(&self, set: &str) -> Result<Vec<&MappingDef>, SchemaError> {
        Ok(self.pick(&self.slot(set)?.defined_on).collect())
    }

    /// Mappings whose codomain is `set`.
    pub fn functions_into(&self, set: &str) -> Result<Vec<&MappingDef>, SchemaError> {
        Ok(self.pick(&self.slot(set)?.into).collect())
    }

    /// Mappings with domain `set` and a value codomain, identifier included.
    pub fn attributes_of(&self, set: &str) -> Result<Vec<&MappingDef>, SchemaError> {
        Ok(self.pick(&self.slot(set)?.attributes).collect())
    }

    /// Structural mappings written inside `set`'s declaration block,
    /// whatever their domain.
    pub fn functions_declared_in(&self, set: &str) -> Result<Vec<&MappingDef>, SchemaError> {
        Ok(self.pick(&self.slot(set)?.owned).collect())
    }

    pub fn constraints_involving(&self, set: &str) -> Result<Vec<&ConstraintDef>, SchemaError> {
        Ok(self
            .slot(set)?
            .constraints
            .iter()
            .map(|&i| &self.constraints[i])
            .collect())
    }

    /// Mappings named `name`, any domain, in declaration order.
    pub fn mappings_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a MappingDef> + 'a {
        self.mappings.iter().filter(move |m| m.name == name)
    }

    pub fn mapping(&self, r: &MappingRef) -> Option<&MappingDef> {
        let slot = self.slot(&r.domain).ok()?;
        self.pick(&slot.defined_on)
            .chain(self.pick(&slot.attributes))
            .find(|m| m.name == r.name)
    }

    /// The identifier `x` of `set`, if declared.
    pub fn identifier_of(&self, set: &str) -> Option<&MappingDef> {
        let slot = self.slot(set).ok()?;
        self.pick(&slot.attributes).find(|m| m.is_identifier)
    }

    /// `10^d` when the set has an identifier into `NAT(d)`; for
    /// relationship-type sets without one, the product of the role targets'
    /// bounds when all of them are defined.
    pub fn max_cardinal(&self, set: &str) -> Result<Option<MaxCardinal>, SchemaError> {
        self.slot(set)?;
        let mut visiting = HashSet::new();
        Ok(self.max_cardinal_inner(set, &mut visiting))
    }

    fn max_cardinal_inner<'a>(&'a self, set: &'a str, visiting: &mut HashSet<&'a str>) -> Option<MaxCardinal> {
        if let Some(Codomain::Values(ValueSetExpr::Nat(d))) = self.identifier_of(set).map(|x| &x.codomain) {
            return Some(MaxCardinal { exponent: *d });
        }
        let def = self.set(set)?;
        if !def.kind.is_relationship() || def.roles.is_empty() || !visiting.insert(set) {
            return None;
        }
        let mut exponent = 0u32;
        for role in &def.roles {
            let bound = self.max_cardinal_inner(&role.target, visiting)?;
            exponent = exponent.checked_add(bound.exponent)?;
        }
        visiting.remove(set);
        Some(MaxCardinal { exponent })
    }
}
