//! Algorithm REA2: translation of an (E)MDM schema, or the part of it
//! within a given radius of a center set, into an E-R data model.
//!
//! Each method of the algorithm is a function here. The recursion of
//! `addSet` through `addStructuralFunctions` runs on an explicit stack so
//! long chains of sets cannot overflow the call stack.

mod texts;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::erd::{Category, ErModel, ErdError, InformalEntry, Restriction, Shape};
use crate::schema::{ConstraintKind, EmdmSchema, MappingDef, MappingKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rea2Error {
    #[error("Unknown set name {0}!")]
    UnknownSet(String),
    #[error("{0} is a value set; E-R diagrams only show object and computed sets")]
    ValueSetCenter(String),
    #[error(transparent)]
    Model(#[from] ErdError),
}

/// Radius of a sub-model. Whole-model runs use `Unbounded`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Radius {
    Finite(u32),
    Unbounded,
}

impl Radius {
    fn is_zero(self) -> bool {
        self == Radius::Finite(0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rea2Request {
    pub center: Option<String>,
    pub radius: Option<u32>,
}

impl Rea2Request {
    pub fn whole_model() -> Self {
        Self::default()
    }

    pub fn single(center: &str) -> Self {
        Rea2Request {
            center: Some(center.to_string()),
            radius: None,
        }
    }

    pub fn sub_model(center: &str, radius: u32) -> Self {
        Rea2Request {
            center: Some(center.to_string()),
            radius: Some(radius),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rea2Options {
    /// Sub-model mode only: every structural function of a set pulls its
    /// codomain in, even one hop beyond the radius.
    pub spill_boundary: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCounters {
    pub sets_processed: usize,
    pub functions_read: usize,
    pub attributes_read: usize,
    pub constraints_read: usize,
    pub addset_body_runs: BTreeMap<String, usize>,
}

impl StepCounters {
    pub fn total(&self) -> usize {
        self.sets_processed + self.functions_read + self.attributes_read + self.constraints_read
    }

    pub fn max_body_runs(&self) -> usize {
        self.addset_body_runs.values().copied().max().unwrap_or(0)
    }
}

/// The `S_A` array: discovered sets with their distance from the center.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(from = "Vec<(String, usize)>", into = "Vec<(String, usize)>")]
pub struct SubModelTable {
    rows: Vec<(String, usize)>,
    seen: HashSet<String>,
}

impl PartialEq for SubModelTable {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for SubModelTable {}

impl From<Vec<(String, usize)>> for SubModelTable {
    fn from(rows: Vec<(String, usize)>) -> Self {
        let seen = rows.iter().map(|(s, _)| s.clone()).collect();
        SubModelTable { rows, seen }
    }
}

impl From<SubModelTable> for Vec<(String, usize)> {
    fn from(t: SubModelTable) -> Self {
        t.rows
    }
}

impl SubModelTable {
    pub fn new(center: &str) -> Self {
        let mut t = SubModelTable::default();
        t.rows.push((center.to_string(), 0));
        t.seen.insert(center.to_string());
        t
    }

    pub fn rows(&self) -> &[(String, usize)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, set: &str) -> bool {
        self.seen.contains(set)
    }

    pub fn level_of(&self, set: &str) -> Option<usize> {
        self.rows.iter().find(|(s, _)| s == set).map(|&(_, l)| l)
    }

    /// Appends `set` at `level` unless it is already stored.
    pub fn other_set(&mut self, set: &str, level: usize) -> bool {
        if !self.seen.insert(set.to_string()) {
            return false;
        }
        self.rows.push((set.to_string(), level));
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rea2Output {
    pub model: ErModel,
    pub counters: StepCounters,
    /// Present for sub-model runs (center given, radius ≥ 1).
    pub table: Option<SubModelTable>,
}

pub fn rea2(schema: &EmdmSchema, request: &Rea2Request) -> Result<Rea2Output, Rea2Error> {
    rea2_with(schema, request, Rea2Options::default())
}

pub fn rea2_with(schema: &EmdmSchema, request: &Rea2Request, options: Rea2Options) -> Result<Rea2Output, Rea2Error> {
    if let Some(s) = &request.center {
        match schema.set(s) {
            None => return Err(Rea2Error::UnknownSet(s.clone())),
            Some(def) if def.kind.is_value() => return Err(Rea2Error::ValueSetCenter(s.clone())),
            Some(_) => {}
        }
    }
    let mut run = Run::new(schema, options);
    let mut table = None;
    match (&request.center, request.radius.unwrap_or(0)) {
        (Some(s), 0) => add_set(&mut run, s, Radius::Finite(0))?,
        (None, _) => {
            for def in schema.non_value_sets() {
                add_set(&mut run, &def.name, Radius::Unbounded)?;
            }
        }
        (Some(s), r) => table = Some(sub_model(&mut run, s, r)?),
    }
    Ok(Rea2Output {
        model: run.model,
        counters: run.counters,
        table,
    })
}

/// State of one translation run.
pub struct Run<'a> {
    schema: &'a EmdmSchema,
    options: Rea2Options,
    pub model: ErModel,
    pub counters: StepCounters,
    scope: Option<HashSet<String>>,
}

impl<'a> Run<'a> {
    pub fn new(schema: &'a EmdmSchema, options: Rea2Options) -> Self {
        Run {
            schema,
            options,
            model: ErModel::new(),
            counters: StepCounters::default(),
            scope: None,
        }
    }

    fn in_scope(&self, set: &str) -> bool {
        self.options.spill_boundary || self.scope.as_ref().is_none_or(|s| s.contains(set))
    }

    fn restrict(
        &mut self,
        category: Category,
        set: &str,
        subject: String,
        text: String,
        comment: Option<String>,
        origin: usize,
    ) -> Result<(), Rea2Error> {
        self.model.add_restriction(Restriction {
            category,
            set: set.to_string(),
            subject,
            text,
            comment,
            origin_decl_index: origin,
        })?;
        Ok(())
    }
}

pub fn compute_cardinal(schema: &EmdmSchema) -> usize {
    let mut n = 0;
    for _ in schema.non_value_sets() {
        n += 1;
    }
    n
}

/// Level-by-level discovery of the sets within radius `r` of `s`,
/// then `addSet` on each of them.
pub fn sub_model(run: &mut Run, s: &str, r: u32) -> Result<SubModelTable, Rea2Error> {
    let schema = run.schema;
    let n = compute_cardinal(schema);
    let mut table = SubModelTable::new(s);
    let r = r as usize;
    let (mut i, mut j, mut oldj) = (1usize, 1usize, 0usize);
    while i <= r && j <= n && j != oldj {
        oldj = j;
        let mut k = j as isize - 1;
        while k >= 0 && table.rows[k as usize].1 == i - 1 {
            let current = table.rows[k as usize].0.clone();
            let unknown = |_| Rea2Error::UnknownSet(current.clone());
            for f in schema.functions_defined_on(&current).map_err(unknown)? {
                run.counters.functions_read += 1;
                if let Some(c) = f.codomain.set_name() {
                    if table.other_set(c, i) {
                        j += 1;
                    }
                }
            }
            for f in schema.functions_into(&current).map_err(unknown)? {
                run.counters.functions_read += 1;
                if table.other_set(&f.domain, i) {
                    j += 1;
                }
            }
            k -= 1;
        }
        i += 1;
    }
    run.scope = Some(table.rows.iter().map(|(s, _)| s.clone()).collect());
    let radius = Radius::Finite(r as u32);
    for (set, _) in table.rows.clone() {
        add_set(run, &set, radius)?;
    }
    Ok(table)
}

/// One pending `addSet` body: the structural functions still to process,
/// and the function whose arrow waits for its codomain's `addSet`.
struct Frame<'a> {
    set: &'a str,
    functions: Vec<&'a MappingDef>,
    next: usize,
    waiting: Option<&'a MappingDef>,
}

/// Recursive calls made by `addStructuralFunctions` are unrolled
/// onto `stack`.
pub fn add_set<'a>(run: &mut Run<'a>, s: &str, r: Radius) -> Result<(), Rea2Error> {
    let mut stack: Vec<Frame<'a>> = Vec::new();
    if let Some(frame) = enter_set(run, s, r)? {
        stack.push(frame);
    }
    while let Some(top) = stack.last_mut() {
        if let Some(f) = top.waiting.take() {
            draw_function(run, f)?;
            continue;
        }
        let Some(&f) = top.functions.get(top.next) else {
            let set = top.set;
            stack.pop();
            leave_set(run, set)?;
            continue;
        };
        top.next += 1;
        run.counters.functions_read += 1;
        let c = f.codomain.set_name().unwrap_or_default();
        if !run.in_scope(c) {
            add_func_restrictions(run, f, &f.domain)?;
            continue;
        }
        top.waiting = Some(f);
        if c != f.domain {
            if let Some(child) = enter_set(run, c, r)? {
                stack.push(child);
            }
        }
    }
    Ok(())
}

/// The part of `addSet` before its recursive calls. Returns `None` when the
/// guard finds the set already described.
fn enter_set<'a>(run: &mut Run<'a>, s: &str, r: Radius) -> Result<Option<Frame<'a>>, Rea2Error> {
    let schema = run.schema;
    if run.model.has_informal(s) {
        return Ok(None);
    }
    let def = schema.set(s).ok_or_else(|| Rea2Error::UnknownSet(s.to_string()))?;
    let s = def.name.as_str();
    run.counters.sets_processed += 1;
    *run.counters.addset_body_runs.entry(s.to_string()).or_default() += 1;

    let card = schema
        .max_cardinal(s)
        .map_err(|_| Rea2Error::UnknownSet(s.to_string()))?;
    run.model.add_informal(InformalEntry {
        subject: s.to_string(),
        text: texts::set_description(schema, def, card),
    })?;
    if def.kind.is_relationship() {
        add_relationship_type(&mut run.model, s, def.kind.is_computed())?;
    } else {
        add_entity_type(&mut run.model, s, def.kind.is_computed())?;
    }
    if let Some(card) = card {
        run.restrict(
            Category::MaxCardinality,
            s,
            s.to_string(),
            texts::max_cardinality(s, card),
            None,
            def.decl_index,
        )?;
    }
    add_attributes(run, s)?;
    Ok(Some(Frame {
        set: s,
        functions: structural_functions(run, s, r)?,
        next: 0,
        waiting: None,
    }))
}

/// Selection of the functions whose arrows `addSet(D, r)` draws.
fn structural_functions<'a>(run: &Run<'a>, d: &str, r: Radius) -> Result<Vec<&'a MappingDef>, Rea2Error> {
    let def = run.schema.set(d).ok_or_else(|| Rea2Error::UnknownSet(d.to_string()))?;
    let relationship = def.kind.is_relationship();
    if !relationship && r.is_zero() {
        return Ok(Vec::new());
    }
    let all = run
        .schema
        .functions_defined_on(d)
        .map_err(|_| Rea2Error::UnknownSet(d.to_string()))?;
    if r.is_zero() {
        return Ok(all.into_iter().filter(|f| f.kind == MappingKind::Role).collect());
    }
    Ok(all)
}

/// The arrow and restrictions of one function, after its codomain is in.
fn draw_function(run: &mut Run, f: &MappingDef) -> Result<(), Rea2Error> {
    let c = f.codomain.set_name().unwrap_or_default();
    run.model
        .add_edge(&f.domain, c, &f.name, f.is_computed(), f.one_to_one)?;
    add_func_restrictions(run, f, &f.domain)
}

/// The part of `addSet` after its recursive calls: restrictions of the
/// functions written in `s`'s block, then the constraints involving `s`.
fn leave_set(run: &mut Run, s: &str) -> Result<(), Rea2Error> {
    let schema = run.schema;
    let unknown = |_| Rea2Error::UnknownSet(s.to_string());
    for f in schema.functions_declared_in(s).map_err(unknown)? {
        run.counters.functions_read += 1;
        add_func_restrictions(run, f, s)?;
    }
    for c in schema.constraints_involving(s).map_err(unknown)? {
        run.counters.constraints_read += 1;
        let subject = c.display_name();
        let category = match c.kind {
            ConstraintKind::Key(_) => Category::Uniqueness,
            _ => Category::Other,
        };
        if run.model.has_informal(&subject) {
            continue;
        }
        run.restrict(
            category,
            s,
            subject.clone(),
            texts::constraint(c),
            c.comment.clone(),
            c.decl_index,
        )?;
        run.model.add_informal(InformalEntry {
            subject,
            text: texts::constraint_description(c),
        })?;
    }
    Ok(())
}

pub fn add_attributes(run: &mut Run, s: &str) -> Result<(), Rea2Error> {
    let schema = run.schema;
    for a in schema
        .attributes_of(s)
        .map_err(|_| Rea2Error::UnknownSet(s.to_string()))?
    {
        run.counters.attributes_read += 1;
        run.model.add_ellipse(s, &a.name, a.is_computed(), a.is_identifier)?;
        if !a.is_identifier {
            if let Some(range) = texts::data_range(a) {
                run.restrict(
                    Category::DataRange,
                    s,
                    a.mapping_ref().to_string(),
                    range,
                    None,
                    a.decl_index,
                )?;
            }
        }
        add_func_restrictions(run, a, s)?;
    }
    Ok(())
}

/// `owner` is the set whose restriction list receives the entries.
pub fn add_func_restrictions(run: &mut Run, f: &MappingDef, owner: &str) -> Result<(), Rea2Error> {
    let subject = f.mapping_ref().to_string();
    let origin = f.decl_index;
    if !run.model.has_informal(&subject) {
        run.model.add_informal(InformalEntry {
            subject: subject.clone(),
            text: texts::function_description(run.schema, f),
        })?;
    }
    if f.is_computed() {
        return run.restrict(
            Category::Other,
            owner,
            subject,
            texts::formula(f),
            f.comment.clone(),
            origin,
        );
    }
    let injection = f.kind == MappingKind::CanonicalInjection;
    if f.total || f.kind == MappingKind::Role || injection {
        run.restrict(
            Category::Compulsory,
            owner,
            subject.clone(),
            f.name.clone(),
            None,
            origin,
        )?;
    }
    if let Some(v) = &f.default_value {
        let text = format!("{}'s default value is {v}", f.name);
        run.restrict(Category::Other, owner, subject.clone(), text, None, origin)?;
    }
    if (f.one_to_one || injection) && !f.is_identifier {
        run.restrict(
            Category::Uniqueness,
            owner,
            subject.clone(),
            f.name.clone(),
            f.comment.clone(),
            origin,
        )?;
    }
    if f.onto {
        run.restrict(
            Category::Other,
            owner,
            subject.clone(),
            format!("{} onto", f.name),
            None,
            origin,
        )?;
    }
    if f.is_self_map() {
        for p in &f.dyadic_props {
            let text = format!("{} {}", f.name, p.keyword());
            run.restrict(Category::Other, owner, subject.clone(), text, f.comment.clone(), origin)?;
        }
    }
    Ok(())
}

pub fn add_entity_type(model: &mut ErModel, e: &str, computed: bool) -> Result<bool, Rea2Error> {
    Ok(model.add_node(e, Shape::Rectangle, computed)?)
}

pub fn add_relationship_type(model: &mut ErModel, r: &str, computed: bool) -> Result<bool, Rea2Error> {
    Ok(model.add_node(r, Shape::Diamond, computed)?)
}

/// Distances from `s` over the undirected graph of all structural
/// mappings, by plain breadth-first search. Independent of `sub_model`; the
/// tests compare the two.
pub fn bfs_oracle(schema: &EmdmSchema, s: &str) -> BTreeMap<String, usize> {
    let mut adjacent: HashMap<&str, Vec<&str>> = HashMap::new();
    for m in schema.mappings() {
        if let Some(c) = m.codomain.set_name() {
            adjacent.entry(m.domain.as_str()).or_default().push(c);
            adjacent.entry(c).or_default().push(m.domain.as_str());
        }
    }
    let mut dist = BTreeMap::new();
    dist.insert(s.to_string(), 0);
    let mut queue = VecDeque::from([(s, 0usize)]);
    while let Some((v, d)) = queue.pop_front() {
        for &w in adjacent.get(v).map(Vec::as_slice).unwrap_or_default() {
            if !dist.contains_key(w) {
                dist.insert(w.to_string(), d + 1);
                queue.push_back((w, d + 1));
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests;
