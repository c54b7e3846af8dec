//! The output E-R data model: diagram graph, associated restriction set and
//! informal description.
//!
//! Every `add_*` operation is idempotent and reports whether it inserted.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErdError {
    #[error("node {label} already exists with a different shape or style")]
    NodeConflict { label: String },
    #[error("no node labeled {0}")]
    MissingNode(String),
    #[error("restriction has empty text")]
    EmptyRestriction,
    #[error("informal entry for {0} has empty text")]
    EmptyInformal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Rectangle,
    Diamond,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeEllipse {
    pub label: String,
    pub dotted: bool,
    /// Set for the object identifier.
    pub underlined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErNode {
    pub label: String,
    pub shape: Shape,
    pub dotted: bool,
    pub ellipses: Vec<AttributeEllipse>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErEdge {
    pub from: String,
    pub to: String,
    pub label: String,
    pub dotted: bool,
    pub double_arrow: bool,
}

impl ErEdge {
    pub fn is_self_loop(&self) -> bool {
        self.from == self.to
    }
}

/// Restriction groups, in the order they are listed for each set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    MaxCardinality,
    DataRange,
    Compulsory,
    Uniqueness,
    Other,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::MaxCardinality,
        Category::DataRange,
        Category::Compulsory,
        Category::Uniqueness,
        Category::Other,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Restriction {
    pub category: Category,
    /// Set whose restriction list this entry belongs to.
    pub set: String,
    /// Set name, `DOMAIN.mapping` reference or constraint label.
    pub subject: String,
    pub text: String,
    pub comment: Option<String>,
    pub origin_decl_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InformalEntry {
    pub subject: String,
    pub text: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ModelData", into = "ModelData")]
pub struct ErModel {
    data: ModelData,
    index: ModelIndex,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct ModelData {
    nodes: Vec<ErNode>,
    edges: Vec<ErEdge>,
    restrictions: Vec<Restriction>,
    informal: Vec<InformalEntry>,
}

/// Lookup tables kept in sync with `ModelData`; rebuilt on deserialization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct ModelIndex {
    nodes: HashMap<String, usize>,
    edges: HashSet<(String, String)>,
    restrictions: HashSet<(Category, String, String)>,
    informal: HashSet<String>,
}

impl From<ModelData> for ErModel {
    fn from(data: ModelData) -> Self {
        let index = ModelIndex {
            nodes: data
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| (n.label.clone(), i))
                .collect(),
            edges: data.edges.iter().map(|e| (e.from.clone(), e.label.clone())).collect(),
            restrictions: data
                .restrictions
                .iter()
                .map(|r| (r.category, r.subject.clone(), r.text.clone()))
                .collect(),
            informal: data.informal.iter().map(|e| e.subject.clone()).collect(),
        };
        ErModel { data, index }
    }
}

impl From<ErModel> for ModelData {
    fn from(m: ErModel) -> Self {
        m.data
    }
}

impl ErModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> &[ErNode] {
        &self.data.nodes
    }

    pub fn edges(&self) -> &[ErEdge] {
        &self.data.edges
    }

    pub fn restrictions(&self) -> &[Restriction] {
        &self.data.restrictions
    }

    pub fn informal(&self) -> &[InformalEntry] {
        &self.data.informal
    }

    pub fn node(&self, label: &str) -> Option<&ErNode> {
        self.index.nodes.get(label).map(|&i| &self.data.nodes[i])
    }

    pub fn has_informal(&self, subject: &str) -> bool {
        self.index.informal.contains(subject)
    }

    pub fn informal_for(&self, subject: &str) -> Option<&InformalEntry> {
        self.data.informal.iter().find(|e| e.subject == subject)
    }

    pub fn restrictions_of<'a>(&'a self, set: &'a str) -> impl Iterator<Item = &'a Restriction> + 'a {
        self.data.restrictions.iter().filter(move |r| r.set == set)
    }

    pub fn add_node(&mut self, label: &str, shape: Shape, dotted: bool) -> Result<bool, ErdError> {
        if let Some(&i) = self.index.nodes.get(label) {
            let n = &self.data.nodes[i];
            if n.shape != shape || n.dotted != dotted {
                return Err(ErdError::NodeConflict {
                    label: label.to_string(),
                });
            }
            return Ok(false);
        }
        self.index.nodes.insert(label.to_string(), self.data.nodes.len());
        self.data.nodes.push(ErNode {
            label: label.to_string(),
            shape,
            dotted,
            ellipses: Vec::new(),
        });
        Ok(true)
    }

    pub fn add_ellipse(&mut self, node: &str, label: &str, dotted: bool, underlined: bool) -> Result<bool, ErdError> {
        let &i = self
            .index
            .nodes
            .get(node)
            .ok_or_else(|| ErdError::MissingNode(node.to_string()))?;
        let ellipses = &mut self.data.nodes[i].ellipses;
        if ellipses.iter().any(|e| e.label == label) {
            return Ok(false);
        }
        ellipses.push(AttributeEllipse {
            label: label.to_string(),
            dotted,
            underlined,
        });
        Ok(true)
    }

    pub fn add_edge(
        &mut self,
        from: &str,
        to: &str,
        label: &str,
        dotted: bool,
        double_arrow: bool,
    ) -> Result<bool, ErdError> {
        for end in [from, to] {
            if !self.index.nodes.contains_key(end) {
                return Err(ErdError::MissingNode(end.to_string()));
            }
        }
        if !self.index.edges.insert((from.to_string(), label.to_string())) {
            return Ok(false);
        }
        self.data.edges.push(ErEdge {
            from: from.to_string(),
            to: to.to_string(),
            label: label.to_string(),
            dotted,
            double_arrow,
        });
        Ok(true)
    }

    pub fn add_restriction(&mut self, r: Restriction) -> Result<bool, ErdError> {
        if r.text.trim().is_empty() {
            return Err(ErdError::EmptyRestriction);
        }
        if !self
            .index
            .restrictions
            .insert((r.category, r.subject.clone(), r.text.clone()))
        {
            return Ok(false);
        }
        self.data.restrictions.push(r);
        Ok(true)
    }

    pub fn add_informal(&mut self, entry: InformalEntry) -> Result<bool, ErdError> {
        if entry.text.trim().is_empty() {
            return Err(ErdError::EmptyInformal(entry.subject));
        }
        if !self.index.informal.insert(entry.subject.clone()) {
            return Ok(false);
        }
        self.data.informal.push(entry);
        Ok(true)
    }
}
