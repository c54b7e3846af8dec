//! Serializers of an [`ErModel`]: Graphviz DOT for the diagram, Markdown for
//! the restriction set and informal description, JSON for everything.

mod dot;
mod json;
mod markdown;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::erd::ErModel;

pub use dot::to_dot;
pub use json::{from_json, to_json};
pub use markdown::to_markdown;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Dot,
    Json,
    Markdown,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Dot, Format::Json, Format::Markdown];

    pub fn extension(self) -> &'static str {
        match self {
            Format::Dot => "dot",
            Format::Json => "json",
            Format::Markdown => "md",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownFormat(pub String);

impl fmt::Display for UnknownFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown format {:?} (expected dot, json or md)", self.0)
    }
}

impl std::error::Error for UnknownFormat {}

impl FromStr for Format {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dot" | "gv" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Markdown),
            _ => Err(UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RankDir {
    #[default]
    LR,
    TB,
}

impl FromStr for RankDir {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "LR" => Ok(RankDir::LR),
            "TB" => Ok(RankDir::TB),
            _ => Err(format!("unknown rankdir {s:?} (expected LR or TB)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportOptions {
    pub format: Format,
    pub include_informal: bool,
    pub rankdir: RankDir,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions {
            format: Format::Dot,
            include_informal: true,
            rankdir: RankDir::LR,
        }
    }
}

impl ExportOptions {
    pub fn new(format: Format) -> Self {
        ExportOptions {
            format,
            ..Default::default()
        }
    }
}

pub fn export(model: &ErModel, options: &ExportOptions) -> String {
    match options.format {
        Format::Dot => to_dot(model, options),
        Format::Json => to_json(model),
        Format::Markdown => to_markdown(model, options),
    }
}

#[cfg(test)]
mod tests;
