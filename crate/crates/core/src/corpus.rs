//! Bundled example schemas.

/// A subset of the GENEALOGIES sub-universe: 7 object sets, 26 constraints.
pub const GENEALOGY: &str = include_str!("../corpus/genealogy.emdm");
