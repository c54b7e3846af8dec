//! Translation of (E)MDM schemas into E-R data models with the REA2
//! algorithm: a schema parser, the E-R model, the translator and exporters
//! for Graphviz DOT, Markdown and JSON.
//!
//! ```
//! use emdm_er::{parse_schema, rea2, Rea2Request};
//!
//! let parsed = parse_schema(emdm_er::corpus::GENEALOGY).unwrap();
//! let out = rea2(&parsed.schema, &Rea2Request::sub_model("RULERS", 0)).unwrap();
//! assert_eq!(out.model.nodes().len(), 1);
//! ```

pub mod corpus;
pub mod diag;
pub mod erd;
pub mod export;
pub mod parser;
pub mod rea2;
pub mod schema;
pub mod synth;
pub mod value_set;

pub use diag::{ParseDiagnostic, Severity, SourceSpan};
pub use erd::{Category, ErModel, Restriction};
pub use parser::{parse_schema, ParseFailure, ParsedSchema};
pub use rea2::{rea2, Radius, Rea2Error, Rea2Options, Rea2Output, Rea2Request, StepCounters, SubModelTable};
pub use schema::EmdmSchema;
