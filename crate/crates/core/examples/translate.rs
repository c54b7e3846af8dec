//! Prints the translation of the bundled genealogy schema.
//!
//! `cargo run --example translate -- RULERS 0 md`

use emdm_er::export::{export, ExportOptions, Format};
use emdm_er::{parse_schema, rea2, Rea2Request};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let request = match (
        args.first().filter(|s| !s.is_empty()),
        args.get(1).filter(|s| !s.is_empty()),
    ) {
        (Some(s), Some(r)) => Rea2Request::sub_model(s, r.parse().expect("radius")),
        (Some(s), None) => Rea2Request::single(s),
        _ => Rea2Request::whole_model(),
    };
    let format: Format = args.get(2).map_or(Format::Markdown, |f| f.parse().expect("format"));
    let schema = parse_schema(emdm_er::corpus::GENEALOGY).expect("corpus parses").schema;
    match rea2(&schema, &request) {
        Ok(out) => print!("{}", export(&out.model, &ExportOptions::new(format))),
        Err(e) => eprintln!("{e}"),
    }
}
