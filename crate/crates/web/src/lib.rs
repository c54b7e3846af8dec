//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export takes the schema source text and returns JSON or SVG, so the
//! page keeps no state of its own.

mod svg;

use emdm_er::export::{to_dot, to_json, to_markdown, ExportOptions, Format};
use emdm_er::{parse_schema, rea2, ParseDiagnostic, Rea2Request};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn diagnostics(ds: &[ParseDiagnostic]) -> Vec<Value> {
    ds.iter()
        .map(|d| json!({ "line": d.span.line, "column": d.span.column, "severity": d.severity, "message": d.message }))
        .collect()
}

fn request(center: &str, radius: i32) -> Rea2Request {
    let center = center.trim();
    match (center.is_empty(), radius) {
        (true, _) => Rea2Request::whole_model(),
        (false, r) if r < 0 => Rea2Request::single(center),
        (false, r) => Rea2Request::sub_model(center, r as u32),
    }
}

/// `{ok, diagnostics, sets}`; `sets` lists the non-value sets usable as centers.
pub fn validate_json(source: &str) -> Value {
    match parse_schema(source) {
        Ok(p) => json!({
            "ok": true,
            "diagnostics": diagnostics(&p.diagnostics),
            "sets": p.schema.non_value_sets().iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
        }),
        Err(f) => json!({ "ok": false, "diagnostics": diagnostics(&f.diagnostics), "sets": [] }),
    }
}

/// Empty `center` means the whole model; a negative radius means none given.
pub fn translate_json(source: &str, center: &str, radius: i32) -> Result<Value, String> {
    let parsed = parse_schema(source).map_err(|e| e.to_string())?;
    let out = rea2(&parsed.schema, &request(center, radius)).map_err(|e| e.to_string())?;
    Ok(json!({
        "dot": to_dot(&out.model, &ExportOptions::default()),
        "markdown": to_markdown(&out.model, &ExportOptions::new(Format::Markdown)),
        "model": serde_json::from_str::<Value>(&to_json(&out.model)).expect("valid JSON"),
        "table": out.table,
        "counters": out.counters,
    }))
}

pub fn render_svg_text(source: &str, center: &str, radius: i32, show_attributes: bool) -> Result<String, String> {
    let parsed = parse_schema(source).map_err(|e| e.to_string())?;
    let out = rea2(&parsed.schema, &request(center, radius)).map_err(|e| e.to_string())?;
    Ok(svg::render(&out.model, show_attributes))
}

#[wasm_bindgen]
pub fn validate(source: &str) -> String {
    validate_json(source).to_string()
}

#[wasm_bindgen]
pub fn translate(source: &str, center: &str, radius: i32) -> Result<String, JsError> {
    translate_json(source, center, radius)
        .map(|v| v.to_string())
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = renderSvg)]
pub fn render_svg(source: &str, center: &str, radius: i32, show_attributes: bool) -> Result<String, JsError> {
    render_svg_text(source, center, radius, show_attributes).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sampleSchema)]
pub fn sample_schema() -> String {
    emdm_er::corpus::GENEALOGY.to_string()
}
