use crate::erd::ErModel;

/// Pretty-printed, with a trailing newline. Field order follows the model
/// structs, so equal models give equal bytes.
pub fn to_json(model: &ErModel) -> String {
    let mut out = serde_json::to_string_pretty(model).expect("model serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Result<ErModel, serde_json::Error> {
    serde_json::from_str(text)
}
