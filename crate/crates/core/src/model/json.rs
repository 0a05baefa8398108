use super::{MisdpModel, ModelError};

/// Pretty-printed JSON with a trailing newline. Field order is fixed by the
/// type definitions, so equal models give identical bytes.
pub fn export_json(m: &MisdpModel) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("model serializes");
    s.push('\n');
    s
}

pub fn import_json(text: &str) -> Result<MisdpModel, ModelError> {
    let mut m: MisdpModel =
        serde_json::from_str(text).map_err(|e| ModelError::Parse { line: e.line(), msg: e.to_string() })?;
    m.canonicalize();
    Ok(m)
}
