//! JSON system files.
//!
//! ```json
//! {"dimension": 2,
//!  "maps": [{"ratio": 0.25, "orthogonal": [[1, 0], [0, 1]], "translation": [0, 0]}, ...]}
//! ```
//!
//! `orthogonal` defaults to the identity. Every validation error names the
//! key path of the offending value, e.g. `maps[0].ratio`.

use std::fs;
use std::path::Path;

use chm_core::{Error as CoreError, IfsSystem, Similitude};
use serde_json::{Map, Value};

use crate::CliError;

fn bad(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Input { path: path.into(), message: message.into() }
}

fn number(v: &Value, path: &str) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| bad(path, format!("expected a number, found {v}")))
}

fn vector(v: &Value, path: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let items = v.as_array().ok_or_else(|| bad(path, "expected an array"))?;
    if items.len() != n {
        return Err(bad(path, format!("expected {n} entries, found {}", items.len())));
    }
    items.iter().enumerate().map(|(i, x)| number(x, &format!("{path}[{i}]"))).collect()
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value, CliError> {
    obj.get(key).ok_or_else(|| bad(format!("{path}.{key}"), "missing key"))
}

fn parse_map(v: &Value, i: usize, n: usize) -> Result<Similitude, CliError> {
    let path = format!("maps[{i}]");
    let obj = v.as_object().ok_or_else(|| bad(&path, "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "ratio" | "orthogonal" | "translation") {
            return Err(bad(format!("{path}.{key}"), "unknown key"));
        }
    }
    let ratio = number(field(obj, "ratio", &path)?, &format!("{path}.ratio"))?;
    let translation = vector(field(obj, "translation", &path)?, &format!("{path}.translation"), n)?;
    let orthogonal = match obj.get("orthogonal") {
        None => {
            let mut q = vec![0.0; n * n];
            (0..n).for_each(|k| q[k * n + k] = 1.0);
            q
        }
        Some(rows) => {
            let rpath = format!("{path}.orthogonal");
            let rows = rows.as_array().ok_or_else(|| bad(&rpath, "expected an n x n array"))?;
            if rows.len() != n {
                return Err(bad(&rpath, format!("expected {n} rows, found {}", rows.len())));
            }
            let mut q = Vec::with_capacity(n * n);
            for (r, row) in rows.iter().enumerate() {
                q.extend(vector(row, &format!("{rpath}[{r}]"), n)?);
            }
            q
        }
    };
    Similitude::new(ratio, orthogonal, translation).map_err(|e| match e.at_map(i) {
        CoreError::RatioOutOfRange { ratio, .. } => bad(format!("{path}.ratio"), format!("{ratio} is not in (0, 1)")),
        CoreError::NotOrthogonal { defect, .. } => {
            bad(format!("{path}.orthogonal"), format!("not orthogonal, defect {defect:e} exceeds 1e-12"))
        }
        CoreError::NonFinite { context } => bad(format!("{path}.{context}"), "value is not finite"),
        other => bad(path.clone(), other.to_string()),
    })
}

/// Parses a system from JSON text.
pub fn parse_system_str(text: &str) -> Result<IfsSystem, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| bad("$", format!("malformed JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| bad("$", "expected a top-level object"))?;
    let dim = field(obj, "dimension", "$")?;
    let n = dim
        .as_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| bad("dimension", format!("expected a positive integer, found {dim}")))? as usize;
    let maps = field(obj, "maps", "$")?.as_array().ok_or_else(|| bad("maps", "expected an array of maps"))?;
    let maps = maps.iter().enumerate().map(|(i, m)| parse_map(m, i, n)).collect::<Result<Vec<_>, _>>()?;
    IfsSystem::new(maps).map_err(|e| bad("maps", e.to_string()))
}

/// Reads and parses a JSON system file.
pub fn parse_system_file(path: impl AsRef<Path>) -> Result<IfsSystem, CliError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| bad(path.display().to_string(), e.to_string()))?;
    parse_system_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_transcription() {
        let sys = parse_system_str(
            r#"{"dimension":1,"maps":[{"ratio":0.3333333333333333,"translation":[0]},
                {"ratio":0.3333333333333333,"translation":[0.6666666666666666]}]}"#,
        )
        .unwrap();
        assert_eq!(sys.len(), 2);
        assert!((sys.dimension() - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn key_paths() {
        let err = |t: &str| parse_system_str(t).unwrap_err().to_string();
        assert!(err(r#"{"dimension":1,"maps":[{"ratio":1.0,"translation":[0]},{"ratio":0.5,"translation":[1]}]}"#)
            .contains("maps[0].ratio"));
        assert!(err(r#"{"dimension":2,"maps":[{"ratio":0.5,"translation":[0,0]},{"ratio":0.5,"translation":[1]}]}"#)
            .contains("maps[1].translation"));
        assert!(err(r#"{"dimension":1,"maps":[{"ratio":0.5,"orthogonal":[[0.5]],"translation":[0]},{"ratio":0.5,"translation":[1]}]}"#)
            .contains("maps[0].orthogonal"));
        assert!(err(r#"{"dimension":1,"maps":[{"translation":[0]}]}"#).contains("maps[0].ratio"));
        assert!(err("{\"dimension\":1,").contains("malformed JSON"));
    }
}
