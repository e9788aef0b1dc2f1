use std::io::Read;

use serde::de::DeserializeOwned;
use serde_json::Value;

use nonclassical::algebra::space::Space;
use nonclassical::ncpoly::{parse_poly, NCPoly, PolyJson};

use crate::{CliError, Global};

pub fn read_raw(g: &Global) -> Result<String, CliError> {
    let mut text = String::new();
    if g.input == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(&g.input).map_err(|e| CliError::Io(format!("{}: {e}", g.input)))?;
    }
    Ok(text)
}

pub fn parse_json<T: DeserializeOwned>(value: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Usage(format!("invalid {what}: {e}")))
}

pub fn read_json(g: &Global) -> Result<Value, CliError> {
    let raw = read_raw(g)?;
    serde_json::from_str(&raw).map_err(|e| CliError::Usage(format!("invalid JSON input: {e}")))
}

/// A polynomial from JSON, or from text with `--p` and `--n`.
pub fn poly_from_str(g: &Global, raw: &str) -> Result<NCPoly, CliError> {
    let trimmed = raw.trim();
    if trimmed.starts_with('{') {
        let json: PolyJson =
            serde_json::from_str(trimmed).map_err(|e| CliError::Usage(format!("invalid polynomial JSON: {e}")))?;
        return Ok(NCPoly::from_json(&json)?);
    }
    let (Some(p), Some(n)) = (g.p, g.n) else {
        return Err(CliError::Usage("text polynomials need --p and --n".into()));
    };
    Ok(parse_poly(&Space::new(p, n)?, trimmed)?)
}

pub fn read_poly(g: &Global) -> Result<NCPoly, CliError> {
    poly_from_str(g, &read_raw(g)?)
}

/// A polynomial embedded in a larger JSON document: an object or a text string.
pub fn poly_from_value(g: &Global, value: &Value) -> Result<NCPoly, CliError> {
    match value {
        Value::String(text) => poly_from_str(g, text),
        other => poly_from_str(g, &other.to_string()),
    }
}

pub fn field<'a>(value: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    value.get(key).ok_or_else(|| CliError::Usage(format!("input is missing \"{key}\"")))
}
