//! `stratum-chain/1` text form for toy systems and finite chains.
//!
//! ```json
//! {
//!   "levels": [
//!     {"code": "…", "grants": ["phi"], "rules": {"field": true, "oracle_level": 0, "rational": true}}
//!   ],
//!   "name": "C1",
//!   "version": "stratum-chain/1"
//! }
//! ```
//!
//! Keys are emitted sorted. `code` is written for reference and checked on
//! read when present.

use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use stratum_core::chains::{token_by_name, token_name, Rules, ToySystem};

pub const VERSION: &str = "stratum-chain/1";

#[derive(Debug, thiserror::Error)]
pub enum ChainFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected version {VERSION:?}, found {0:?}")]
    Version(String),
    #[error("{0}")]
    Shape(String),
}

fn shape(msg: impl Into<String>) -> ChainFileError {
    ChainFileError::Shape(msg.into())
}

pub fn system_to_value(sys: &ToySystem) -> Value {
    json!({
        "code": sys.code().to_string(),
        "grants": sys.grants.iter().map(|&k| token_name(k)).collect::<Vec<_>>(),
        "rules": {
            "field": sys.rules.field,
            "oracle_level": sys.rules.oracle_level,
            "rational": sys.rules.rational,
        },
    })
}

pub fn system_from_value(v: &Value) -> Result<ToySystem, ChainFileError> {
    let obj = v.as_object().ok_or_else(|| shape("level must be an object"))?;
    let mut grants = Vec::new();
    for g in obj.get("grants").and_then(Value::as_array).ok_or_else(|| shape("missing grants"))? {
        let name = g.as_str().ok_or_else(|| shape("grant must be a string"))?;
        grants.push(token_by_name(name).ok_or_else(|| shape(format!("unknown grant {name:?}")))?);
    }
    let rules = obj.get("rules").and_then(Value::as_object).ok_or_else(|| shape("missing rules"))?;
    let flag = |k: &str| {
        rules
            .get(k)
            .and_then(Value::as_bool)
            .ok_or_else(|| shape(format!("rules.{k} must be a boolean")))
    };
    let oracle_level = rules
        .get("oracle_level")
        .and_then(Value::as_u64)
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| shape("rules.oracle_level must be a natural"))?;
    let sys = ToySystem::new(
        grants,
        Rules {
            rational: flag("rational")?,
            field: flag("field")?,
            oracle_level,
        },
    );
    if let Some(code) = obj.get("code") {
        let code: BigUint = code
            .as_str()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| shape("code must be a decimal string"))?;
        if code != sys.code() {
            return Err(shape(format!("code {code} does not match system {sys} ({})", sys.code())));
        }
    }
    Ok(sys)
}

pub fn chain_to_value(name: &str, systems: &[ToySystem]) -> Value {
    let mut m = Map::new();
    m.insert("levels".into(), Value::Array(systems.iter().map(system_to_value).collect()));
    m.insert("name".into(), Value::String(name.into()));
    m.insert("version".into(), Value::String(VERSION.into()));
    Value::Object(m)
}

pub fn write_chain(name: &str, systems: &[ToySystem]) -> String {
    let mut s = serde_json::to_string_pretty(&chain_to_value(name, systems)).expect("plain values serialize");
    s.push('\n');
    s
}

/// Name and levels of a chain file.
pub fn read_chain(text: &str) -> Result<(String, Vec<ToySystem>), ChainFileError> {
    let v: Value = serde_json::from_str(text)?;
    let version = v.get("version").and_then(Value::as_str).unwrap_or("");
    if version != VERSION {
        return Err(ChainFileError::Version(version.into()));
    }
    let name = v.get("name").and_then(Value::as_str).unwrap_or("chain").to_string();
    let levels = v
        .get("levels")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("missing levels"))?
        .iter()
        .map(system_from_value)
        .collect::<Result<Vec<_>, _>>()?;
    Ok((name, levels))
}
