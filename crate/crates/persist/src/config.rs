//! Config files: flat `key = value` text or a JSON object.
//!
//! Entries become `--key value` arguments placed ahead of the command-line
//! flags, so explicit flags take precedence.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("config JSON: {0}")]
    Json(String),
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(trimmed).map_err(|e| ConfigError::Json(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| ConfigError::Json("top level must be an object".into()))?;
        return obj
            .iter()
            .map(|(k, v)| Ok((k.clone(), json_scalar(v)?)))
            .collect();
    }
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or(ConfigError::Syntax { line: i + 1 })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(ConfigError::Syntax { line: i + 1 });
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn json_scalar(v: &serde_json::Value) -> Result<String, ConfigError> {
    use serde_json::Value;
    Ok(match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Array(items) => items
            .iter()
            .map(json_scalar)
            .collect::<Result<Vec<_>, _>>()?
            .join(","),
        _ => return Err(ConfigError::Json("values must be scalars or arrays".into())),
    })
}

pub fn load_config(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

/// Finds `--config PATH` / `--config=PATH` after the subcommand and splices
/// the file's entries in directly after the subcommand name.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else if s == "--config" {
            path = args.get(i + 1).map(|p| p.to_string_lossy().into_owned());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let entries = load_config(Path::new(&path))?;
    // args[0] is the binary, args[1] the subcommand.
    let split = args.len().min(2);
    let mut out: Vec<OsString> = args[..split].to_vec();
    for (k, v) in entries {
        out.push(format!("--{k}={v}").into());
    }
    out.extend_from_slice(&args[split..]);
    Ok(out)
}
