//! Configuration-file support: a flat `key = value` text format (one
//! dotted key per line, `#` comments) and a JSON-object alternative.
//! Command-line flags override file values; unknown keys are rejected.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::path::Path;

use crate::AppError;

/// Values loaded from a config file, with consumption tracking so
/// unrecognized keys can be reported.
#[derive(Debug, Default)]
pub struct ParamMap {
    values: BTreeMap<String, String>,
    consumed: BTreeSet<String>,
}

impl ParamMap {
    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            Self::from_json(&text)
        } else {
            Self::from_key_values(&text)
        }
    }

    fn from_json(text: &str) -> Result<Self, AppError> {
        let parsed: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| AppError::usage(format!("malformed JSON config: {e}")))?;
        let obj = parsed
            .as_object()
            .ok_or_else(|| AppError::usage("JSON config must be a flat object"))?;
        let mut values = BTreeMap::new();
        for (k, v) in obj {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Bool(b) => b.to_string(),
                other => {
                    return Err(AppError::usage(format!(
                        "config key {k} has non-scalar value {other}"
                    )))
                }
            };
            values.insert(k.clone(), s);
        }
        Ok(Self { values, consumed: BTreeSet::new() })
    }

    fn from_key_values(text: &str) -> Result<Self, AppError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                AppError::usage(format!("config line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(AppError::usage(format!("config line {}: empty key", lineno + 1)));
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(AppError::usage(format!("config key {key} given twice")));
            }
        }
        Ok(Self { values, consumed: BTreeSet::new() })
    }

    /// Raw string lookup; marks the key consumed.
    pub fn take(&mut self, key: &str) -> Option<String> {
        self.consumed.insert(key.to_string());
        self.values.get(key).cloned()
    }

    /// Errors on any key never consumed by the active command.
    pub fn finish(&self) -> Result<(), AppError> {
        let unknown: Vec<&String> =
            self.values.keys().filter(|k| !self.consumed.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(AppError::usage(format!(
                "unknown config key(s): {}",
                unknown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            )))
        }
    }
}

/// Flag value, else config value, else default; flags always win.
pub fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    cfg: &mut ParamMap,
    key: &str,
    default: T,
) -> Result<T, AppError>
where
    T::Err: std::fmt::Display,
{
    resolve_opt(flag, cfg, key)?.map_or(Ok(default), Ok)
}

/// As `resolve`, but without a default.
pub fn resolve_opt<T: std::str::FromStr>(
    flag: Option<T>,
    cfg: &mut ParamMap,
    key: &str,
) -> Result<Option<T>, AppError>
where
    T::Err: std::fmt::Display,
{
    if flag.is_some() {
        cfg.take(key);
        return Ok(flag);
    }
    match cfg.take(key) {
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|e| AppError::usage(format!("config key {key} = {raw}: {e}"))),
        None => Ok(None),
    }
}

/// As `resolve`, erroring when the parameter is absent everywhere.
pub fn resolve_required<T: std::str::FromStr>(
    flag: Option<T>,
    cfg: &mut ParamMap,
    key: &str,
) -> Result<T, AppError>
where
    T::Err: std::fmt::Display,
{
    resolve_opt(flag, cfg, key)?
        .ok_or_else(|| AppError::usage(format!("missing required parameter --{key}")))
}
