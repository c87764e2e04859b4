//! Flat key-value run configuration: INI-style text or a flat JSON object.

use std::collections::BTreeMap;
use std::str::FromStr;

use hamiltonian_hierarchy::dynamics::Potential;
use hamiltonian_hierarchy::observables::parse_poly;

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    /// Parses either format; text starting with `{` is read as JSON.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_ini(text)
        }
    }

    /// `key = value` lines; blank lines, `#`/`;` comments and `[section]` headers are skipped.
    pub fn parse_ini(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') || line.starts_with('[') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_error(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(config_error(format!("line {}: empty key", lineno + 1)));
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(config_error(format!("duplicate key `{key}`")));
            }
        }
        Ok(RunConfig { values })
    }

    /// A flat object; arrays of scalars become comma-separated lists.
    pub fn parse_json(text: &str) -> Result<Self, CliError> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| config_error(format!("invalid JSON config: {e}")))?;
        let obj = v.as_object().ok_or_else(|| config_error("JSON config must be an object"))?;
        let mut values = BTreeMap::new();
        for (key, value) in obj {
            let text = match value {
                serde_json::Value::Array(items) => {
                    items.iter().map(scalar_text).collect::<Result<Vec<_>, _>>()?.join(",")
                }
                other => scalar_text(other)?,
            };
            values.insert(key.clone(), text);
        }
        Ok(RunConfig { values })
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    /// Rejects every key outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(config_error(format!("unknown key `{k}` (allowed: {})", allowed.join(", ")))),
            None => Ok(()),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(s) => s.parse().map_err(|_| config_error(format!("`{key}`: cannot parse `{s}`"))),
        }
    }

    pub fn get_str(&self, key: &str, default: &str) -> String {
        self.values.get(key).cloned().unwrap_or_else(|| default.to_string())
    }

    pub fn get_list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>, CliError> {
        match self.values.get(key) {
            None => Ok(default.to_vec()),
            Some(s) => s
                .split(',')
                .map(|item| item.trim().parse().map_err(|_| config_error(format!("`{key}`: cannot parse `{item}`"))))
                .collect(),
        }
    }

    /// An integer in `lo..=hi`.
    pub fn get_range(&self, key: &str, default: usize, lo: usize, hi: usize) -> Result<usize, CliError> {
        let v: usize = self.get(key, default)?;
        if v < lo || v > hi {
            return Err(config_error(format!("`{key}` = {v} must lie in {lo}..={hi}")));
        }
        Ok(v)
    }

    pub fn get_positive(&self, key: &str, default: f64) -> Result<f64, CliError> {
        let v: f64 = self.get(key, default)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(config_error(format!("`{key}` = {v} must be positive and finite")));
        }
        Ok(v)
    }

    /// `potential` is `zero`, `gaussian` (with `amplitude`, `width`) or an even polynomial
    /// in `x1_1, ..., x1_d`.
    pub fn potential(&self, d: usize) -> Result<Potential, CliError> {
        let spec = self.get_str("potential", "gaussian");
        let result = match spec.as_str() {
            "zero" => Ok(Potential::zero(d)),
            "gaussian" => {
                let amplitude: f64 = self.get("amplitude", 1.0)?;
                Potential::gaussian(d, amplitude, self.get_positive("width", 1.0)?)
            }
            poly => parse_poly(poly, 1, d).and_then(Potential::polynomial),
        };
        result.map_err(|e| config_error(format!("`potential`: {e}")))
    }
}

fn scalar_text(v: &serde_json::Value) -> Result<String, CliError> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::Bool(b) => Ok(b.to_string()),
        other => Err(config_error(format!("JSON config values must be scalars or flat arrays, got {other}"))),
    }
}
