//! `--config FILE` support: `key = value` lines become `--key value` flags
//! placed before the command-line flags, so the command line wins. A JSON
//! run manifest (or report) is accepted too; its `config` echo is replayed.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;

/// Parses a config file into flag arguments. A `command` key names the
/// subcommand; `key = true` becomes a bare `--key`, `key = false` is dropped.
pub fn parse_config(text: &str) -> Result<(Option<String>, Vec<String>)> {
    let mut command = None;
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`", i + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key.is_empty() {
            bail!("config line {}: empty key", i + 1);
        }
        match (key.as_str(), value) {
            ("command", v) => command = Some(v.to_string()),
            (_, "true") => args.push(format!("--{key}")),
            (_, "false") => {}
            (k, v) => {
                args.push(format!("--{k}"));
                args.push(v.to_string());
            }
        }
    }
    Ok((command, args))
}

/// Flags from the `config` object of a manifest, or of the `manifest` inside
/// a JSON report.
pub fn parse_manifest(text: &str) -> Result<(Option<String>, Vec<String>)> {
    let doc: Value = serde_json::from_str(text).context("config is not valid JSON")?;
    let config = doc
        .get("config")
        .or_else(|| doc.get("manifest").and_then(|m| m.get("config")))
        .and_then(Value::as_object)
        .context("JSON config has no `config` object")?;
    let mut command = None;
    let mut args = Vec::new();
    for (key, value) in config {
        let key = key.replace('_', "-");
        match value {
            Value::String(v) if key == "command" => command = Some(v.clone()),
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => args.push(format!("--{key}")),
            Value::String(v) => {
                args.push(format!("--{key}"));
                args.push(v.clone());
            }
            Value::Number(n) => {
                args.push(format!("--{key}"));
                args.push(n.to_string());
            }
            _ => bail!("config key `{key}` has a nested value"),
        }
    }
    Ok((command, args))
}

/// Expands `--config FILE` (or `--config=FILE`) in `argv`.
pub fn expand_args(argv: Vec<String>) -> Result<Vec<String>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut it = argv.into_iter();
    let bin = it.next().unwrap_or_else(|| "spiral-dims".into());
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().context("--config needs a file")?);
        } else if let Some(path) = a.strip_prefix("--config=") {
            config = Some(path.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else {
        let mut out = vec![bin];
        out.extend(rest);
        return Ok(out);
    };
    let text = fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config {path}"))?;
    let (command, flags) = if text.trim_start().starts_with('{') {
        parse_manifest(&text)?
    } else {
        parse_config(&text)?
    };
    let mut out = vec![bin];
    match rest.first() {
        Some(first) if !first.starts_with('-') => {
            out.push(first.clone());
            out.extend(flags);
            out.extend(rest.into_iter().skip(1));
        }
        _ => {
            let Some(cmd) = command else {
                bail!("no subcommand given on the command line or in {path}");
            };
            out.push(cmd);
            out.extend(flags);
            out.extend(rest);
        }
    }
    Ok(out)
}
