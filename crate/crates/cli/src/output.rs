//! Artifact placement and run manifests.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::{Command, OutputArgs};

pub const SCHEMA: u32 = 1;

/// Default output directory when `--out` is absent.
pub const OUT_DIR_ENV: &str = "SPIRAL_DIMS_OUT_DIR";

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub library_version: &'static str,
    pub config: &'a Command,
    pub artifacts: Vec<String>,
}

impl<'a> Manifest<'a> {
    pub fn new(config: &'a Command, artifacts: Vec<String>) -> Self {
        Self {
            schema: SCHEMA,
            tool: "spiral-dims",
            version: env!("CARGO_PKG_VERSION"),
            library_version: spiral_dims::VERSION,
            config,
            artifacts,
        }
    }
}

fn target(output: &OutputArgs, command: &str, ext: &str) -> Option<PathBuf> {
    output.out.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| Path::new(&d).join(format!("{command}.{ext}")))
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn to_pretty(v: &impl Serialize) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes a CSV or SVG artifact and its manifest. `extra` lists further
/// files the command already wrote.
pub fn emit_text(cmd: &Command, output: &OutputArgs, ext: &str, body: &str, extra: &[PathBuf]) -> Result<()> {
    let out = target(output, cmd.name(), ext);
    let mut artifacts: Vec<String> = out.iter().map(|p| p.display().to_string()).collect();
    artifacts.extend(extra.iter().map(|p| p.display().to_string()));
    let manifest = to_pretty(&Manifest::new(cmd, artifacts))?;
    match &out {
        Some(path) => write_file(path, body.as_bytes())?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    match (&output.manifest, &out) {
        (Some(m), _) => write_file(m, &manifest)?,
        (None, Some(path)) => write_file(&manifest_path(path), &manifest)?,
        (None, None) => io::stderr().lock().write_all(&manifest)?,
    }
    Ok(())
}

/// Writes a JSON report `{schema, manifest, result}`.
pub fn emit_json(cmd: &Command, output: &OutputArgs, result: Value, extra: &[PathBuf]) -> Result<()> {
    let out = target(output, cmd.name(), "json");
    let mut artifacts: Vec<String> = out.iter().map(|p| p.display().to_string()).collect();
    artifacts.extend(extra.iter().map(|p| p.display().to_string()));
    let manifest = Manifest::new(cmd, artifacts);
    let doc = json!({ "schema": SCHEMA, "manifest": manifest, "result": result });
    let bytes = to_pretty(&doc)?;
    match &out {
        Some(path) => write_file(path, &bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    if let Some(m) = &output.manifest {
        write_file(m, &to_pretty(&manifest)?)?;
    }
    Ok(())
}

pub fn write_side_file(path: &Path, bytes: &[u8]) -> Result<()> {
    write_file(path, bytes)
}
