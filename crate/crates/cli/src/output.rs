//! Artifact writers. Every artifact starts with the resolved configuration.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

/// Bumped whenever a column schema or JSON layout changes.
pub const ARTIFACT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub artifact_version: u32,
    pub command: String,
    pub seed: u64,
    pub config: Value,
}

impl Meta {
    pub fn new(command: &str, seed: u64, config: &impl Serialize) -> Result<Self> {
        Ok(Meta {
            artifact_version: ARTIFACT_VERSION,
            command: command.into(),
            seed,
            config: serde_json::to_value(config)?,
        })
    }

    pub fn header_line(&self) -> String {
        format!(
            "pvlab artifact_version={} command={} seed={} config={}",
            self.artifact_version, self.command, self.seed, self.config
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

/// CSV with a leading `#` metadata line, then a header and the rows.
pub fn write_csv<I, R>(path: &Path, meta: &Meta, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    ensure_parent(path)?;
    let mut buf = format!("# {}\n", meta.header_line()).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json(path: &Path, meta: &Meta, summary: Value, checks: &[Check]) -> Result<()> {
    ensure_parent(path)?;
    let doc = json!({
        "artifact_version": meta.artifact_version,
        "command": meta.command,
        "seed": meta.seed,
        "config": meta.config,
        "summary": summary,
        "checks": checks,
    });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// SVG with the metadata as a comment after the XML declaration.
pub fn write_svg(path: &Path, meta: &Meta, svg: &str) -> Result<()> {
    ensure_parent(path)?;
    let comment = format!("<!-- {} -->\n", meta.header_line().replace("--", "- -"));
    let text = match svg.find('\n') {
        Some(i) => format!("{}{}{}", &svg[..=i], comment, &svg[i + 1..]),
        None => format!("{comment}{svg}"),
    };
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Path of the JSON summary that accompanies a CSV file.
pub fn summary_path(csv: &Path) -> std::path::PathBuf {
    csv.with_extension("summary.json")
}
