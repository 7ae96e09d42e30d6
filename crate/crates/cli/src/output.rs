//! CSV/JSON rendering and atomic file writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::SCHEMA;

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Csv {
            text: format!("{header}\n"),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        writeln!(self.text, "{}", fields.join(",")).unwrap();
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Top-level JSON document with the schema version and run metadata.
pub fn document(command: &str, seed: u64, result: impl Serialize) -> anyhow::Result<String> {
    let doc = json!({
        "schema": SCHEMA,
        "command": command,
        "seed": seed,
        "result": serde_json::to_value(result)?,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

pub struct OutDir {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl OutDir {
    pub fn create(dir: &Path) -> anyhow::Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    /// Writes to a temporary file in the same directory, then renames it into place.
    pub fn write(&mut self, name: &str, contents: &str) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path)
            .with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }
}

/// Records points that did not converge, for the exit-3 path.
#[derive(Default)]
pub struct Diagnostics {
    entries: Vec<Value>,
}

impl Diagnostics {
    pub fn unconverged(&mut self, context: &str, parameter: f64, err_est: f64) {
        self.entries
            .push(json!({ "context": context, "parameter": parameter, "err_est": err_est }));
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn render(&self, command: &str, seed: u64) -> anyhow::Result<String> {
        document(command, seed, json!({ "unconverged": self.entries }))
    }
}
