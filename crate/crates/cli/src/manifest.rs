//! Output files and the manifest that lists them.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Command, RunConfig};
use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub seed: u64,
    pub config: RunConfig,
    /// Milliseconds since the Unix epoch. The only fields that change between
    /// identical runs.
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub files: Vec<FileEntry>,
    /// Statistical checks that failed, if any.
    pub failures: Vec<String>,
}

pub fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Provenance header written as the first line of every CSV file.
pub fn csv_comment(cfg: &RunConfig) -> String {
    format!(
        "fraclab {VERSION} {} seed={} manifest={MANIFEST_NAME}",
        cfg.command, cfg.seed
    )
}

/// JSON envelope that points back at the manifest.
pub fn json_envelope(cfg: &RunConfig, result: serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "tool": "fraclab",
        "version": VERSION,
        "command": cfg.command,
        "seed": cfg.seed,
        "manifest": MANIFEST_NAME,
        "result": result,
    })
}

/// Writes files one at a time into a directory, hashing each.
pub struct OutputWriter {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

fn output_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

impl OutputWriter {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| output_error(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| output_error(&path, e))?;
        self.files.push(FileEntry {
            name: name.into(),
            sha256: sha256_hex(contents),
            bytes: contents.len() as u64,
        });
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &serde_json::Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    /// Writes the manifest last; it does not list itself.
    pub fn finish(
        self,
        cfg: &RunConfig,
        started: u64,
        failures: Vec<String>,
    ) -> Result<RunManifest, CliError> {
        let manifest = RunManifest {
            tool: "fraclab".into(),
            version: VERSION.into(),
            command: cfg.command,
            seed: cfg.seed,
            config: cfg.clone(),
            started_unix_ms: started,
            finished_unix_ms: now_ms(),
            files: self.files,
            failures,
        };
        let path = self.dir.join(MANIFEST_NAME);
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|e| output_error(&path, e))?;
        Ok(manifest)
    }
}
