//! Output directory handling: every file goes through [`OutputDir`] so the
//! manifest can list it with its checksum.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointStatusEntry {
    pub index: usize,
    pub status: String,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub config: RunConfig,
    pub points: Vec<PointStatusEntry>,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileEntry>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, data: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        std::fs::write(&path, data).map_err(|e| Error::io(&path, e))?;
        self.files.push(FileEntry {
            name: name.to_string(),
            bytes: data.len() as u64,
            sha256: sha256_hex(data),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut data = serde_json::to_vec_pretty(value)?;
        data.push(b'\n');
        self.write(name, &data)
    }

    /// Writes manifest.json listing every file written so far.
    pub fn finish(mut self, config: &RunConfig, points: Vec<PointStatusEntry>) -> Result<PathBuf> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config: config.clone(),
            points,
            files: std::mem::take(&mut self.files),
        };
        let path = self.root.join("manifest.json");
        let mut data = serde_json::to_vec_pretty(&manifest)?;
        data.push(b'\n');
        std::fs::write(&path, data).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}
