//! All-or-nothing report writing.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

/// Files rendered in memory and published together. Each file is staged
/// in the target directory and renamed into place; if any step fails the
/// files already published by this bundle are removed again.
#[derive(Debug, Default)]
pub struct Bundle {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Bundle {
    pub fn new() -> Self {
        Bundle::default()
    }

    pub fn add(&mut self, path: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.files.push((path.into(), contents.into()));
    }

    pub fn add_json<T: Serialize>(&mut self, path: impl Into<PathBuf>, value: &T) -> CliResult<()> {
        self.add(path, to_json(value)?);
        Ok(())
    }

    pub fn commit(self) -> CliResult<()> {
        let mut staged = Vec::with_capacity(self.files.len());
        for (path, bytes) in &self.files {
            staged.push((path, stage(path, bytes)?));
        }
        let mut published: Vec<&Path> = Vec::new();
        for (path, tmp) in staged {
            if let Err(e) = tmp.persist(path) {
                for p in published {
                    let _ = fs::remove_file(p);
                }
                return Err(CliError::io(path, e.error));
            }
            published.push(path);
        }
        Ok(())
    }
}

fn stage(path: &Path, bytes: &[u8]) -> CliResult<NamedTempFile> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    Ok(tmp)
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(subsetbench_core::Error::from)?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_stdout(bytes: &[u8]) -> CliResult<()> {
    std::io::stdout()
        .lock()
        .write_all(bytes)
        .map_err(|e| CliError::io("<stdout>", e))
}
