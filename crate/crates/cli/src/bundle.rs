//! Atomic output bundles.
//!
//! A bundle is built in a hidden `.NAME.partial` sibling directory and only
//! renamed into place after `manifest.json` has been written. A directory
//! without a manifest, or one still carrying the partial suffix, is an
//! interrupted run and is refused by [`open_bundle`].

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::sha256_hex;
use crate::csvio::Stamp;
use crate::error::{CliError, CliResult};

pub const MANIFEST: &str = "manifest.json";
const PARTIAL_SUFFIX: &str = ".partial";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestFile {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub command: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub version: String,
    pub files: Vec<ManifestFile>,
}

pub struct BundleWriter {
    command: String,
    target: PathBuf,
    partial: PathBuf,
    files: Vec<ManifestFile>,
}

impl BundleWriter {
    /// Prepares a bundle that will land at `target`. An existing bundle at
    /// `target` is replaced on [`finish`](Self::finish); any other non-empty
    /// directory is left alone and reported.
    pub fn create(target: &Path, command: &str) -> CliResult<Self> {
        if target.exists() {
            let is_bundle = target.join(MANIFEST).is_file();
            let empty = fs::read_dir(target).map_err(|e| CliError::io(target, e))?.next().is_none();
            if !is_bundle && !empty {
                return Err(CliError::Input(format!(
                    "{} exists and is not a bundle; refusing to overwrite it",
                    target.display()
                )));
            }
        }
        let name = target
            .file_name()
            .ok_or_else(|| CliError::Input(format!("{} has no final component", target.display())))?
            .to_string_lossy()
            .into_owned();
        let parent = target.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        let partial = parent.join(format!(".{name}{PARTIAL_SUFFIX}"));
        if partial.exists() {
            fs::remove_dir_all(&partial).map_err(|e| CliError::io(&partial, e))?;
        }
        fs::create_dir_all(&partial).map_err(|e| CliError::io(&partial, e))?;
        Ok(Self { command: command.into(), target: target.to_path_buf(), partial, files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.partial.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.files.push(ManifestFile {
            name: name.into(),
            sha256: sha256_hex(contents.as_bytes()),
            bytes: contents.len() as u64,
        });
        Ok(())
    }

    /// Writes the manifest and moves the bundle into place.
    pub fn finish(self, stamp: &Stamp) -> CliResult<PathBuf> {
        let manifest = Manifest {
            command: self.command,
            config_hash: stamp.config_hash.clone(),
            master_seed: stamp.master_seed,
            version: stamp.version.clone(),
            files: self.files,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        let path = self.partial.join(MANIFEST);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        if self.target.exists() {
            fs::remove_dir_all(&self.target).map_err(|e| CliError::io(&self.target, e))?;
        }
        fs::rename(&self.partial, &self.target).map_err(|e| CliError::io(&self.target, e))?;
        Ok(self.target)
    }
}

/// A bundle read back from disk.
#[derive(Clone, Debug)]
pub struct OpenBundle {
    pub dir: PathBuf,
    pub manifest: Manifest,
    /// Integrity remarks that do not block auditing, e.g. hash mismatches.
    pub notes: Vec<String>,
}

impl OpenBundle {
    pub fn read(&self, name: &str) -> CliResult<String> {
        let path = self.dir.join(name);
        fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))
    }

    pub fn has(&self, name: &str) -> bool {
        self.manifest.files.iter().any(|f| f.name == name)
    }
}

/// Opens a finished bundle. Partial bundles and bundles with missing files
/// are rejected; content that no longer matches its recorded hash is
/// reported in `notes` so that an audit can still say what is wrong with it.
pub fn open_bundle(dir: &Path) -> CliResult<OpenBundle> {
    let name = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    if name.ends_with(PARTIAL_SUFFIX) {
        return Err(CliError::Input(format!("{} is a partial bundle", dir.display())));
    }
    if !dir.is_dir() {
        return Err(CliError::Input(format!("{} is not a directory", dir.display())));
    }
    let mpath = dir.join(MANIFEST);
    if !mpath.is_file() {
        return Err(CliError::Input(format!(
            "{} has no {MANIFEST}; the run did not complete",
            dir.display()
        )));
    }
    let text = fs::read_to_string(&mpath).map_err(|e| CliError::io(&mpath, e))?;
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", mpath.display())))?;
    let mut notes = Vec::new();
    for f in &manifest.files {
        let p = dir.join(&f.name);
        let bytes = fs::read(&p).map_err(|_| {
            CliError::Input(format!("bundle {} is missing {}", dir.display(), f.name))
        })?;
        if sha256_hex(&bytes) != f.sha256 {
            notes.push(format!("{} does not match its manifest hash", f.name));
        }
    }
    Ok(OpenBundle { dir: dir.to_path_buf(), manifest, notes })
}
