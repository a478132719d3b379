//! Reproducible experiment archive: every file written is recorded in a
//! manifest with its content hash, so byte-identical reruns are checkable.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Manifest {
    pub config_hash: String,
    pub files: BTreeMap<String, String>,
}

/// An experiment output directory plus its manifest.
#[derive(Debug)]
pub struct Archive {
    root: PathBuf,
    manifest: Manifest,
}

impl Archive {
    /// Open the archive at `root`, creating it if needed. An existing
    /// manifest must belong to the same experiment configuration.
    pub fn open(root: &Path, config_hash: &str) -> Result<Self> {
        fs::create_dir_all(root)?;
        let manifest_path = root.join(MANIFEST_FILE);
        let manifest = if manifest_path.exists() {
            let text = fs::read_to_string(&manifest_path)?;
            let existing: Manifest = serde_json::from_str(&text)?;
            if existing.config_hash != config_hash {
                return Err(Error::Usage(format!(
                    "output directory {} holds a different experiment (config hash mismatch); \
                     use a fresh --out directory",
                    root.display()
                )));
            }
            existing
        } else {
            Manifest { config_hash: config_hash.to_string(), files: BTreeMap::new() }
        };
        Ok(Archive { root: root.to_path_buf(), manifest })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn path_of(&self, relative: &str) -> PathBuf {
        self.root.join(relative)
    }

    /// Write a file and record its hash; parent directories are created.
    pub fn write(&mut self, relative: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(relative);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        self.manifest.files.insert(relative.to_string(), sha256_hex(bytes));
        Ok(())
    }

    pub fn read_to_string(&self, relative: &str) -> Result<String> {
        let path = self.root.join(relative);
        if !path.exists() {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("{} not found in archive {}", relative, self.root.display()),
            )));
        }
        Ok(fs::read_to_string(path)?)
    }

    /// Persist the manifest itself.
    pub fn save(&self) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.manifest)?;
        fs::write(self.root.join(MANIFEST_FILE), text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_are_recorded_and_hashes_stable() {
        let dir = tempfile::tempdir().unwrap();
        let mut archive = Archive::open(dir.path(), "abc").unwrap();
        archive.write("sub/data.csv", b"a,b\n1,2\n").unwrap();
        archive.save().unwrap();
        let again = Archive::open(dir.path(), "abc").unwrap();
        assert_eq!(
            again.manifest().files.get("sub/data.csv"),
            Some(&sha256_hex(b"a,b\n1,2\n"))
        );
    }

    #[test]
    fn mismatched_config_hash_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let archive = Archive::open(dir.path(), "abc").unwrap();
        archive.save().unwrap();
        assert!(matches!(Archive::open(dir.path(), "other"), Err(Error::Usage(_))));
    }
}
