use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::Result;

/// Everything needed to rerun a command and check its outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, minus `--out`.
    pub args: Vec<String>,
    pub parsed: serde_json::Value,
    pub version: String,
    pub seed: Option<u64>,
    /// Unix seconds.
    pub started: u64,
    pub finished: u64,
    /// File name → hex SHA-256.
    pub outputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

pub fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes output files into one directory and records their digests.
#[derive(Debug)]
pub struct Outputs {
    dir: PathBuf,
    pub digests: BTreeMap<String, String>,
}

impl Outputs {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Outputs {
            dir,
            digests: BTreeMap::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes)?;
        self.digests.insert(name.to_string(), sha256_hex(bytes));
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(name, s.as_bytes())
    }
}

/// Output names whose digests differ between two manifests (or that are
/// missing from either).
pub fn digest_mismatches(want: &RunManifest, got: &RunManifest) -> Vec<String> {
    let mut out: Vec<String> = want
        .outputs
        .iter()
        .filter(|(k, v)| got.outputs.get(*k) != Some(v))
        .map(|(k, _)| k.clone())
        .collect();
    out.extend(got.outputs.keys().filter(|k| !want.outputs.contains_key(*k)).cloned());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digests_are_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn mismatch_detection() {
        let mut a = RunManifest {
            command: "x".into(),
            args: vec![],
            parsed: serde_json::Value::Null,
            version: "0".into(),
            seed: None,
            started: 0,
            finished: 0,
            outputs: BTreeMap::from([("f".to_string(), "1".to_string())]),
            warnings: vec![],
            exit_code: 0,
        };
        let b = a.clone();
        assert!(digest_mismatches(&a, &b).is_empty());
        a.outputs.insert("g".into(), "2".into());
        assert_eq!(digest_mismatches(&a, &b), vec!["g".to_string()]);
        assert_eq!(digest_mismatches(&b, &a), vec!["g".to_string()]);
    }
}
