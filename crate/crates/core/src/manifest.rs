//! Run manifests: everything needed to rerun a command and get the same
//! primary outputs back.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Keys serialize in a fixed order: struct fields as declared, maps sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Full argument vector, program name excluded.
    pub args: Vec<String>,
    pub parameters: BTreeMap<String, Value>,
    pub seeds: BTreeMap<String, u64>,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
    /// Results worth auditing without reopening the outputs.
    pub summary: BTreeMap<String, Value>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            command: command.to_string(),
            args,
            parameters: BTreeMap::new(),
            seeds: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            summary: BTreeMap::new(),
            timestamp,
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.to_string(), to_value(value));
        self
    }

    pub fn seed(&mut self, label: &str, seed: u64) -> &mut Self {
        self.seeds.insert(label.to_string(), seed);
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.summary.insert(key.to_string(), to_value(value));
        self
    }

    pub fn input(&mut self, path: &Path) -> Result<&mut Self> {
        let sha256 = file_digest(path)?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256,
        });
        Ok(self)
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.display().to_string());
        self
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        self.write(io::BufWriter::new(File::create(path)?))
    }

    pub fn read<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}

/// Hex SHA-256 of a file's bytes.
pub fn file_digest(path: &Path) -> Result<String> {
    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    io::copy(&mut file, &mut hasher)?;
    Ok(hex::encode(hasher.finalize()))
}

/// Independent seed for the substream `label` of a run seeded with `master`.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
