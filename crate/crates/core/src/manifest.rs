//! Run manifests embedded in every report, plus the timing sidecar.
//!
//! The manifest holds only what determines a report's payload, so rerunning
//! a command with the same inputs, config and seeds yields the same bytes.
//! Wall-clock timings live in a separate `<report>.timings.json`.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

impl InputFile {
    pub fn hash(path: &Path) -> Result<Self> {
        let mut f = std::fs::File::open(path)?;
        let mut hasher = Sha256::new();
        let mut buf = vec![0u8; 1 << 16];
        loop {
            let n = f.read(&mut buf)?;
            if n == 0 {
                break;
            }
            hasher.update(&buf[..n]);
        }
        Ok(InputFile {
            path: path.display().to_string(),
            sha256: hex::encode(hasher.finalize()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    /// sha256 of the canonical configuration JSON.
    pub config_hash: String,
    pub inputs: Vec<InputFile>,
    pub seeds: BTreeMap<String, u64>,
    pub parameters: BTreeMap<String, serde_json::Value>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, canonical_config: &str) -> Self {
        RunManifest {
            command: command.into(),
            tool_version: TOOL_VERSION.to_string(),
            config_hash: hex::encode(Sha256::digest(canonical_config.as_bytes())),
            inputs: Vec::new(),
            seeds: BTreeMap::new(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<&mut Self> {
        self.inputs.push(InputFile::hash(path)?);
        Ok(self)
    }

    pub fn seed(&mut self, name: &str, seed: u64) -> &mut Self {
        self.seeds.insert(name.to_string(), seed);
        self
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("parameter serializes");
        self.parameters.insert(name.to_string(), v);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<P> {
    pub manifest: RunManifest,
    pub payload: P,
}

/// Pretty JSON with a trailing newline.
pub fn report_json<P: Serialize>(manifest: &RunManifest, payload: &P) -> Result<String> {
    #[derive(Serialize)]
    struct Borrowed<'a, P> {
        manifest: &'a RunManifest,
        payload: &'a P,
    }
    let mut s = serde_json::to_string_pretty(&Borrowed { manifest, payload })?;
    s.push('\n');
    Ok(s)
}

pub fn write_report<P: Serialize>(path: &Path, manifest: &RunManifest, payload: &P) -> Result<()> {
    std::fs::write(path, report_json(manifest, payload)?)?;
    Ok(())
}

/// Named stage durations in milliseconds.
#[derive(Debug)]
pub struct Timings {
    start: Instant,
    last: Instant,
    stages: Vec<(String, f64)>,
}

impl Default for Timings {
    fn default() -> Self {
        let now = Instant::now();
        Timings {
            start: now,
            last: now,
            stages: Vec::new(),
        }
    }
}

impl Timings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.stages
            .push((stage.to_string(), (now - self.last).as_secs_f64() * 1e3));
        self.last = now;
    }

    pub fn sidecar_path(report: &Path) -> PathBuf {
        let mut name = report.file_name().map(|n| n.to_os_string()).unwrap_or_default();
        name.push(".timings.json");
        report.with_file_name(name)
    }

    pub fn write_sidecar(&self, report: &Path) -> Result<()> {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            total_ms: f64,
            stages: &'a [(String, f64)],
        }
        let body = Sidecar {
            total_ms: self.start.elapsed().as_secs_f64() * 1e3,
            stages: &self.stages,
        };
        std::fs::write(Self::sidecar_path(report), serde_json::to_string_pretty(&body)?)?;
        Ok(())
    }
}
