//! Artifact assembly: long-format CSV, JSON documents, content hashes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// One named output file held in memory until the run completes.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn json(file: String, value: &impl Serialize) -> Self {
        let mut bytes = serde_json::to_vec_pretty(value).expect("artifacts serialize");
        bytes.push(b'\n');
        Self { file, bytes }
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }
}

#[derive(Serialize)]
struct Row<'a> {
    series: &'a str,
    x: f64,
    y: f64,
}

/// `series,x,y` rows, ready for grouped line plots.
pub struct LongCsv {
    writer: csv::Writer<Vec<u8>>,
}

impl Default for LongCsv {
    fn default() -> Self {
        Self::new()
    }
}

impl LongCsv {
    pub fn new() -> Self {
        Self {
            writer: csv::Writer::from_writer(Vec::new()),
        }
    }

    pub fn push(&mut self, series: &str, x: f64, y: f64) {
        self.writer.serialize(Row { series, x, y }).expect("in-memory csv");
    }

    pub fn extend(&mut self, series: &str, points: impl IntoIterator<Item = (f64, f64)>) {
        for (x, y) in points {
            self.push(series, x, y);
        }
    }

    pub fn finish(self, file: String) -> Artifact {
        let bytes = self.writer.into_inner().expect("in-memory csv");
        Artifact { file, bytes }
    }
}

pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.file);
            fs::write(&path, &a.bytes).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            Ok(path)
        })
        .collect()
}
