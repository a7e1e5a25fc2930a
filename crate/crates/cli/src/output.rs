use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Shortest rendering of `x` rounded to 12 significant digits. Plain
/// notation for exponents in `[-4, 12)`, scientific otherwise.
pub fn fmt12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        trim(&format!("{x:.*}", (11 - exp) as usize)).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// RFC 4180 table with a fixed header.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

/// Files written by one command.
#[derive(Debug, Default)]
pub struct Emitted {
    pub files: Vec<PathBuf>,
}

impl Emitted {
    pub fn write(&mut self, dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::config(format!("{}: {e}", dir.display())))?;
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        self.files.push(path);
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("report serializes");
        text.push('\n');
        self.write(dir, name, text.as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub scenario_path: String,
    /// Digest of the parsed scenario; absent when parsing failed.
    pub scenario_digest: Option<String>,
    pub input_sha256: Option<String>,
    pub models: Option<Vec<String>>,
    pub resolution_deg: Option<f64>,
    pub workers: usize,
    pub versions: Versions,
    /// Every computation is deterministic; no random streams are drawn.
    pub seeds: Vec<u64>,
    pub outputs: Vec<OutputRecord>,
    pub exit_code: i32,
    pub error: Option<String>,
    pub started_unix_ms: u128,
    pub wall_time_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct Versions {
    pub omnisurf: &'static str,
    pub manifest_format: u32,
}

impl Versions {
    pub fn current() -> Self {
        Versions { omnisurf: env!("CARGO_PKG_VERSION"), manifest_format: 1 }
    }
}

pub const MANIFEST_FILE: &str = "runs.jsonl";

/// Appends one JSON line to `<dir>/runs.jsonl`.
pub fn append_manifest(dir: &Path, manifest: &Manifest) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut f = OpenOptions::new().create(true).append(true).open(dir.join(MANIFEST_FILE))?;
    let mut line = serde_json::to_string(manifest).expect("manifest serializes");
    line.push('\n');
    f.write_all(line.as_bytes())
}
