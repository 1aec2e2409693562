//! File codecs: single-column signals, plain PGM images, float matrices,
//! and raw little-endian coefficient blobs with a JSON metadata sidecar.
//!
//! Floats in text outputs use Rust's shortest round-trip decimal formatting,
//! so identical inputs produce byte-identical files and every value parses
//! back exactly. All writers go through a temp-file plus atomic rename so a
//! failed command never leaves partial output behind.

use crate::error::{CliError, Result};
use dtcwt_core::{Complex64, RealImage2D, RealSignal1D};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Stages files and renames them into place only when every write
/// succeeded; dropping the stage before commit removes the temp files.
pub struct AtomicWriter {
    staged: Vec<(PathBuf, PathBuf)>,
    committed: bool,
}

impl AtomicWriter {
    pub fn new() -> Self {
        Self {
            staged: Vec::new(),
            committed: false,
        }
    }

    pub fn stage(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        let mut f = fs::File::create(&tmp)
            .map_err(|e| CliError::parse(format!("cannot create {}: {e}", tmp.display())))?;
        f.write_all(bytes)
            .map_err(|e| CliError::parse(format!("cannot write {}: {e}", tmp.display())))?;
        self.staged.push((tmp, path.to_path_buf()));
        Ok(())
    }

    pub fn commit(mut self) -> Result<()> {
        for (tmp, path) in &self.staged {
            fs::rename(tmp, path)
                .map_err(|e| CliError::parse(format!("cannot rename to {}: {e}", path.display())))?;
        }
        self.committed = true;
        Ok(())
    }
}

impl Drop for AtomicWriter {
    fn drop(&mut self) {
        if !self.committed {
            for (tmp, _) in &self.staged {
                let _ = fs::remove_file(tmp);
            }
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Reads a single-column plain-text signal file.
pub fn read_signal(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            CliError::parse(format!("{}:{}: not a number: {line:?}", path.display(), i + 1))
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(CliError::parse(format!("{}: no samples", path.display())));
    }
    Ok(out)
}

pub fn format_signal(samples: &[f64]) -> String {
    let mut out = String::new();
    for v in samples {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// Reads a plain (P2) PGM image; values come back as raw gray levels.
pub fn read_pgm(path: &Path) -> Result<(Vec<f64>, usize, usize)> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace().map(|t| t.to_string()))
        .collect::<Vec<_>>()
        .into_iter();
    let magic = tokens
        .next()
        .ok_or_else(|| CliError::parse(format!("{}: empty file", path.display())))?;
    if magic != "P2" {
        return Err(CliError::parse(format!(
            "{}: expected plain PGM (P2), found {magic:?}",
            path.display()
        )));
    }
    let mut next_usize = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| CliError::parse(format!("{}: missing {what}", path.display())))?
            .parse()
            .map_err(|_| CliError::parse(format!("{}: bad {what}", path.display())))
    };
    let width = next_usize("width")?;
    let height = next_usize("height")?;
    let maxval = next_usize("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(CliError::parse(format!(
            "{}: maxval must be in 1..=65535",
            path.display()
        )));
    }
    let mut samples = Vec::with_capacity(width * height);
    for _ in 0..width * height {
        samples.push(next_usize("pixel")? as f64);
    }
    Ok((samples, width, height))
}

pub fn format_pgm(samples: &[f64], width: usize, height: usize, maxval: u32) -> String {
    let mut out = format!("P2\n{width} {height}\n{maxval}\n");
    for row in samples.chunks(width) {
        let mut first = true;
        for &v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            let q = v.round().clamp(0.0, maxval as f64) as u32;
            out.push_str(&q.to_string());
        }
        out.push('\n');
    }
    out
}

/// Plain-text float matrix: one row per line, space separated.
pub fn format_matrix(samples: &[f64], width: usize) -> String {
    let mut out = String::new();
    for row in samples.chunks(width) {
        let mut first = true;
        for &v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&format!("{v}"));
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: &Path) -> Result<(Vec<f64>, usize, usize)> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let mut samples = Vec::new();
    let mut width = 0usize;
    let mut height = 0usize;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| CliError::parse(format!("{}: bad value {t:?}", path.display())))
            })
            .collect::<Result<_>>()?;
        if width == 0 {
            width = row.len();
        } else if row.len() != width {
            return Err(CliError::parse(format!(
                "{}: ragged rows ({} vs {width})",
                path.display(),
                row.len()
            )));
        }
        height += 1;
        samples.extend(row);
    }
    Ok((samples, width, height))
}

pub fn real_to_le_bytes(values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(values.len() * 8);
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn complex_to_le_bytes(values: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(values.len() * 16);
    for v in values {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

pub fn real_from_le_bytes(bytes: &[u8]) -> Result<Vec<f64>> {
    if bytes.len() % 8 != 0 {
        return Err(CliError::parse("raw float file length not a multiple of 8".into()));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

pub fn complex_from_le_bytes(bytes: &[u8]) -> Result<Vec<Complex64>> {
    if bytes.len() % 16 != 0 {
        return Err(CliError::parse(
            "raw complex file length not a multiple of 16".into(),
        ));
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BlobMeta {
    pub file: String,
    pub len: usize,
    pub sha256: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BandMeta1D {
    pub level: usize,
    #[serde(flatten)]
    pub blob: BlobMeta,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResidueMeta {
    pub tree: String,
    #[serde(flatten)]
    pub blob: BlobMeta,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BandMeta2D {
    pub level: usize,
    pub ell: usize,
    pub side: usize,
    #[serde(flatten)]
    pub blob: BlobMeta,
}

/// Metadata sidecar describing a coefficient set. Complex bands are raw
/// little-endian f64 pairs (re, im); residues are raw little-endian f64.
#[derive(Debug, Serialize, Deserialize)]
pub struct CoeffMeta {
    pub format: String,
    pub version: u32,
    pub byte_order: String,
    pub n: usize,
    pub levels: usize,
    pub alpha: f64,
    pub tau: f64,
    pub spacing: f64,
    pub fine_len: usize,
    pub fine_period: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bands_1d: Vec<BandMeta1D>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bands_2d: Vec<BandMeta2D>,
    pub residues: Vec<ResidueMeta>,
}

pub const FORMAT_1D: &str = "dtcwt-coeffs-1d";
pub const FORMAT_2D: &str = "dtcwt-coeffs-2d";

pub fn read_meta(path: &Path) -> Result<CoeffMeta> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("{}: bad metadata: {e}", path.display())))
}

/// Reads a referenced blob and verifies its checksum and length.
pub fn read_blob(dir: &Path, blob: &BlobMeta, unit: usize) -> Result<Vec<u8>> {
    let path = dir.join(&blob.file);
    let bytes = fs::read(&path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    if bytes.len() != blob.len * unit {
        return Err(CliError::precondition(format!(
            "{}: expected {} bytes, found {}",
            path.display(),
            blob.len * unit,
            bytes.len()
        )));
    }
    let digest = sha256_hex(&bytes);
    if digest != blob.sha256 {
        return Err(CliError::precondition(format!(
            "{}: checksum mismatch",
            path.display()
        )));
    }
    Ok(bytes)
}

pub fn signal_from_values(values: Vec<f64>, spacing: f64) -> Result<RealSignal1D> {
    RealSignal1D::new(values, spacing).map_err(CliError::from)
}

pub fn image_from_values(values: Vec<f64>, side: usize, spacing: f64) -> Result<RealImage2D> {
    RealImage2D::new(values, side, spacing).map_err(CliError::from)
}
