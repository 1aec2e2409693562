//! Command implementations behind the CLI: transform invocation, file
//! plumbing, and the wavelet-table generator. Everything here is callable
//! from tests without spawning a process.

use crate::error::{CliError, Result};
use crate::formats::{self, AtomicWriter, BandMeta1D, BandMeta2D, BlobMeta, CoeffMeta, ResidueMeta};
use dtcwt_core::filterbank::{
    build_system_with_fine, default_fine_len, default_fine_period, SplineParams, WaveletSystem,
};
use dtcwt_core::transform1d::{self, QuadraturePair};
use dtcwt_core::transform2d;
use dtcwt_core::{Complex64, DtCoeffs1D, DtCoeffs2D, FhtShift};
use std::path::{Path, PathBuf};

/// Shared transform parameters collected from the command line.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub alpha: f64,
    pub tau: f64,
    pub levels: usize,
    pub input: PathBuf,
    pub output: PathBuf,
    pub fine_len: Option<usize>,
}

pub fn build_system_for(
    alpha: f64,
    tau: f64,
    n: usize,
    levels: usize,
    fine_len: Option<usize>,
) -> Result<WaveletSystem> {
    let params = SplineParams::new(alpha, tau)?;
    let fine = fine_len.unwrap_or_else(|| default_fine_len(n));
    build_system_with_fine(params, n, levels, fine, default_fine_period(n)).map_err(CliError::from)
}

fn stem_of(path: &Path) -> Result<(PathBuf, String)> {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let stem = path
        .file_name()
        .ok_or_else(|| CliError::parse(format!("{}: not a file prefix", path.display())))?
        .to_string_lossy()
        .into_owned();
    Ok((dir, stem))
}

/// Analyzes a single-column signal file and writes per-level complex band
/// blobs, the two residues, and a JSON metadata sidecar.
pub fn cmd_analyze1d(cfg: &JobConfig) -> Result<()> {
    let values = formats::read_signal(&cfg.input)?;
    let signal = formats::signal_from_values(values, 1.0)?;
    let system = build_system_for(cfg.alpha, cfg.tau, signal.len(), cfg.levels, cfg.fine_len)?;
    let coeffs = transform1d::analyze(&signal, &system)?;

    let (dir, stem) = stem_of(&cfg.output)?;
    let mut writer = AtomicWriter::new();
    let mut bands = Vec::new();
    for level in 1..=coeffs.depth() {
        let file = format!("{stem}.l{level}.c64");
        let bytes = formats::complex_to_le_bytes(coeffs.level(level));
        writer.stage(&dir.join(&file), &bytes)?;
        bands.push(BandMeta1D {
            level,
            blob: BlobMeta {
                file,
                len: coeffs.level(level).len(),
                sha256: formats::sha256_hex(&bytes),
            },
        });
    }
    let mut residues = Vec::new();
    for (tree, data) in [("a", coeffs.residue_a()), ("b", coeffs.residue_b())] {
        let file = format!("{stem}.res{tree}.f64");
        let bytes = formats::real_to_le_bytes(data);
        writer.stage(&dir.join(&file), &bytes)?;
        residues.push(ResidueMeta {
            tree: tree.to_string(),
            blob: BlobMeta {
                file,
                len: data.len(),
                sha256: formats::sha256_hex(&bytes),
            },
        });
    }
    let meta = CoeffMeta {
        format: formats::FORMAT_1D.to_string(),
        version: 1,
        byte_order: "little".to_string(),
        n: coeffs.n(),
        levels: coeffs.depth(),
        alpha: cfg.alpha,
        tau: cfg.tau,
        spacing: coeffs.spacing(),
        fine_len: system.fine_len(),
        fine_period: system.fine_period(),
        bands_1d: bands,
        bands_2d: Vec::new(),
        residues,
    };
    let json = serde_json::to_string_pretty(&meta)
        .map_err(|e| CliError::parse(format!("metadata serialization failed: {e}")))?;
    writer.stage(&dir.join(format!("{stem}.json")), json.as_bytes())?;
    writer.commit()
}

fn meta_path(input: &Path) -> PathBuf {
    if input.extension().map(|e| e == "json").unwrap_or(false) {
        input.to_path_buf()
    } else {
        let mut p = input.as_os_str().to_owned();
        p.push(".json");
        PathBuf::from(p)
    }
}

/// Rebuilds a signal from a coefficient set written by analyze1d.
pub fn cmd_synth1d(input: &Path, output: &Path, fine_len: Option<usize>) -> Result<()> {
    let meta_file = meta_path(input);
    let meta = formats::read_meta(&meta_file)?;
    if meta.format != formats::FORMAT_1D {
        return Err(CliError::precondition(format!(
            "{}: format is {:?}, expected {:?}",
            meta_file.display(),
            meta.format,
            formats::FORMAT_1D
        )));
    }
    if meta.byte_order != "little" {
        return Err(CliError::precondition("unsupported byte order".into()));
    }
    let dir = meta_file.parent().map(Path::to_path_buf).unwrap_or_default();

    let mut levels: Vec<Vec<Complex64>> = Vec::new();
    let mut bands = meta.bands_1d.iter().collect::<Vec<_>>();
    bands.sort_by_key(|b| b.level);
    for (i, band) in bands.iter().enumerate() {
        if band.level != i + 1 {
            return Err(CliError::precondition(format!(
                "metadata bands are not contiguous at level {}",
                i + 1
            )));
        }
        let bytes = formats::read_blob(&dir, &band.blob, 16)?;
        levels.push(formats::complex_from_le_bytes(&bytes)?);
    }
    let mut residue_a = None;
    let mut residue_b = None;
    for r in &meta.residues {
        let bytes = formats::read_blob(&dir, &r.blob, 8)?;
        let values = formats::real_from_le_bytes(&bytes)?;
        match r.tree.as_str() {
            "a" => residue_a = Some(values),
            "b" => residue_b = Some(values),
            other => {
                return Err(CliError::precondition(format!(
                    "unknown residue tree {other:?}"
                )))
            }
        }
    }
    let (residue_a, residue_b) = match (residue_a, residue_b) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(CliError::precondition("missing residue blobs".into())),
    };

    let params = SplineParams::new(meta.alpha, meta.tau)?;
    let coeffs =
        DtCoeffs1D::from_parts(levels, residue_a, residue_b, params, meta.n, meta.spacing)?;
    let system = build_system_with_fine(
        params,
        meta.n,
        meta.levels,
        fine_len.unwrap_or(meta.fine_len),
        meta.fine_period,
    )?;
    let signal = transform1d::synthesize(&coeffs, &system)?;

    let mut writer = AtomicWriter::new();
    writer.stage(output, formats::format_signal(signal.samples()).as_bytes())?;
    writer.commit()
}

/// Analyzes a plain PGM image into six directional bands per level plus
/// the four separable residues.
pub fn cmd_analyze2d(cfg: &JobConfig) -> Result<()> {
    let (values, width, height) = formats::read_pgm(&cfg.input)?;
    if width != height {
        return Err(CliError::precondition(format!(
            "image must be square, got {width}x{height}"
        )));
    }
    let image = formats::image_from_values(values, width, 1.0)?;
    let system = build_system_for(cfg.alpha, cfg.tau, width, cfg.levels, cfg.fine_len)?;
    let coeffs = transform2d::analyze2d(&image, &system)?;

    let (dir, stem) = stem_of(&cfg.output)?;
    let mut writer = AtomicWriter::new();
    let mut bands = Vec::new();
    for level in 1..=coeffs.depth() {
        for ell in 1..=6 {
            let file = format!("{stem}.l{level}.b{ell}.c64");
            let bytes = formats::complex_to_le_bytes(coeffs.band(level, ell));
            writer.stage(&dir.join(&file), &bytes)?;
            bands.push(BandMeta2D {
                level,
                ell,
                side: coeffs.n() >> level,
                blob: BlobMeta {
                    file,
                    len: coeffs.band(level, ell).len(),
                    sha256: formats::sha256_hex(&bytes),
                },
            });
        }
    }
    let mut residues = Vec::new();
    for (t, name) in ["aa", "ab", "ba", "bb"].iter().enumerate() {
        let file = format!("{stem}.res{name}.f64");
        let data = coeffs.residue(t);
        let bytes = formats::real_to_le_bytes(data);
        writer.stage(&dir.join(&file), &bytes)?;
        residues.push(ResidueMeta {
            tree: name.to_string(),
            blob: BlobMeta {
                file,
                len: data.len(),
                sha256: formats::sha256_hex(&bytes),
            },
        });
    }
    let meta = CoeffMeta {
        format: formats::FORMAT_2D.to_string(),
        version: 1,
        byte_order: "little".to_string(),
        n: coeffs.n(),
        levels: coeffs.depth(),
        alpha: cfg.alpha,
        tau: cfg.tau,
        spacing: coeffs.spacing(),
        fine_len: system.fine_len(),
        fine_period: system.fine_period(),
        bands_1d: Vec::new(),
        bands_2d: bands,
        residues,
    };
    let json = serde_json::to_string_pretty(&meta)
        .map_err(|e| CliError::parse(format!("metadata serialization failed: {e}")))?;
    writer.stage(&dir.join(format!("{stem}.json")), json.as_bytes())?;
    writer.commit()
}

/// Rebuilds an image from a 2D coefficient set; output is a plain-text
/// float matrix.
pub fn cmd_synth2d(input: &Path, output: &Path, fine_len: Option<usize>) -> Result<()> {
    let meta_file = meta_path(input);
    let meta = formats::read_meta(&meta_file)?;
    if meta.format != formats::FORMAT_2D {
        return Err(CliError::precondition(format!(
            "{}: format is {:?}, expected {:?}",
            meta_file.display(),
            meta.format,
            formats::FORMAT_2D
        )));
    }
    let dir = meta_file.parent().map(Path::to_path_buf).unwrap_or_default();

    let mut levels: Vec<[Vec<Complex64>; 6]> = (0..meta.levels)
        .map(|_| [(); 6].map(|_| Vec::new()))
        .collect();
    for band in &meta.bands_2d {
        if band.level == 0 || band.level > meta.levels || band.ell == 0 || band.ell > 6 {
            return Err(CliError::precondition("band index out of range".into()));
        }
        let bytes = formats::read_blob(&dir, &band.blob, 16)?;
        levels[band.level - 1][band.ell - 1] = formats::complex_from_le_bytes(&bytes)?;
    }
    let mut residues: [Vec<f64>; 4] = [(); 4].map(|_| Vec::new());
    for r in &meta.residues {
        let idx = match r.tree.as_str() {
            "aa" => 0,
            "ab" => 1,
            "ba" => 2,
            "bb" => 3,
            other => {
                return Err(CliError::precondition(format!(
                    "unknown residue tree {other:?}"
                )))
            }
        };
        let bytes = formats::read_blob(&dir, &r.blob, 8)?;
        residues[idx] = formats::real_from_le_bytes(&bytes)?;
    }

    let params = SplineParams::new(meta.alpha, meta.tau)?;
    let coeffs = DtCoeffs2D::from_parts(levels, residues, params, meta.n, meta.spacing)?;
    let system = build_system_with_fine(
        params,
        meta.n,
        meta.levels,
        fine_len.unwrap_or(meta.fine_len),
        meta.fine_period,
    )?;
    let image = transform2d::synthesize2d(&coeffs, &system)?;

    let mut writer = AtomicWriter::new();
    writer.stage(
        output,
        formats::format_matrix(image.samples(), image.side()).as_bytes(),
    )?;
    writer.commit()
}

/// Emits the quadrature-pair table: abscissa, then w1 = H_tau psi,
/// w2 = H_{tau+1/2} psi, and the envelope |w1 + j w2| per requested tau.
pub fn cmd_wavelet_gen(
    alpha: f64,
    taus: &[f64],
    output: &Path,
    fine_len: Option<usize>,
) -> Result<()> {
    if taus.is_empty() {
        return Err(CliError::precondition("at least one tau is required".into()));
    }
    let system = build_system_for(alpha, 0.0, 256, 1, fine_len)?;
    let pairs: Vec<(f64, QuadraturePair)> = taus
        .iter()
        .map(|&tau| {
            transform1d::quadrature_pair(&system, FhtShift::new(tau)?)
                .map(|q| (tau, q))
                .map_err(CliError::from)
        })
        .collect::<Result<_>>()?;

    let mut table = String::from("# x");
    for (tau, _) in &pairs {
        table.push_str(&format!(" w1[tau={tau}] w2[tau={tau}] env[tau={tau}]"));
    }
    table.push('\n');
    for i in 0..system.fine_len() {
        table.push_str(&format!("{}", system.fine_x(i)));
        for (_, q) in &pairs {
            table.push_str(&format!(
                " {} {} {}",
                q.w1.samples()[i],
                q.w2.samples()[i],
                q.envelope.samples()[i]
            ));
        }
        table.push('\n');
    }

    let mut writer = AtomicWriter::new();
    writer.stage(output, table.as_bytes())?;
    writer.commit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write_chirp(dir: &Path, n: usize) -> PathBuf {
        let path = dir.join("sig.txt");
        let samples: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                (2.0 * std::f64::consts::PI * (4.0 * t + 24.0 * t * t)).sin()
            })
            .collect();
        fs::write(&path, formats::format_signal(&samples)).unwrap();
        path
    }

    #[test]
    fn analyze_synth_1d_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_chirp(dir.path(), 256);
        let prefix = dir.path().join("out");
        let cfg = JobConfig {
            alpha: 6.0,
            tau: 0.0,
            levels: 3,
            input: input.clone(),
            output: prefix.clone(),
            fine_len: Some(2048),
        };
        cmd_analyze1d(&cfg).unwrap();
        assert!(dir.path().join("out.json").exists());
        assert!(dir.path().join("out.l3.c64").exists());

        let rebuilt = dir.path().join("rebuilt.txt");
        cmd_synth1d(&prefix, &rebuilt, None).unwrap();
        let orig = formats::read_signal(&input).unwrap();
        let back = formats::read_signal(&rebuilt).unwrap();
        let max = orig
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(max < 1e-9, "max={max:e}");
    }

    #[test]
    fn analyze1d_rejects_non_power_of_two() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_chirp(dir.path(), 200);
        let cfg = JobConfig {
            alpha: 6.0,
            tau: 0.0,
            levels: 3,
            input,
            output: dir.path().join("out"),
            fine_len: None,
        };
        let err = cmd_analyze1d(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("power of two"), "{err}");
    }

    #[test]
    fn synth1d_rejects_tampered_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_chirp(dir.path(), 128);
        let prefix = dir.path().join("out");
        let cfg = JobConfig {
            alpha: 4.0,
            tau: 0.0,
            levels: 2,
            input,
            output: prefix.clone(),
            fine_len: Some(1024),
        };
        cmd_analyze1d(&cfg).unwrap();
        let meta_file = dir.path().join("out.json");
        let text = fs::read_to_string(&meta_file).unwrap();
        fs::write(&meta_file, text.replace("\"n\": 128", "\"n\": 256")).unwrap();
        let err = cmd_synth1d(&prefix, &dir.path().join("x.txt"), None).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn missing_input_exits_2() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = JobConfig {
            alpha: 4.0,
            tau: 0.0,
            levels: 2,
            input: dir.path().join("nope.txt"),
            output: dir.path().join("out"),
            fine_len: None,
        };
        let err = cmd_analyze1d(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn residue_only_coefficients_give_lowpass_output() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_chirp(dir.path(), 128);
        let prefix = dir.path().join("out");
        let cfg = JobConfig {
            alpha: 4.0,
            tau: 0.0,
            levels: 2,
            input,
            output: prefix.clone(),
            fine_len: Some(1024),
        };
        cmd_analyze1d(&cfg).unwrap();
        // Zero out every band blob, leaving only the residues.
        for level in 1..=2 {
            let band = dir.path().join(format!("out.l{level}.c64"));
            let len = fs::metadata(&band).unwrap().len() as usize;
            fs::write(&band, vec![0u8; len]).unwrap();
        }
        // Checksums changed: re-derive the metadata.
        let meta_file = dir.path().join("out.json");
        let mut meta = formats::read_meta(&meta_file).unwrap();
        for band in &mut meta.bands_1d {
            let bytes = fs::read(dir.path().join(&band.blob.file)).unwrap();
            band.blob.sha256 = formats::sha256_hex(&bytes);
        }
        fs::write(&meta_file, serde_json::to_string_pretty(&meta).unwrap()).unwrap();

        let out = dir.path().join("lowpass.txt");
        cmd_synth1d(&prefix, &out, None).unwrap();
        let rebuilt = formats::read_signal(&out).unwrap();
        // A lowpass-only reconstruction keeps the mean but loses detail.
        assert_eq!(rebuilt.len(), 128);
        assert!(rebuilt.iter().any(|&v| v != 0.0));
    }

    #[test]
    fn wavelet_gen_emits_deterministic_table() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("pairs.txt");
        cmd_wavelet_gen(8.0, &[0.0, 0.25, 0.5], &out, Some(1024)).unwrap();
        let text = fs::read_to_string(&out).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            "# x w1[tau=0] w2[tau=0] env[tau=0] w1[tau=0.25] w2[tau=0.25] env[tau=0.25] w1[tau=0.5] w2[tau=0.5] env[tau=0.5]"
        );
        let cols = text.lines().nth(1).unwrap().split_whitespace().count();
        assert_eq!(cols, 10);

        let out2 = dir.path().join("pairs2.txt");
        cmd_wavelet_gen(8.0, &[0.0, 0.25, 0.5], &out2, Some(1024)).unwrap();
        assert_eq!(fs::read(&out).unwrap(), fs::read(&out2).unwrap());
    }

    #[test]
    fn analyze_synth_2d_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let n = 64;
        let samples: Vec<f64> = (0..n * n)
            .map(|i| {
                let (x, y) = ((i % n) as f64, (i / n) as f64);
                32768.0 + 12000.0 * (0.35 * x + 0.1 * y).sin() + 9000.0 * (0.07 * x - 0.3 * y).cos()
            })
            .collect();
        let pgm = dir.path().join("tex.pgm");
        fs::write(&pgm, formats::format_pgm(&samples, n, n, 65535)).unwrap();

        let prefix = dir.path().join("img");
        let cfg = JobConfig {
            alpha: 6.0,
            tau: 0.0,
            levels: 2,
            input: pgm.clone(),
            output: prefix.clone(),
            fine_len: Some(1024),
        };
        cmd_analyze2d(&cfg).unwrap();
        let out = dir.path().join("rebuilt.txt");
        cmd_synth2d(&prefix, &out, None).unwrap();
        let (orig, w, h) = formats::read_pgm(&pgm).unwrap();
        let (back, bw, bh) = formats::read_matrix(&out).unwrap();
        assert_eq!((w, h), (bw, bh));
        let max = orig
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(max < 1e-7, "max={max:e}");
    }
}
