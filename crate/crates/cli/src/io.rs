//! On-disk formats: matrix CSV/JSON, dictionary sidecar headers, signal
//! batches as JSON lines, profile JSON, and the result CSVs.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use cosparse_core::bounds::BoundCurve;
use cosparse_core::dictionary::{from_matrix, AnalysisDictionary, Family};
use cosparse_core::linalg::Mat;
use cosparse_core::metrics::{DictionaryProfile, ProfileMode};

pub fn parse_family(s: &str) -> Result<Family> {
    Ok(match s {
        "dif" => Family::Dif,
        "rand" => Family::Rand,
        "mix" => Family::Mix,
        "custom" => Family::Custom,
        other => bail!("unknown dictionary family `{other}`"),
    })
}

// ---------------------------------------------------------------- matrices

/// One row per line, entries with 17 significant digits.
pub fn write_mat_csv(path: &Path, m: &Mat) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|v| format!("{v:.17e}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_mat_csv(path: &Path) -> Result<Mat> {
    let reader = BufReader::new(File::open(path)?);
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let entries: Vec<f64> = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("{}: bad number on line {}", path.display(), i + 1))?;
        match cols {
            None => cols = Some(entries.len()),
            Some(c) if c != entries.len() => {
                bail!("{}: ragged row on line {}", path.display(), i + 1)
            }
            _ => {}
        }
        data.extend(entries);
        rows += 1;
    }
    let cols = cols.context("empty matrix file")?;
    Ok(Mat::new(rows, cols, data)?)
}

#[derive(Serialize, Deserialize)]
pub struct MatJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

pub fn write_mat_json(path: &Path, m: &Mat) -> Result<()> {
    let wrapper = MatJson {
        rows: m.rows(),
        cols: m.cols(),
        data: m.data().to_vec(),
    };
    serde_json::to_writer(BufWriter::new(File::create(path)?), &wrapper)?;
    Ok(())
}

pub fn read_mat_json(path: &Path) -> Result<Mat> {
    let wrapper: MatJson = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    Ok(Mat::new(wrapper.rows, wrapper.cols, wrapper.data)?)
}

// ------------------------------------------------------------ dictionaries

#[derive(Serialize, Deserialize)]
pub struct DictHeader {
    pub family: String,
    pub d: usize,
    pub p: usize,
    pub seed: Option<u64>,
    pub grid_side: Option<usize>,
}

/// The metadata file written next to a dictionary matrix.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

pub fn save_dictionary(path: &Path, dict: &AnalysisDictionary) -> Result<()> {
    if is_json(path) {
        write_mat_json(path, dict.omega())?;
    } else {
        write_mat_csv(path, dict.omega())?;
    }
    let header = DictHeader {
        family: dict.family().as_str().to_string(),
        d: dict.d(),
        p: dict.p(),
        seed: dict.seed(),
        grid_side: dict.grid_side(),
    };
    serde_json::to_writer_pretty(
        BufWriter::new(File::create(sidecar_path(path))?),
        &header,
    )?;
    Ok(())
}

pub fn load_dictionary(path: &Path) -> Result<AnalysisDictionary> {
    let mat = if is_json(path) {
        read_mat_json(path)?
    } else {
        read_mat_csv(path)?
    };
    let (dict, renorm) = from_matrix(mat)?;
    if renorm > 1e-12 {
        eprintln!(
            "warning: {} rows renormalized by up to {renorm:.3e}",
            path.display()
        );
    }
    let sidecar = sidecar_path(path);
    if sidecar.exists() {
        let header: DictHeader =
            serde_json::from_reader(BufReader::new(File::open(&sidecar)?))?;
        if header.d != dict.d() || header.p != dict.p() {
            bail!(
                "{}: header says {}x{}, matrix is {}x{}",
                sidecar.display(),
                header.p,
                header.d,
                dict.p(),
                dict.d()
            );
        }
        let family = parse_family(&header.family)?;
        return Ok(dict.with_provenance(family, header.seed, header.grid_side));
    }
    Ok(dict)
}

// ---------------------------------------------------------------- signals

#[derive(Serialize, Deserialize, Clone)]
pub struct SeedInfo {
    pub master: u64,
    pub cosupport_stream: u64,
    pub signal_stream: u64,
    pub noise_stream: u64,
}

/// One JSONL record per generated instance.
#[derive(Serialize, Deserialize, Clone)]
pub struct SignalRecord {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub cosupport: Vec<usize>,
    pub ell: usize,
    pub seeds: SeedInfo,
}

pub fn write_signals_jsonl(path: &Path, records: &[SignalRecord]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for rec in records {
        serde_json::to_writer(&mut w, rec)?;
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_signals_jsonl(path: &Path) -> Result<Vec<SignalRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .with_context(|| format!("{}: bad record on line {}", path.display(), i + 1))?,
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------- profiles

#[derive(Serialize, Deserialize)]
pub struct ProfileJson {
    pub d: usize,
    pub p: usize,
    pub r: usize,
    pub t_bins: usize,
    pub signature: Vec<f64>,
    pub spark: usize,
    pub cosparsity_dist: Vec<(usize, f64)>,
    pub alpha_r: f64,
    /// Dense joint distribution: row `ℓ = 1..p`, column `m = 1..T`.
    pub joint: Vec<Vec<f64>>,
    pub mode: String,
    pub sample_count: Option<usize>,
}

impl ProfileJson {
    pub fn from_profile(d: usize, p: usize, profile: &DictionaryProfile) -> Self {
        let dense = profile.joint_dense(p);
        let joint = (0..dense.rows()).map(|i| dense.row(i).to_vec()).collect();
        ProfileJson {
            d,
            p,
            r: profile.r,
            t_bins: profile.t_bins,
            signature: profile.signature.clone(),
            spark: profile.spark,
            cosparsity_dist: profile.cosparsity_dist.clone(),
            alpha_r: profile.alpha_r,
            joint,
            mode: match profile.mode {
                ProfileMode::Exact => "exact".to_string(),
                ProfileMode::Empirical => "empirical".to_string(),
            },
            sample_count: profile.sample_count,
        }
    }

    /// Sparse `(ℓ, m, prob)` cells of the stored joint distribution.
    pub fn joint_cells(&self) -> Vec<(usize, usize, f64)> {
        let mut cells = Vec::new();
        for (i, row) in self.joint.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if w > 0.0 {
                    cells.push((i + 1, j + 1, w));
                }
            }
        }
        cells
    }
}

pub fn write_profile(path: &Path, profile: &ProfileJson) -> Result<()> {
    serde_json::to_writer_pretty(BufWriter::new(File::create(path)?), profile)?;
    Ok(())
}

pub fn read_profile(path: &Path) -> Result<ProfileJson> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

// ------------------------------------------------------------------ curves

pub fn write_curve_csv(path: &Path, curve: &BoundCurve, ratios: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "snr_db,ratio,bound,variant")?;
    let variant = curve.variant.as_str();
    for ((snr, bound), ratio) in curve.snr_db.iter().zip(&curve.values).zip(ratios) {
        writeln!(w, "{snr:.6},{ratio:.17e},{bound:.17e},{variant}")?;
    }
    Ok(())
}

// --------------------------------------------------------- denoise results

pub struct DenoiseRow {
    pub trial: usize,
    pub ell: usize,
    pub success: bool,
    pub isnr_db: f64,
    pub oracle_isnr_db: f64,
    pub zmin: f64,
}

pub fn write_denoise_csv(path: &Path, rows: &[DenoiseRow]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "trial,ell,success,isnr_db,oracle_isnr_db,zmin")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{:.17e},{:.17e},{:.17e}",
            r.trial,
            r.ell,
            if r.success { 1 } else { 0 },
            r.isnr_db,
            r.oracle_isnr_db,
            r.zmin
        )?;
    }
    Ok(())
}
