//! Experiment orchestration: deterministic seeded sweeps, bound curves, the
//! high-dimensional grid, and figure-data reproduction.
//!
//! Determinism contract: every trial draws from counter-derived RNG streams
//! keyed by `(master_seed, trial index)`, and parallel runs collect
//! per-trial records in trial order before any aggregation, so result files
//! are byte-identical regardless of worker count.

use std::fs::File;
use std::io::{BufWriter, Write as IoWrite};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cosparse_core::bounds::{
    averaged_bound_joint, averaged_bound_marginal, optimize_beta, theorem1_bound, theorem2_bound,
    zmin_prob_bound, BoundCurve, CurveVariant,
};
use cosparse_core::dictionary::{make_dif, make_mix, make_rand, AnalysisDictionary, Family};
use cosparse_core::metrics::{
    build_profile_empirical, build_profile_exact, ClosureWeighting, DictionaryProfile,
    DEFAULT_ENUM_BUDGET,
};
use cosparse_core::pursuit::{isnr, oracle_denoise, threshold_pursuit};
use cosparse_core::signal::{
    add_noise, draw_cosupport, project_signal, ratio_of_snr, zmin_of, CosparseSignal,
    NoisyInstance,
};

use crate::io::{DenoiseRow, ProfileJson, SeedInfo, SignalRecord};

/// Quantization resolution of the joint (ℓ, α) distribution.
pub const DEFAULT_T_BINS: usize = 100;

/// Empirical signature samples per subset size. Rank tests cost O(k²d), so
/// the count backs off with dimension to keep profiling at d=100 tractable;
/// the signature is descriptive only and never feeds the bounds.
pub fn signature_samples(d: usize) -> u128 {
    if d <= 30 {
        10_000
    } else {
        200
    }
}

/// A JSON-serializable experiment description, embedded into every
/// manifest for provenance.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ExperimentConfig {
    pub family: String,
    pub d: usize,
    pub p: usize,
    pub dict_seed: u64,
    pub r_grid: Vec<usize>,
    pub snr_grid_db: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub mode: String,
}

/// Evenly spaced dB grid over the standard 6–74 dB range.
pub fn default_snr_grid(points: usize) -> Vec<f64> {
    let (lo, hi) = (6.0f64, 74.0f64);
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

pub fn make_dictionary(family: Family, d: usize, p: usize, seed: u64) -> Result<AnalysisDictionary> {
    let side = (d as f64).sqrt().round() as usize;
    Ok(match family {
        Family::Dif => {
            check_grid(family, d, p, side)?;
            make_dif(side)?
        }
        Family::Mix => {
            check_grid(family, d, p, side)?;
            make_mix(side, seed)?
        }
        Family::Rand => make_rand(p, d, seed)?,
        Family::Custom => bail!("custom dictionaries must be loaded from a file"),
    })
}

fn check_grid(family: Family, d: usize, p: usize, side: usize) -> Result<()> {
    if side * side != d {
        bail!("family `{}` needs a square d, got {d}", family.as_str());
    }
    if p != 2 * d {
        bail!("family `{}` has p = 2d = {}, got {p}", family.as_str(), 2 * d);
    }
    Ok(())
}

// ---------------------------------------------------------------- signals

/// Deterministic per-trial generation: streams `4t`, `4t+1`, `4t+2` drive
/// the co-support draw, the subspace sample, and the noise.
pub fn generate_instance(
    dict: &AnalysisDictionary,
    r: usize,
    sigma: f64,
    master_seed: u64,
    trial: usize,
) -> cosparse_core::Result<NoisyInstance> {
    let t = trial as u64;
    let cs = draw_cosupport(dict, r, master_seed, 4 * t)?;
    let sig = project_signal(dict, &cs, 1.0, master_seed, 4 * t + 1)?;
    add_noise(&sig, sigma, master_seed, 4 * t + 2)
}

pub fn generate_batch(
    dict: &AnalysisDictionary,
    r: usize,
    sigma: f64,
    n: usize,
    master_seed: u64,
) -> Result<Vec<NoisyInstance>> {
    (0..n)
        .into_par_iter()
        .map(|t| Ok(generate_instance(dict, r, sigma, master_seed, t)?))
        .collect()
}

pub fn instance_to_record(inst: &NoisyInstance, master_seed: u64, trial: usize) -> SignalRecord {
    let t = trial as u64;
    SignalRecord {
        x: inst.x_true.x.clone(),
        y: inst.y.clone(),
        cosupport: inst.x_true.effective_cosupport.indices().to_vec(),
        ell: inst.x_true.ell,
        seeds: SeedInfo {
            master: master_seed,
            cosupport_stream: 4 * t,
            signal_stream: 4 * t + 1,
            noise_stream: 4 * t + 2,
        },
    }
}

// ---------------------------------------------------------------- denoise

/// Run the pursuit and the oracle on one instance.
pub fn denoise_one(
    dict: &AnalysisDictionary,
    inst: &NoisyInstance,
    r: usize,
    trial: usize,
) -> Result<(DenoiseRow, f64, f64)> {
    let out = threshold_pursuit(dict, &inst.y, r)?;
    let truth = &inst.x_true.effective_cosupport;
    let success = out.cosupport_hat.indices() == truth.indices();
    let x_oracle = oracle_denoise(dict, &inst.y, truth);
    let err_sq = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    };
    let mse = err_sq(&out.x_hat, &inst.x_true.x);
    let oracle_mse = err_sq(&x_oracle, &inst.x_true.x);
    let sigma = inst.sigma;
    let (isnr_db, oracle_isnr_db) = if sigma > 0.0 {
        (
            isnr(&inst.x_true.x, &out.x_hat, sigma)?,
            isnr(&inst.x_true.x, &x_oracle, sigma)?,
        )
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    Ok((
        DenoiseRow {
            trial,
            ell: inst.x_true.ell,
            success,
            isnr_db,
            oracle_isnr_db,
            zmin: zmin_of(dict, &inst.x_true)?,
        },
        mse,
        oracle_mse,
    ))
}

/// Aggregated results at one (dictionary, r, SNR) point.
#[derive(Serialize, Clone, Debug)]
pub struct SweepPoint {
    pub family: String,
    pub r: usize,
    pub snr_db: f64,
    pub ratio: f64,
    pub trials: usize,
    pub success_rate: f64,
    /// Binomial standard error of the success rate.
    pub success_se: f64,
    /// ISNR of the mean squared error (not the mean of per-trial dBs).
    pub mean_isnr_db: f64,
    pub oracle_isnr_db: f64,
}

fn isnr_of_mean_mse(mean_mse: f64, d: usize, sigma: f64) -> f64 {
    -10.0 * (mean_mse / (d as f64 * sigma * sigma)).log10()
}

/// One SNR point: generate, denoise, aggregate. Trials run in parallel but
/// are collected in trial order, so aggregation is order-independent.
pub fn denoise_point(
    dict: &AnalysisDictionary,
    r: usize,
    snr_db: f64,
    n: usize,
    master_seed: u64,
) -> Result<(SweepPoint, Vec<DenoiseRow>)> {
    let ratio = ratio_of_snr(snr_db, dict.d(), r);
    let sigma = ratio; // σ_u = 1
    let results: Vec<(DenoiseRow, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|t| {
            let inst = generate_instance(dict, r, sigma, master_seed, t)?;
            denoise_one(dict, &inst, r, t)
        })
        .collect::<Result<_>>()?;
    let successes = results.iter().filter(|(row, _, _)| row.success).count();
    let rate = successes as f64 / n as f64;
    let mean_mse = results.iter().map(|(_, m, _)| m).sum::<f64>() / n as f64;
    let mean_oracle_mse = results.iter().map(|(_, _, m)| m).sum::<f64>() / n as f64;
    let point = SweepPoint {
        family: dict.family().as_str().to_string(),
        r,
        snr_db,
        ratio,
        trials: n,
        success_rate: rate,
        success_se: (rate * (1.0 - rate) / n as f64).sqrt(),
        mean_isnr_db: isnr_of_mean_mse(mean_mse, dict.d(), sigma),
        oracle_isnr_db: isnr_of_mean_mse(mean_oracle_mse, dict.d(), sigma),
    };
    Ok((point, results.into_iter().map(|(row, _, _)| row).collect()))
}

/// Full sweep over an SNR grid. Each grid point uses a distinct seed offset
/// so regenerated batches are independent across points.
pub fn run_denoise_sweep(
    dict: &AnalysisDictionary,
    r: usize,
    snr_grid_db: &[f64],
    n: usize,
    master_seed: u64,
) -> Result<Vec<SweepPoint>> {
    snr_grid_db
        .iter()
        .enumerate()
        .map(|(i, &snr)| {
            Ok(denoise_point(dict, r, snr, n, master_seed.wrapping_add(i as u64))?.0)
        })
        .collect()
}

// ----------------------------------------------------------------- bounds

/// Both averaged bound variants across an SNR grid.
pub fn run_bound_sweep(
    profile: &ProfileJson,
    snr_grid_db: &[f64],
) -> Result<(BoundCurve, BoundCurve)> {
    let (p, d, r) = (profile.p, profile.d, profile.r);
    let cells = profile.joint_cells();
    let points: Vec<(f64, f64)> = snr_grid_db
        .par_iter()
        .map(|&snr| {
            let ratio = ratio_of_snr(snr, d, r);
            let marginal =
                averaged_bound_marginal(p, d, r, ratio, profile.alpha_r, &profile.cosparsity_dist)?;
            let joint = averaged_bound_joint(p, d, r, ratio, &cells, profile.t_bins)?;
            Ok((marginal, joint))
        })
        .collect::<Result<_>>()?;
    Ok((
        BoundCurve {
            snr_db: snr_grid_db.to_vec(),
            values: points.iter().map(|(m, _)| *m).collect(),
            variant: CurveVariant::Marginal,
        },
        BoundCurve {
            snr_db: snr_grid_db.to_vec(),
            values: points.iter().map(|(_, j)| *j).collect(),
            variant: CurveVariant::Joint,
        },
    ))
}

/// Exact profile wrapped in its serializable form.
pub fn profile_exact(
    dict: &AnalysisDictionary,
    r: usize,
    weighting: ClosureWeighting,
) -> Result<ProfileJson> {
    let profile = build_profile_exact(dict, r, DEFAULT_T_BINS, DEFAULT_ENUM_BUDGET, weighting)?;
    Ok(ProfileJson::from_profile(dict.d(), dict.p(), &profile))
}

/// Empirical profile from freshly generated noise-free signals.
pub fn profile_empirical(
    dict: &AnalysisDictionary,
    r: usize,
    n: usize,
    master_seed: u64,
) -> Result<(ProfileJson, DictionaryProfile)> {
    let signals: Vec<CosparseSignal> = (0..n)
        .into_par_iter()
        .map(|t| {
            let t64 = t as u64;
            let cs = draw_cosupport(dict, r, master_seed, 4 * t64)?;
            project_signal(dict, &cs, 1.0, master_seed, 4 * t64 + 1)
        })
        .collect::<cosparse_core::Result<_>>()?;
    let profile = build_profile_empirical(
        dict,
        r,
        DEFAULT_T_BINS,
        signature_samples(dict.d()),
        master_seed,
        &signals,
    )?;
    Ok((
        ProfileJson::from_profile(dict.d(), dict.p(), &profile),
        profile,
    ))
}

// ------------------------------------------------------------ highdim grid

/// One cell of the high-dimensional success matrices.
#[derive(Serialize, Clone, Debug)]
pub struct HighdimCell {
    pub family: String,
    pub r: usize,
    pub snr_db: f64,
    pub success_rate: f64,
    pub success_se: f64,
    /// Joint-averaged theoretical lower bound from the empirical profile.
    pub bound: f64,
}

/// Empirical vs theoretical success matrices at scale. The empirical joint
/// distribution is computed once per (dictionary, r) from the same signal
/// batch that drives the empirical rates.
pub fn run_highdim_grid(
    dict: &AnalysisDictionary,
    r_grid: &[usize],
    snr_grid_db: &[f64],
    n: usize,
    master_seed: u64,
) -> Result<Vec<HighdimCell>> {
    let (d, p) = (dict.d(), dict.p());
    let mut cells = Vec::new();
    for (ri, &r) in r_grid.iter().enumerate() {
        let seed_r = master_seed.wrapping_add(1000 * ri as u64);
        // noise-free signals, reused across SNR points for this r
        let signals: Vec<CosparseSignal> = (0..n)
            .into_par_iter()
            .map(|t| {
                let t64 = t as u64;
                let cs = draw_cosupport(dict, r, seed_r, 4 * t64)?;
                project_signal(dict, &cs, 1.0, seed_r, 4 * t64 + 1)
            })
            .collect::<cosparse_core::Result<_>>()?;
        let profile = build_profile_empirical(
            dict,
            r,
            DEFAULT_T_BINS,
            signature_samples(d),
            seed_r,
            &signals,
        )?;
        for (si, &snr) in snr_grid_db.iter().enumerate() {
            let ratio = ratio_of_snr(snr, d, r);
            let sigma = ratio;
            let noise_seed = seed_r.wrapping_add(si as u64 + 1);
            let successes: usize = signals
                .par_iter()
                .enumerate()
                .map(|(t, sig)| {
                    let inst = add_noise(sig, sigma, noise_seed, t as u64)?;
                    let out = threshold_pursuit(dict, &inst.y, r)?;
                    Ok(usize::from(
                        out.cosupport_hat.indices() == sig.effective_cosupport.indices(),
                    ))
                })
                .collect::<Result<Vec<usize>>>()?
                .iter()
                .sum();
            let rate = successes as f64 / n as f64;
            cells.push(HighdimCell {
                family: dict.family().as_str().to_string(),
                r,
                snr_db: snr,
                success_rate: rate,
                success_se: (rate * (1.0 - rate) / n as f64).sqrt(),
                bound: averaged_bound_joint(p, d, r, ratio, &profile.joint, profile.t_bins)?,
            });
        }
    }
    Ok(cells)
}

// -------------------------------------------------------------- reproduce

pub const FIGURE_IDS: &[&str] = &[
    "cosparsity-hist",
    "signature",
    "success-vs-snr",
    "beta-curve-thm1",
    "beta-curve-thm2",
    "joint-dist",
    "bound-curves",
    "highdim-grid",
];

fn write_manifest(
    outdir: &Path,
    figure: &str,
    config: &ExperimentConfig,
    files: &[PathBuf],
    started: Instant,
) -> Result<()> {
    #[derive(Serialize)]
    struct Manifest<'a> {
        figure: &'a str,
        config: &'a ExperimentConfig,
        version: &'a str,
        wall_time_s: f64,
        files: Vec<String>,
    }
    let manifest = Manifest {
        figure,
        config,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: started.elapsed().as_secs_f64(),
        files: files
            .iter()
            .map(|f| f.file_name().unwrap_or_default().to_string_lossy().into_owned())
            .collect(),
    };
    serde_json::to_writer_pretty(
        BufWriter::new(File::create(outdir.join("manifest.json"))?),
        &manifest,
    )?;
    Ok(())
}

const SMALL_FAMILIES: [Family; 3] = [Family::Dif, Family::Mix, Family::Rand];

fn small_dict(family: Family, seed: u64) -> Result<AnalysisDictionary> {
    make_dictionary(family, 9, 18, seed)
}

/// Write the data files underlying one named figure. Returns the files
/// written (manifest excluded).
pub fn reproduce(figure: &str, outdir: &Path, master_seed: u64, quick: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(outdir)
        .with_context(|| format!("cannot create {}", outdir.display()))?;
    let started = Instant::now();
    let mut files = Vec::new();
    let mut config = ExperimentConfig {
        family: "all".into(),
        d: 9,
        p: 18,
        dict_seed: master_seed,
        r_grid: vec![2],
        snr_grid_db: default_snr_grid(18),
        trials: if quick { 500 } else { 10_000 },
        master_seed,
        mode: "exact".into(),
    };

    match figure {
        "cosparsity-hist" => {
            for family in SMALL_FAMILIES {
                let dict = small_dict(family, master_seed)?;
                let profile = profile_exact(&dict, 2, ClosureWeighting::default())?;
                let path = outdir.join(format!("cosparsity_hist_{}.csv", family.as_str()));
                let mut w = BufWriter::new(File::create(&path)?);
                writeln!(w, "ell,prob")?;
                for (ell, prob) in &profile.cosparsity_dist {
                    writeln!(w, "{ell},{prob:.17e}")?;
                }
                files.push(path);
            }
        }
        "signature" => {
            for family in SMALL_FAMILIES {
                let dict = small_dict(family, master_seed)?;
                let profile = profile_exact(&dict, 2, ClosureWeighting::default())?;
                let path = outdir.join(format!("signature_{}.csv", family.as_str()));
                let mut w = BufWriter::new(File::create(&path)?);
                writeln!(w, "k,f")?;
                for (k, f) in profile.signature.iter().enumerate() {
                    writeln!(w, "{},{f:.17e}", k + 1)?;
                }
                files.push(path);
            }
        }
        "success-vs-snr" => {
            let path = outdir.join("success_vs_snr.csv");
            let mut w = BufWriter::new(File::create(&path)?);
            writeln!(
                w,
                "family,r,snr_db,ratio,trials,success_rate,success_se,mean_isnr_db,oracle_isnr_db"
            )?;
            for family in SMALL_FAMILIES {
                let dict = small_dict(family, master_seed)?;
                for pt in run_denoise_sweep(
                    &dict,
                    2,
                    &config.snr_grid_db,
                    config.trials,
                    master_seed,
                )? {
                    writeln!(
                        w,
                        "{},{},{:.6},{:.17e},{},{:.17e},{:.17e},{:.17e},{:.17e}",
                        pt.family,
                        pt.r,
                        pt.snr_db,
                        pt.ratio,
                        pt.trials,
                        pt.success_rate,
                        pt.success_se,
                        pt.mean_isnr_db,
                        pt.oracle_isnr_db
                    )?;
                }
            }
            files.push(path);
        }
        "beta-curve-thm1" => {
            let path = outdir.join("beta_curve_thm1.csv");
            let mut w = BufWriter::new(File::create(&path)?);
            writeln!(w, "beta,bound")?;
            for i in 0..400 {
                let beta = 0.05 * (i + 1) as f64;
                writeln!(w, "{beta:.4},{:.17e}", theorem1_bound(18, 9, 2, 14, beta)?)?;
            }
            files.push(path);
        }
        "beta-curve-thm2" => {
            let path = outdir.join("beta_curve_thm2.csv");
            let mut w = BufWriter::new(File::create(&path)?);
            writeln!(w, "beta,thm1,zmin_prob,product")?;
            let (ratio, alpha) = (0.01, 0.75);
            for i in 0..400 {
                let beta = 0.05 * (i + 1) as f64;
                writeln!(
                    w,
                    "{beta:.4},{:.17e},{:.17e},{:.17e}",
                    theorem1_bound(18, 9, 2, 14, beta)?,
                    zmin_prob_bound(18, 14, beta, ratio, alpha)?,
                    theorem2_bound(18, 9, 2, 14, ratio, alpha, beta)?
                )?;
            }
            let opt = optimize_beta(18, 9, 2, 14, ratio, alpha)?;
            let path2 = outdir.join("beta_curve_thm2_opt.csv");
            let mut w2 = BufWriter::new(File::create(&path2)?);
            writeln!(w2, "beta_star,bound")?;
            writeln!(w2, "{:.6},{:.17e}", opt.beta_star, opt.bound)?;
            files.push(path);
            files.push(path2);
        }
        "joint-dist" => {
            for family in SMALL_FAMILIES {
                let dict = small_dict(family, master_seed)?;
                let profile = profile_exact(&dict, 2, ClosureWeighting::default())?;
                let path = outdir.join(format!("profile_{}.json", family.as_str()));
                crate::io::write_profile(&path, &profile)?;
                files.push(path);
            }
        }
        "bound-curves" => {
            let grid = default_snr_grid(if quick { 10 } else { 35 });
            config.snr_grid_db = grid.clone();
            for family in SMALL_FAMILIES {
                let dict = small_dict(family, master_seed)?;
                let profile = profile_exact(&dict, 2, ClosureWeighting::default())?;
                let (marginal, joint) = run_bound_sweep(&profile, &grid)?;
                let ratios: Vec<f64> = grid.iter().map(|&s| ratio_of_snr(s, 9, 2)).collect();
                for curve in [marginal, joint] {
                    let path = outdir.join(format!(
                        "bounds_{}_{}.csv",
                        family.as_str(),
                        curve.variant.as_str()
                    ));
                    crate::io::write_curve_csv(&path, &curve, &ratios)?;
                    files.push(path);
                }
            }
        }
        "highdim-grid" => {
            config.d = 100;
            config.p = 200;
            config.r_grid = vec![2, 10, 25];
            config.snr_grid_db = vec![10.0, 30.0, 50.0];
            config.trials = if quick { 100 } else { 1000 };
            config.mode = "empirical".into();
            let path = outdir.join("highdim_grid.csv");
            let mut w = BufWriter::new(File::create(&path)?);
            writeln!(w, "family,r,snr_db,success_rate,success_se,bound")?;
            for family in SMALL_FAMILIES {
                let dict = make_dictionary(family, 100, 200, master_seed)?;
                for cell in run_highdim_grid(
                    &dict,
                    &config.r_grid,
                    &config.snr_grid_db,
                    config.trials,
                    master_seed,
                )? {
                    writeln!(
                        w,
                        "{},{},{:.6},{:.17e},{:.17e},{:.17e}",
                        cell.family,
                        cell.r,
                        cell.snr_db,
                        cell.success_rate,
                        cell.success_se,
                        cell.bound
                    )?;
                }
            }
            files.push(path);
        }
        other => bail!("unknown figure id `{other}`"),
    }

    write_manifest(outdir, figure, &config, &files, started)?;
    Ok(files)
}
