use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cosparse::harness::{
    self, denoise_one, generate_instance, instance_to_record, make_dictionary, run_bound_sweep,
};
use cosparse::io::{
    self, load_dictionary, parse_family, read_signals_jsonl, save_dictionary, write_curve_csv,
    write_denoise_csv, write_profile, write_signals_jsonl,
};
use cosparse_core::metrics::ClosureWeighting;
use cosparse_core::signal::{ratio_of_snr, snr_of_ratio, CoSupport};
use cosparse_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "cosparse", version, about = "Co-sparse analysis model toolkit")]
struct Cli {
    /// Master seed driving all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Reduced trial counts for fast runs.
    #[arg(long, global = true)]
    quick: bool,
    /// Output file or directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Dif,
    Rand,
    Mix,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Empirical,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Marginal,
    Joint,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an analysis dictionary and write it with a metadata sidecar.
    GenDict {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        d: usize,
        /// Number of rows; defaults to 2d (required to be 2d for dif/mix).
        #[arg(long)]
        p: Option<usize>,
    },
    /// Generate noisy co-sparse instances as JSON lines.
    GenSignals {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Noise level σ/σ_u.
        #[arg(long)]
        sigma_ratio: f64,
    },
    /// Certify a dictionary: signature, spark, co-sparsity and joint
    /// (ℓ, α) distributions.
    Profile {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Sample count for empirical mode.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Weight every distinct co-support closure equally instead of by
        /// its number of generating subsets.
        #[arg(long)]
        uniform_closures: bool,
    },
    /// Run the thresholding pursuit on a signal batch.
    Denoise {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        signals: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Tabulate the averaged theoretical bounds from a profile.
    Bounds {
        #[arg(long)]
        profile: PathBuf,
        /// Noise level σ/σ_u for a single-point curve.
        #[arg(long)]
        ratio: f64,
        /// SNR grid `lo:hi:n` in dB (overrides --ratio).
        #[arg(long)]
        snr_grid: Option<String>,
        #[arg(long, value_enum)]
        variant: VariantArg,
    },
    /// Recompute the data files behind a named figure.
    Reproduce {
        #[arg(value_parser = harness::FIGURE_IDS.to_vec())]
        figure: String,
    },
}

fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("--snr-grid wants `lo:hi:n`, got `{s}`");
    }
    let lo: f64 = parts[0].parse().context("bad grid lower bound")?;
    let hi: f64 = parts[1].parse().context("bad grid upper bound")?;
    let n: usize = parts[2].parse().context("bad grid point count")?;
    if n < 2 || hi <= lo {
        bail!("--snr-grid wants lo < hi and n >= 2");
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

fn require_out(out: &Option<PathBuf>) -> Result<&PathBuf> {
    out.as_ref().context("--out is required")
}

fn run(cli: Cli) -> Result<()> {
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()
            .context("worker pool already initialized")?;
    }
    match cli.command {
        Command::GenDict { family, d, p } => {
            let out = require_out(&cli.out)?;
            let family = parse_family(match family {
                FamilyArg::Dif => "dif",
                FamilyArg::Rand => "rand",
                FamilyArg::Mix => "mix",
            })?;
            let p = p.unwrap_or(2 * d);
            let dict = make_dictionary(family, d, p, cli.seed)?;
            save_dictionary(out, &dict)?;
        }
        Command::GenSignals {
            dict,
            r,
            n,
            sigma_ratio,
        } => {
            let out = require_out(&cli.out)?;
            if sigma_ratio < 0.0 {
                bail!("--sigma-ratio must be non-negative");
            }
            let dict = load_dictionary(&dict)?;
            let n = if cli.quick { n.min(500) } else { n };
            let mut records = Vec::with_capacity(n);
            for t in 0..n {
                let inst = generate_instance(&dict, r, sigma_ratio, cli.seed, t)?;
                records.push(instance_to_record(&inst, cli.seed, t));
            }
            write_signals_jsonl(out, &records)?;
        }
        Command::Profile {
            dict,
            r,
            mode,
            n,
            uniform_closures,
        } => {
            let out = require_out(&cli.out)?;
            let dict = load_dictionary(&dict)?;
            let weighting = if uniform_closures {
                ClosureWeighting::Uniform
            } else {
                ClosureWeighting::ByGeneratingSubsets
            };
            let profile = match mode {
                ModeArg::Exact => harness::profile_exact(&dict, r, weighting)?,
                ModeArg::Empirical => {
                    let n = if cli.quick { n.min(500) } else { n };
                    harness::profile_empirical(&dict, r, n, cli.seed)?.0
                }
            };
            write_profile(out, &profile)?;
        }
        Command::Denoise { dict, signals, r } => {
            let out = require_out(&cli.out)?;
            let dict = load_dictionary(&dict)?;
            let records = read_signals_jsonl(&signals)?;
            let mut rows = Vec::with_capacity(records.len());
            for (t, rec) in records.iter().enumerate() {
                // rebuild the instance from the stored record
                let cs = CoSupport::new(&dict, rec.cosupport.clone())?;
                let sigma = {
                    let d2: f64 = rec
                        .y
                        .iter()
                        .zip(&rec.x)
                        .map(|(y, x)| (y - x) * (y - x))
                        .sum();
                    (d2 / dict.d() as f64).sqrt()
                };
                let sig = cosparse_core::signal::CosparseSignal {
                    x: rec.x.clone(),
                    generating_subset: cs.clone(),
                    effective_cosupport: cs,
                    ell: rec.ell,
                    r,
                };
                let inst = cosparse_core::signal::NoisyInstance {
                    y: rec.y.clone(),
                    x_true: sig,
                    sigma,
                };
                rows.push(denoise_one(&dict, &inst, r, t)?.0);
            }
            write_denoise_csv(out, &rows)?;
        }
        Command::Bounds {
            profile,
            ratio,
            snr_grid,
            variant,
        } => {
            let out = require_out(&cli.out)?;
            if ratio <= 0.0 {
                bail!("--ratio must be positive");
            }
            let profile = io::read_profile(&profile)?;
            let grid = match snr_grid {
                Some(s) => parse_snr_grid(&s)?,
                None => vec![snr_of_ratio(ratio, profile.d, profile.r)?],
            };
            let (marginal, joint) = run_bound_sweep(&profile, &grid)?;
            let curve = match variant {
                VariantArg::Marginal => marginal,
                VariantArg::Joint => joint,
            };
            let ratios: Vec<f64> = grid
                .iter()
                .map(|&s| ratio_of_snr(s, profile.d, profile.r))
                .collect();
            write_curve_csv(out, &curve, &ratios)?;
        }
        Command::Reproduce { figure } => {
            let out = require_out(&cli.out)?;
            harness::reproduce(&figure, out, cli.seed, cli.quick)?;
        }
    }
    Ok(())
}

/// 0 success, 2 configuration error, 3 budget/infeasible.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::BudgetExceeded { .. }) | Some(CoreError::InfeasibleTarget { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
