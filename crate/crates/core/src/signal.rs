//! Co-sparse signal generation: draw a set of independent rows, project a
//! Gaussian vector onto their orthogonal complement, and read off the
//! effective co-support (the chosen rows plus every row they span).

use alloc::vec::Vec;

use crate::dictionary::AnalysisDictionary;
use crate::linalg::{dot, rank_of, OrthoBasis};
use crate::rng::{shuffled_indices, standard_normal_vec, stream_rng};
use crate::{Error, Result, EPS0};

/// A sorted set of row indices together with the rank of the corresponding
/// submatrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoSupport {
    indices: Vec<usize>,
    corank: usize,
}

impl CoSupport {
    /// Build from indices, computing the co-rank of `Ω_Λ`.
    pub fn new(dict: &AnalysisDictionary, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.last().is_some_and(|&i| i >= dict.p()) {
            return Err(Error::InvalidArgument("co-support index out of range"));
        }
        let corank = if indices.is_empty() {
            0
        } else {
            rank_of(&dict.submatrix(&indices)?)
        };
        Ok(CoSupport { indices, corank })
    }

    pub fn empty() -> Self {
        CoSupport {
            indices: Vec::new(),
            corank: 0,
        }
    }

    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    #[inline]
    pub fn corank(&self) -> usize {
        self.corank
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// Indices of `{0..p}` outside the co-support.
    pub fn complement(&self, p: usize) -> Vec<usize> {
        (0..p).filter(|j| !self.contains(*j)).collect()
    }

    /// Orthonormal basis of the row span of `Ω_Λ`.
    pub fn span_basis(&self, dict: &AnalysisDictionary) -> OrthoBasis {
        let mut basis = OrthoBasis::new(dict.d());
        for &j in &self.indices {
            let _ = basis.gs_insert(dict.atom(j));
        }
        basis
    }
}

/// An analysis signal with its generating subset and effective co-support.
#[derive(Debug, Clone)]
pub struct CosparseSignal {
    pub x: Vec<f64>,
    pub generating_subset: CoSupport,
    pub effective_cosupport: CoSupport,
    /// `ℓ = |effective co-support| = p - ‖Ωx‖₀`
    pub ell: usize,
    /// Dimension of the subspace containing the signal, `d - corank`.
    pub r: usize,
}

/// A noisy observation `y = x + e` of a co-sparse signal.
#[derive(Debug, Clone)]
pub struct NoisyInstance {
    pub y: Vec<f64>,
    pub x_true: CosparseSignal,
    pub sigma: f64,
}

impl NoisyInstance {
    /// Noise realization `e = y - x`.
    pub fn noise(&self) -> Vec<f64> {
        self.y
            .iter()
            .zip(&self.x_true.x)
            .map(|(y, x)| y - x)
            .collect()
    }
}

/// Uniformly sample rows without replacement, keeping only rows that grow
/// the rank, until `d - r` independent rows are accumulated.
pub fn draw_cosupport(
    dict: &AnalysisDictionary,
    r: usize,
    master_seed: u64,
    stream: u64,
) -> Result<CoSupport> {
    let d = dict.d();
    if r == 0 || r >= d {
        return Err(Error::InvalidArgument("require 1 <= r <= d-1"));
    }
    let target = d - r;
    let mut rng = stream_rng(master_seed, stream);
    let order = shuffled_indices(&mut rng, dict.p());
    let mut basis = OrthoBasis::new(d);
    let mut chosen = Vec::with_capacity(target);
    for j in order {
        if basis.gs_insert(dict.atom(j))? {
            chosen.push(j);
            if chosen.len() == target {
                chosen.sort_unstable();
                return Ok(CoSupport {
                    indices: chosen,
                    corank: target,
                });
            }
        }
    }
    Err(Error::InfeasibleTarget {
        wanted: target,
        available: basis.len(),
    })
}

/// Compute the effective co-support of `x`: all rows with `|w_j^T x| < ε₀`.
pub fn effective_cosupport(dict: &AnalysisDictionary, x: &[f64]) -> Result<CoSupport> {
    let z = dict.analyze(x)?;
    let indices: Vec<usize> = z
        .iter()
        .enumerate()
        .filter(|(_, v)| libm::fabs(**v) < EPS0)
        .map(|(j, _)| j)
        .collect();
    CoSupport::new(dict, indices)
}

/// Project a Gaussian vector `u ~ N(0, σ_u²I)` onto the subspace orthogonal
/// to `Ω_Λ` and recompute the effective co-support of the result.
pub fn project_signal(
    dict: &AnalysisDictionary,
    cosupport: &CoSupport,
    sigma_u: f64,
    master_seed: u64,
    stream: u64,
) -> Result<CosparseSignal> {
    if sigma_u <= 0.0 {
        return Err(Error::InvalidArgument("sigma_u must be positive"));
    }
    let d = dict.d();
    let basis = cosupport.span_basis(dict);
    let mut rng = stream_rng(master_seed, stream);
    loop {
        let mut u = standard_normal_vec(&mut rng, d);
        for v in u.iter_mut() {
            *v *= sigma_u;
        }
        let x = basis.project_complement(&u);
        let effective = effective_cosupport(dict, &x)?;
        // resampling on excess co-rank is a zero-probability safeguard
        if effective.corank() > cosupport.corank() {
            continue;
        }
        let ell = effective.len();
        return Ok(CosparseSignal {
            x,
            generating_subset: cosupport.clone(),
            effective_cosupport: effective,
            ell,
            r: d - cosupport.corank(),
        });
    }
}

/// Contaminate a signal with white Gaussian noise of std `sigma`.
pub fn add_noise(
    signal: &CosparseSignal,
    sigma: f64,
    master_seed: u64,
    stream: u64,
) -> Result<NoisyInstance> {
    if sigma < 0.0 {
        return Err(Error::InvalidArgument("sigma must be non-negative"));
    }
    let mut rng = stream_rng(master_seed, stream);
    let e = standard_normal_vec(&mut rng, signal.x.len());
    let y = signal
        .x
        .iter()
        .zip(&e)
        .map(|(x, n)| x + sigma * n)
        .collect();
    Ok(NoisyInstance {
        y,
        x_true: signal.clone(),
        sigma,
    })
}

/// `SNR = -20 log10( sqrt(d/r) * σ/σ_u )` in dB.
pub fn snr_of_ratio(ratio: f64, d: usize, r: usize) -> Result<f64> {
    if ratio <= 0.0 {
        return Err(Error::InvalidArgument("ratio must be positive"));
    }
    Ok(-20.0 * libm::log10(libm::sqrt(d as f64 / r as f64) * ratio))
}

/// Exact inverse of [`snr_of_ratio`].
pub fn ratio_of_snr(snr_db: f64, d: usize, r: usize) -> f64 {
    libm::pow(10.0, -snr_db / 20.0) / libm::sqrt(d as f64 / r as f64)
}

/// Smallest non-zero analysis coefficient magnitude of the clean signal.
pub fn zmin_of(dict: &AnalysisDictionary, signal: &CosparseSignal) -> Result<f64> {
    let complement = signal.effective_cosupport.complement(dict.p());
    if complement.is_empty() {
        return Err(Error::DegenerateSignal);
    }
    Ok(complement
        .iter()
        .map(|&j| libm::fabs(dot(dict.atom(j), &signal.x)))
        .fold(f64::INFINITY, f64::min))
}

/// Sanity check on a generated signal: coefficients on the effective
/// co-support are below `ε₀`, the rest above.
pub fn coefficients_separate(dict: &AnalysisDictionary, signal: &CosparseSignal) -> bool {
    let z = match dict.analyze(&signal.x) {
        Ok(z) => z,
        Err(_) => return false,
    };
    z.iter().enumerate().all(|(j, v)| {
        if signal.effective_cosupport.contains(j) {
            libm::fabs(*v) < EPS0
        } else {
            libm::fabs(*v) >= EPS0
        }
    })
}
