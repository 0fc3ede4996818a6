//! Closed-form lower bounds on the probability that thresholding recovers
//! the true co-support: the Gaussian tail, the per-coefficient base
//! `g(β)`, the conditional and unconditional bounds, and their averages
//! over co-sparsity (and joint co-sparsity/projection-quality)
//! distributions.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Gaussian upper-tail probability `Q(t) = ∫_t^∞ φ(z) dz`.
pub fn q_tail(t: f64) -> f64 {
    0.5 * libm::erfc(t / libm::sqrt(2.0))
}

/// The per-coefficient success base
/// `g(β) = max{0, 1 - sqrt(8/(πβ²)) exp(-β²/8)}`.
pub fn g_base(beta: f64) -> Result<f64> {
    if beta <= 0.0 {
        return Err(Error::InvalidArgument("beta must be positive"));
    }
    let v = 1.0 - libm::sqrt(8.0 / (core::f64::consts::PI * beta * beta))
        * libm::exp(-beta * beta / 8.0);
    Ok(v.max(0.0))
}

/// Conditional success bound `g(β)^(p-ℓ+d-r)`, given `z_min >= βσ`.
pub fn theorem1_bound(p: usize, d: usize, r: usize, ell: usize, beta: f64) -> Result<f64> {
    check_shape(p, d, r, ell)?;
    let g = g_base(beta)?;
    Ok(pow_log(g, (p - ell + d - r) as f64))
}

/// Lower bound on `Pr{z_min > βσ}`: `(2Q(β·ratio/α))^(p-ℓ)`.
pub fn zmin_prob_bound(p: usize, ell: usize, beta: f64, ratio: f64, alpha: f64) -> Result<f64> {
    if ell > p {
        return Err(Error::InvalidArgument("require ell <= p"));
    }
    check_noise(beta, ratio, alpha)?;
    Ok(pow_log(2.0 * q_tail(beta * ratio / alpha), (p - ell) as f64))
}

/// Unconditional success bound: the product of [`theorem1_bound`] and
/// [`zmin_prob_bound`].
pub fn theorem2_bound(
    p: usize,
    d: usize,
    r: usize,
    ell: usize,
    ratio: f64,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    check_shape(p, d, r, ell)?;
    check_noise(beta, ratio, alpha)?;
    Ok(libm::exp(ln_theorem2(p, d, r, ell, ratio, alpha, beta)))
}

/// A bound evaluation with the β that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub p: usize,
    pub d: usize,
    pub r: usize,
    pub ell: usize,
    pub ratio: f64,
    pub alpha: f64,
    pub beta_star: f64,
    pub bound: f64,
}

/// Variant of an averaged bound curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveVariant {
    /// Averaged over the co-sparsity distribution with the worst-case α.
    Marginal,
    /// Averaged over the joint (ℓ, α) distribution.
    Joint,
}

impl CurveVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveVariant::Marginal => "marginal",
            CurveVariant::Joint => "joint",
        }
    }
}

/// Bound values tabulated over an SNR axis.
#[derive(Debug, Clone)]
pub struct BoundCurve {
    pub snr_db: Vec<f64>,
    pub values: Vec<f64>,
    pub variant: CurveVariant,
}

const BETA_GRID_LO: f64 = 1e-2;
const BETA_GRID_HI: f64 = 1e3;
const BETA_GRID_POINTS: usize = 2000;

/// Maximize the unconditional bound over β: a logarithmic grid scan
/// followed by golden-section refinement around the grid argmax. The grid
/// guards against local maxima since unimodality of the objective is not
/// established.
pub fn optimize_beta(
    p: usize,
    d: usize,
    r: usize,
    ell: usize,
    ratio: f64,
    alpha: f64,
) -> Result<BoundPoint> {
    check_shape(p, d, r, ell)?;
    check_noise(1.0, ratio, alpha)?;
    let f = |beta: f64| ln_theorem2(p, d, r, ell, ratio, alpha, beta);
    let (beta_star, ln_bound) = maximize_log_grid(f);
    Ok(BoundPoint {
        p,
        d,
        r,
        ell,
        ratio,
        alpha,
        beta_star,
        bound: libm::exp(ln_bound),
    })
}

/// Weighted average of per-ℓ optimized bounds with a fixed worst-case α:
/// `Σ_k Pr{ℓ=k} max_β g(β)^(p-k+d-r) (2Q(βρ/α))^(p-k)`.
pub fn averaged_bound_marginal(
    p: usize,
    d: usize,
    r: usize,
    ratio: f64,
    alpha: f64,
    cosparsity_dist: &[(usize, f64)],
) -> Result<f64> {
    check_distribution(cosparsity_dist.iter().map(|(_, w)| *w))?;
    let mut total = 0.0;
    for &(ell, weight) in cosparsity_dist {
        if weight == 0.0 {
            continue;
        }
        total += weight * optimize_beta(p, d, r, ell, ratio, alpha)?.bound;
    }
    Ok(total.clamp(0.0, 1.0))
}

/// Weighted average over joint (ℓ, α-bin) cells, with the bin's lower edge
/// `(m-1)/T` as the α surrogate. Cells in the first bin have surrogate 0,
/// a diverging tail argument, and contribute exactly zero.
pub fn averaged_bound_joint(
    p: usize,
    d: usize,
    r: usize,
    ratio: f64,
    joint_cells: &[(usize, usize, f64)],
    t_bins: usize,
) -> Result<f64> {
    if t_bins == 0 {
        return Err(Error::InvalidArgument("need at least one alpha bin"));
    }
    check_distribution(joint_cells.iter().map(|(_, _, w)| *w))?;
    let mut total = 0.0;
    for &(ell, m, weight) in joint_cells {
        if weight == 0.0 || m == 1 {
            continue;
        }
        if m > t_bins {
            return Err(Error::InvalidArgument("alpha bin index out of range"));
        }
        let alpha = (m - 1) as f64 / t_bins as f64;
        total += weight * optimize_beta(p, d, r, ell, ratio, alpha)?.bound;
    }
    Ok(total.clamp(0.0, 1.0))
}

fn check_shape(p: usize, d: usize, r: usize, ell: usize) -> Result<()> {
    if ell > p {
        return Err(Error::InvalidArgument("require ell <= p"));
    }
    // r = d is allowed here so the degenerate zero-exponent case of the
    // conditional bound stays evaluable
    if r == 0 || r > d {
        return Err(Error::InvalidArgument("require 1 <= r <= d"));
    }
    Ok(())
}

fn check_noise(beta: f64, ratio: f64, alpha: f64) -> Result<()> {
    if beta <= 0.0 {
        return Err(Error::InvalidArgument("beta must be positive"));
    }
    if ratio <= 0.0 {
        return Err(Error::InvalidArgument("noise ratio must be positive"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument("alpha must lie in (0, 1]"));
    }
    Ok(())
}

fn check_distribution(weights: impl Iterator<Item = f64>) -> Result<()> {
    let mut sum = 0.0;
    for w in weights {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidArgument("weights must lie in [0, 1]"));
        }
        sum += w;
    }
    if libm::fabs(sum - 1.0) > 1e-9 {
        return Err(Error::InvalidArgument("distribution must sum to 1"));
    }
    Ok(())
}

/// `base^exponent` through `exp(exponent·ln(base))` so large exponents do
/// not underflow prematurely; `0^0 = 1`.
fn pow_log(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        return 1.0;
    }
    if base <= 0.0 {
        return 0.0;
    }
    libm::exp(exponent * libm::log(base))
}

fn ln_theorem2(
    p: usize,
    d: usize,
    r: usize,
    ell: usize,
    ratio: f64,
    alpha: f64,
    beta: f64,
) -> f64 {
    let g = match g_base(beta) {
        Ok(g) => g,
        Err(_) => return f64::NEG_INFINITY,
    };
    if g <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let tail = 2.0 * q_tail(beta * ratio / alpha);
    let e2 = (p - ell) as f64;
    if tail <= 0.0 && e2 > 0.0 {
        return f64::NEG_INFINITY;
    }
    let e1 = (p - ell + d - r) as f64;
    let mut ln = e1 * libm::log(g);
    if e2 > 0.0 {
        ln += e2 * libm::log(tail);
    }
    ln
}

fn maximize_log_grid(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = BETA_GRID_POINTS;
    let log_lo = libm::log(BETA_GRID_LO);
    let log_hi = libm::log(BETA_GRID_HI);
    let step = (log_hi - log_lo) / (n - 1) as f64;
    let grid = |i: usize| libm::exp(log_lo + step * i as f64);
    let (mut best_i, mut best_v) = (0, f64::NEG_INFINITY);
    for i in 0..n {
        let v = f(grid(i));
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = grid(best_i.saturating_sub(1));
    let hi = grid(core::cmp::min(best_i + 1, n - 1));
    golden_section_max(&f, lo, hi)
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
