//! Dictionary certification: signature and spark, exact and empirical
//! co-sparsity distributions, the restricted orthogonal projection property
//! (ROPP), and the quantized joint (ℓ, α) distribution.
//!
//! Exhaustive enumeration walks the lexicographic ranks of the
//! `C(p, d-r)` row subsets. [`process_subset_range`] handles a contiguous
//! rank range and its results merge associatively, so callers may partition
//! the range across workers and obtain output identical to a serial run.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use crate::dictionary::AnalysisDictionary;
use crate::linalg::{Mat, OrthoBasis};
use crate::rng::stream_rng;
use crate::signal::{CoSupport, CosparseSignal};
use crate::{Error, Result, EPS0};

/// Relative residual tolerance for deciding that a row lies in the span of
/// a subset, matching the ε₀ used for effective co-support detection.
const SPAN_TOL: f64 = EPS0;

/// Default cap on exhaustive enumeration: `C(p, k)` beyond this demands the
/// empirical path.
pub const DEFAULT_ENUM_BUDGET: u128 = 10_000_000;

/// How exhaustively derived quantities were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    Exact,
    Empirical,
}

/// How each distinct effective co-support is weighted in exact
/// distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosureWeighting {
    /// Weight by the number of generating `(d-r)`-independent subsets,
    /// matching the signal generation process.
    #[default]
    ByGeneratingSubsets,
    /// Weight every distinct closure equally.
    Uniform,
}

/// The full certification record of a dictionary at one co-rank target.
#[derive(Debug, Clone)]
pub struct DictionaryProfile {
    /// `f(k)` for `k = 1..=d`: fraction of k-row subsets with rank k.
    pub signature: Vec<f64>,
    /// Smallest `k` with `f(k) < 1`, or `d+1` when the spark is full.
    pub spark: usize,
    /// Probability of each co-sparsity level `ℓ` at the profiled co-rank.
    pub cosparsity_dist: Vec<(usize, f64)>,
    /// The ROPP constant `α_r`.
    pub alpha_r: f64,
    /// Sparse cells `(ℓ, m, prob)` of the quantized joint distribution.
    pub joint: Vec<(usize, usize, f64)>,
    pub r: usize,
    pub t_bins: usize,
    pub mode: ProfileMode,
    pub sample_count: Option<usize>,
}

impl DictionaryProfile {
    /// Densify the joint distribution into the `p×T` matrix layout
    /// (row `ℓ = 1..p`, column `m = 1..T`).
    pub fn joint_dense(&self, p: usize) -> Mat {
        let mut m = Mat::zeros(p, self.t_bins);
        for &(ell, bin, prob) in &self.joint {
            m.set(ell - 1, bin - 1, prob);
        }
        m
    }
}

/// Binomial coefficient, capped at `cap` to avoid overflow; returns
/// `cap + 1` when the true value exceeds the cap.
pub fn binomial_capped(n: usize, k: usize, cap: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = core::cmp::min(k, n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
        if acc > cap {
            return cap + 1;
        }
    }
    acc
}

/// Decode the lexicographic rank of a k-subset of `0..n`.
fn unrank_subset(n: usize, k: usize, rank: u128, out: &mut Vec<usize>) {
    out.clear();
    let mut rem = rank;
    let mut next = 0usize;
    for pos in 0..k {
        let mut x = next;
        loop {
            let c = binomial_capped(n - 1 - x, k - 1 - pos, u128::MAX - 1);
            if c <= rem {
                rem -= c;
                x += 1;
            } else {
                break;
            }
        }
        out.push(x);
        next = x + 1;
    }
}

fn subset_rank(dict: &AnalysisDictionary, subset: &[usize], basis: &mut OrthoBasis) -> usize {
    *basis = OrthoBasis::new(dict.d());
    let mut rank = 0;
    for &j in subset {
        if basis.gs_insert(dict.atom(j)).unwrap_or(false) {
            rank += 1;
        }
    }
    rank
}

/// Signature `f(1..=d)` and spark of `Ω^T`.
///
/// `sample_budget` bounds the per-`k` subset count in exact mode and sets
/// the per-`k` sample count in empirical mode.
pub fn signature(
    dict: &AnalysisDictionary,
    mode: ProfileMode,
    sample_budget: u128,
    seed: u64,
) -> Result<(Vec<f64>, usize)> {
    let d = dict.d();
    let p = dict.p();
    let mut f = Vec::with_capacity(d);
    let mut basis = OrthoBasis::new(d);
    let mut subset = Vec::with_capacity(d);
    match mode {
        ProfileMode::Exact => {
            for k in 1..=d {
                let total = binomial_capped(p, k, sample_budget);
                if total > sample_budget {
                    return Err(Error::BudgetExceeded {
                        subsets: total,
                        budget: sample_budget,
                    });
                }
                let mut independent = 0u128;
                for rank in 0..total {
                    unrank_subset(p, k, rank, &mut subset);
                    if subset_rank(dict, &subset, &mut basis) == k {
                        independent += 1;
                    }
                }
                f.push(independent as f64 / total as f64);
            }
        }
        ProfileMode::Empirical => {
            let n = sample_budget.min(u64::MAX as u128) as u64;
            let mut rng = stream_rng(seed, 0);
            for k in 1..=d {
                let mut independent = 0u64;
                for _ in 0..n {
                    subset.clear();
                    while subset.len() < k {
                        let j = rng.random_range(0..p);
                        if !subset.contains(&j) {
                            subset.push(j);
                        }
                    }
                    if subset_rank(dict, &subset, &mut basis) == k {
                        independent += 1;
                    }
                }
                f.push(independent as f64 / n as f64);
            }
        }
    }
    let spark = f.iter().position(|&v| v < 1.0).map_or(d + 1, |i| i + 1);
    Ok((f, spark))
}

/// Spark of `Ω^T` alone, stopping at the first dependent subset size.
pub fn spark_of(dict: &AnalysisDictionary, budget: u128) -> Result<usize> {
    let d = dict.d();
    let p = dict.p();
    let mut basis = OrthoBasis::new(d);
    let mut subset = Vec::with_capacity(d);
    for k in 1..=d {
        let total = binomial_capped(p, k, budget);
        if total > budget {
            return Err(Error::BudgetExceeded {
                subsets: total,
                budget,
            });
        }
        for rank in 0..total {
            unrank_subset(p, k, rank, &mut subset);
            if subset_rank(dict, &subset, &mut basis) < k {
                return Ok(k);
            }
        }
    }
    Ok(d + 1)
}

/// Partial result of an exhaustive co-support enumeration: distinct
/// effective co-supports with the number of generating subsets seen so far.
#[derive(Debug, Clone, Default)]
pub struct ClosureAccumulator {
    closures: BTreeMap<Vec<usize>, u64>,
    pub subsets_seen: u64,
    pub full_rank_subsets: u64,
}

impl ClosureAccumulator {
    pub fn merge(mut self, other: ClosureAccumulator) -> ClosureAccumulator {
        for (k, v) in other.closures {
            *self.closures.entry(k).or_insert(0) += v;
        }
        self.subsets_seen += other.subsets_seen;
        self.full_rank_subsets += other.full_rank_subsets;
        self
    }

    pub fn closures(&self) -> &BTreeMap<Vec<usize>, u64> {
        &self.closures
    }

    /// Deduped closures with normalized weights.
    pub fn finalize(
        &self,
        dict: &AnalysisDictionary,
        weighting: ClosureWeighting,
    ) -> Result<Vec<(CoSupport, f64)>> {
        if self.closures.is_empty() {
            return Err(Error::InvalidArgument("no full-rank subsets found"));
        }
        let total: f64 = match weighting {
            ClosureWeighting::ByGeneratingSubsets => self.full_rank_subsets as f64,
            ClosureWeighting::Uniform => self.closures.len() as f64,
        };
        self.closures
            .iter()
            .map(|(indices, count)| {
                let w = match weighting {
                    ClosureWeighting::ByGeneratingSubsets => *count as f64 / total,
                    ClosureWeighting::Uniform => 1.0 / total,
                };
                Ok((CoSupport::new(dict, indices.clone())?, w))
            })
            .collect()
    }
}

/// Number of `(d-r)`-subsets an exhaustive enumeration must visit.
pub fn enumeration_size(dict: &AnalysisDictionary, r: usize, budget: u128) -> Result<u128> {
    let d = dict.d();
    if r == 0 || r >= d {
        return Err(Error::InvalidArgument("require 1 <= r <= d-1"));
    }
    let total = binomial_capped(dict.p(), d - r, budget);
    if total > budget {
        return Err(Error::BudgetExceeded {
            subsets: total,
            budget,
        });
    }
    Ok(total)
}

/// Visit the lexicographic subset ranks in `[start, end)`: skip
/// rank-deficient subsets, close full-rank ones to their effective
/// co-support `{j : w_j ∈ span}`, and tally generating subsets per closure.
pub fn process_subset_range(
    dict: &AnalysisDictionary,
    r: usize,
    start: u64,
    end: u64,
) -> ClosureAccumulator {
    let d = dict.d();
    let p = dict.p();
    let k = d - r;
    let mut acc = ClosureAccumulator::default();
    let mut basis = OrthoBasis::new(d);
    let mut subset = Vec::with_capacity(k);
    for rank_idx in start..end {
        unrank_subset(p, k, rank_idx as u128, &mut subset);
        acc.subsets_seen += 1;
        if subset_rank(dict, &subset, &mut basis) < k {
            continue;
        }
        acc.full_rank_subsets += 1;
        let closure: Vec<usize> = (0..p)
            .filter(|&j| basis.contains(dict.atom(j), SPAN_TOL))
            .collect();
        *acc.closures.entry(closure).or_insert(0) += 1;
    }
    acc
}

/// Exhaustively enumerate all effective co-supports of co-rank `d - r`.
pub fn enumerate_cosupports(
    dict: &AnalysisDictionary,
    r: usize,
    budget: u128,
    weighting: ClosureWeighting,
) -> Result<Vec<(CoSupport, f64)>> {
    let total = enumeration_size(dict, r, budget)? as u64;
    process_subset_range(dict, r, 0, total).finalize(dict, weighting)
}

/// Per-co-support projection quality
/// `α_r^Λ = min_{j∈Λ^C} ‖(I - Ω_Λ†Ω_Λ) w_j‖₂`.
pub fn ropp_alpha_lambda(dict: &AnalysisDictionary, cosupport: &CoSupport) -> Result<f64> {
    let complement = cosupport.complement(dict.p());
    if complement.is_empty() {
        return Err(Error::DegenerateSignal);
    }
    let basis = cosupport.span_basis(dict);
    Ok(complement
        .iter()
        .map(|&j| basis.residual_norm(dict.atom(j)))
        .fold(f64::INFINITY, f64::min))
}

/// Exact ROPP constant: minimum of `α_r^Λ` over all co-supports of co-rank
/// `d - r`.
pub fn ropp_constant_exact(dict: &AnalysisDictionary, r: usize, budget: u128) -> Result<f64> {
    let closures = enumerate_cosupports(dict, r, budget, ClosureWeighting::Uniform)?;
    alpha_min_over(dict, closures.iter().map(|(cs, _)| cs))
}

/// Empirical ROPP constant over the effective co-supports of a signal
/// sample; an upper bound on the exact constant.
pub fn ropp_constant_empirical(
    dict: &AnalysisDictionary,
    signals: &[CosparseSignal],
) -> Result<f64> {
    alpha_min_over(dict, signals.iter().map(|s| &s.effective_cosupport))
}

fn alpha_min_over<'a>(
    dict: &AnalysisDictionary,
    cosupports: impl Iterator<Item = &'a CoSupport>,
) -> Result<f64> {
    let mut min = f64::INFINITY;
    let mut seen = false;
    for cs in cosupports {
        seen = true;
        min = min.min(ropp_alpha_lambda(dict, cs)?);
    }
    if !seen {
        return Err(Error::InvalidArgument("empty co-support collection"));
    }
    Ok(min)
}

/// Quantization bin for an α value: `(m-1)/T <= α < m/T`, with `α = 1`
/// clamped into the top bin.
pub fn alpha_bin(alpha: f64, t_bins: usize) -> usize {
    let m = libm::floor(alpha * t_bins as f64) as usize + 1;
    m.clamp(1, t_bins)
}

/// Joint distribution cells `(ℓ, m, prob)` over weighted co-supports.
pub fn joint_distribution<'a>(
    dict: &AnalysisDictionary,
    weighted: impl Iterator<Item = (&'a CoSupport, f64)>,
    t_bins: usize,
) -> Result<Vec<(usize, usize, f64)>> {
    let mut cells: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut any = false;
    for (cs, w) in weighted {
        any = true;
        let alpha = ropp_alpha_lambda(dict, cs)?;
        *cells.entry((cs.len(), alpha_bin(alpha, t_bins))).or_insert(0.0) += w;
    }
    if !any {
        return Err(Error::InvalidArgument("empty co-support collection"));
    }
    Ok(cells.into_iter().map(|((k, m), w)| (k, m, w)).collect())
}

/// Sufficient condition `max_{j∈Λ^C} ‖Ω_Λ†Ω_Λ w_j‖₂ <= 1 - α`.
pub fn erc_like_check(
    dict: &AnalysisDictionary,
    cosupport: &CoSupport,
    alpha: f64,
) -> Result<bool> {
    let complement = cosupport.complement(dict.p());
    if complement.is_empty() {
        return Err(Error::DegenerateSignal);
    }
    let basis = cosupport.span_basis(dict);
    let max_proj = complement
        .iter()
        .map(|&j| libm::sqrt(basis.span_component_sq(dict.atom(j))))
        .fold(0.0, f64::max);
    Ok(max_proj <= 1.0 - alpha)
}

/// Assemble a full exact profile of `dict` at subspace dimension `r`.
pub fn build_profile_exact(
    dict: &AnalysisDictionary,
    r: usize,
    t_bins: usize,
    budget: u128,
    weighting: ClosureWeighting,
) -> Result<DictionaryProfile> {
    let (sig, spark) = signature(dict, ProfileMode::Exact, budget, 0)?;
    let closures = enumerate_cosupports(dict, r, budget, weighting)?;
    let mut dist: BTreeMap<usize, f64> = BTreeMap::new();
    for (cs, w) in &closures {
        *dist.entry(cs.len()).or_insert(0.0) += w;
    }
    let alpha_r = alpha_min_over(dict, closures.iter().map(|(cs, _)| cs))?;
    let joint = joint_distribution(dict, closures.iter().map(|(cs, w)| (cs, *w)), t_bins)?;
    Ok(DictionaryProfile {
        signature: sig,
        spark,
        cosparsity_dist: dist.into_iter().collect(),
        alpha_r,
        joint,
        r,
        t_bins,
        mode: ProfileMode::Exact,
        sample_count: None,
    })
}

/// Assemble an empirical profile from generated signals. Distinct effective
/// co-supports are profiled once and weighted by occurrence.
pub fn build_profile_empirical(
    dict: &AnalysisDictionary,
    r: usize,
    t_bins: usize,
    signature_samples: u128,
    seed: u64,
    signals: &[CosparseSignal],
) -> Result<DictionaryProfile> {
    if signals.is_empty() {
        return Err(Error::InvalidArgument("empty signal sample"));
    }
    let (sig, spark) = signature(dict, ProfileMode::Empirical, signature_samples, seed)?;
    let mut counts: BTreeMap<&[usize], (u64, &CoSupport)> = BTreeMap::new();
    for s in signals {
        counts
            .entry(s.effective_cosupport.indices())
            .or_insert((0, &s.effective_cosupport))
            .0 += 1;
    }
    let n = signals.len() as f64;
    let weighted: Vec<(&CoSupport, f64)> = counts
        .values()
        .map(|(c, cs)| (*cs, *c as f64 / n))
        .collect();
    let mut dist: BTreeMap<usize, f64> = BTreeMap::new();
    for (cs, w) in &weighted {
        *dist.entry(cs.len()).or_insert(0.0) += w;
    }
    let alpha_r = alpha_min_over(dict, weighted.iter().map(|(cs, _)| *cs))?;
    let joint = joint_distribution(dict, weighted.iter().map(|(cs, w)| (*cs, *w)), t_bins)?;
    Ok(DictionaryProfile {
        signature: sig,
        spark,
        cosparsity_dist: dist.into_iter().collect(),
        alpha_r,
        joint,
        r,
        t_bins,
        mode: ProfileMode::Empirical,
        sample_count: Some(signals.len()),
    })
}

/// Total-variation distance between two co-sparsity distributions.
pub fn total_variation(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    let mut keys: Vec<usize> = a.iter().chain(b).map(|(k, _)| *k).collect();
    keys.sort_unstable();
    keys.dedup();
    let lookup = |dist: &[(usize, f64)], k: usize| {
        dist.iter().find(|(kk, _)| *kk == k).map_or(0.0, |(_, v)| *v)
    };
    0.5 * keys
        .iter()
        .map(|&k| libm::fabs(lookup(a, k) - lookup(b, k)))
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{make_dif, make_mix, make_rand, AnalysisDictionary};
    use crate::linalg::{norm2, Mat};
    use alloc::vec;

    fn identity_dict(d: usize) -> AnalysisDictionary {
        let (dict, _) = crate::dictionary::from_matrix(Mat::identity(d)).unwrap();
        dict
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial_capped(18, 7, u128::MAX - 1), 31824);
        assert_eq!(binomial_capped(5, 0, 100), 1);
        assert_eq!(binomial_capped(4, 5, 100), 0);
        assert_eq!(binomial_capped(200, 100, 1000), 1001);
    }

    #[test]
    fn unranking_is_lexicographic_and_complete() {
        let mut seen = vec![];
        let mut subset = Vec::new();
        for rank in 0..binomial_capped(5, 3, 100) {
            unrank_subset(5, 3, rank, &mut subset);
            seen.push(subset.clone());
        }
        assert_eq!(seen.len(), 10);
        let mut sorted = seen.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, seen);
    }

    #[test]
    fn identity_signature_is_flat() {
        let dict = identity_dict(6);
        let (f, spark) = signature(&dict, ProfileMode::Exact, 1 << 20, 0).unwrap();
        assert!(f.iter().all(|&v| v == 1.0));
        assert_eq!(spark, 7);
    }

    #[test]
    fn dif_spark_is_three() {
        let dict = make_dif(3).unwrap();
        assert_eq!(spark_of(&dict, DEFAULT_ENUM_BUDGET).unwrap(), 3);
        let (f, spark) = signature(&dict, ProfileMode::Exact, DEFAULT_ENUM_BUDGET, 0).unwrap();
        assert_eq!(spark, 3);
        assert_eq!(f[0], 1.0);
        assert_eq!(f[1], 1.0);
        for k in 3..=9 {
            assert!(f[k - 1] < 1.0);
        }
        // signature is non-increasing
        for w in f.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn grid_two_dif_spark_is_two() {
        // negation partners on a 2-wide cyclic grid make pairs dependent
        let dict = make_dif(2).unwrap();
        assert_eq!(spark_of(&dict, DEFAULT_ENUM_BUDGET).unwrap(), 2);
    }

    #[test]
    fn rand_signature_is_flat_with_full_spark() {
        let dict = make_rand(18, 9, 17).unwrap();
        let (f, spark) = signature(&dict, ProfileMode::Exact, DEFAULT_ENUM_BUDGET, 0).unwrap();
        assert!(f.iter().all(|&v| v == 1.0));
        assert_eq!(spark, 10);
    }

    #[test]
    fn rand_closures_are_uniform_seven_subsets() {
        let dict = make_rand(18, 9, 4).unwrap();
        let closures = enumerate_cosupports(
            &dict,
            2,
            DEFAULT_ENUM_BUDGET,
            ClosureWeighting::ByGeneratingSubsets,
        )
        .unwrap();
        assert_eq!(closures.len(), 31824);
        for (cs, w) in &closures {
            assert_eq!(cs.len(), 7);
            assert!((w - 1.0 / 31824.0).abs() < 1e-15);
        }
    }

    #[test]
    fn dif_closure_sizes_are_even_eight_to_fourteen() {
        let dict = make_dif(3).unwrap();
        let closures = enumerate_cosupports(
            &dict,
            2,
            DEFAULT_ENUM_BUDGET,
            ClosureWeighting::ByGeneratingSubsets,
        )
        .unwrap();
        let mut sizes: Vec<usize> = closures.iter().map(|(cs, _)| cs.len()).collect();
        sizes.sort_unstable();
        sizes.dedup();
        assert_eq!(sizes, vec![8, 10, 12, 14]);
        let total: f64 = closures.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mix_closures_match_dif() {
        let dif = make_dif(3).unwrap();
        let mix = make_mix(3, 23).unwrap();
        let a = enumerate_cosupports(&dif, 2, DEFAULT_ENUM_BUDGET, ClosureWeighting::Uniform)
            .unwrap();
        let b = enumerate_cosupports(&mix, 2, DEFAULT_ENUM_BUDGET, ClosureWeighting::Uniform)
            .unwrap();
        let ka: Vec<&[usize]> = a.iter().map(|(cs, _)| cs.indices()).collect();
        let kb: Vec<&[usize]> = b.iter().map(|(cs, _)| cs.indices()).collect();
        assert_eq!(ka, kb);
    }

    #[test]
    fn range_partitioning_is_merge_invariant() {
        let dict = make_dif(3).unwrap();
        let total = enumeration_size(&dict, 2, DEFAULT_ENUM_BUDGET).unwrap() as u64;
        let serial = process_subset_range(&dict, 2, 0, total);
        let mut merged = ClosureAccumulator::default();
        let chunk = total / 7 + 1;
        let mut start = 0;
        while start < total {
            let end = (start + chunk).min(total);
            merged = merged.merge(process_subset_range(&dict, 2, start, end));
            start = end;
        }
        assert_eq!(serial.full_rank_subsets, merged.full_rank_subsets);
        assert_eq!(serial.closures(), merged.closures());
    }

    #[test]
    fn identity_alpha_is_one() {
        let dict = identity_dict(5);
        let cs = CoSupport::new(&dict, vec![0, 2]).unwrap();
        assert!((ropp_alpha_lambda(&dict, &cs).unwrap() - 1.0).abs() < 1e-12);
        // empty co-support: unit rows, nothing projected away
        let empty = CoSupport::empty();
        assert!((ropp_alpha_lambda(&dict, &empty).unwrap() - 1.0).abs() < 1e-12);
        assert!(erc_like_check(&dict, &cs, 1.0).unwrap());
    }

    #[test]
    fn alpha_matches_explicit_projector() {
        let dict = make_dif(3).unwrap();
        let closures = enumerate_cosupports(
            &dict,
            2,
            DEFAULT_ENUM_BUDGET,
            ClosureWeighting::Uniform,
        )
        .unwrap();
        let (cs, _) = &closures[0];
        let fast = ropp_alpha_lambda(&dict, cs).unwrap();
        // independent route: explicit null-space projector applied to each atom
        let sub = dict.submatrix(cs.indices()).unwrap();
        let proj = crate::linalg::nullspace_projector(&sub);
        let slow = cs
            .complement(dict.p())
            .iter()
            .map(|&j| norm2(&proj.matvec(dict.atom(j)).unwrap()))
            .fold(f64::INFINITY, f64::min);
        assert!((fast - slow).abs() < 1e-10);
    }

    #[test]
    fn erc_check_implies_alpha_bound() {
        let dict = make_rand(18, 9, 31).unwrap();
        for t in 0..50u64 {
            let cs = crate::signal::draw_cosupport(&dict, 2, 77, t).unwrap();
            for alpha in [0.05, 0.2, 0.5, 0.9] {
                if erc_like_check(&dict, &cs, alpha).unwrap() {
                    assert!(ropp_alpha_lambda(&dict, &cs).unwrap() >= alpha);
                }
            }
        }
    }

    #[test]
    fn joint_marginal_matches_cosparsity_dist() {
        let dict = make_dif(3).unwrap();
        let profile = build_profile_exact(
            &dict,
            2,
            100,
            DEFAULT_ENUM_BUDGET,
            ClosureWeighting::ByGeneratingSubsets,
        )
        .unwrap();
        for (ell, prob) in &profile.cosparsity_dist {
            let marginal: f64 = profile
                .joint
                .iter()
                .filter(|(k, _, _)| k == ell)
                .map(|(_, _, w)| w)
                .sum();
            assert!((marginal - prob).abs() < 1e-12);
        }
        let total: f64 = profile.joint.iter().map(|(_, _, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn min_populated_alpha_bin_brackets_exact_constant() {
        let dict = make_dif(3).unwrap();
        let profile = build_profile_exact(
            &dict,
            2,
            100,
            DEFAULT_ENUM_BUDGET,
            ClosureWeighting::ByGeneratingSubsets,
        )
        .unwrap();
        let min_bin = profile.joint.iter().map(|(_, m, _)| *m).min().unwrap();
        assert_eq!(alpha_bin(profile.alpha_r, profile.t_bins), min_bin);
    }

    #[test]
    fn alpha_bin_edges() {
        assert_eq!(alpha_bin(1.0, 100), 100);
        assert_eq!(alpha_bin(0.999, 100), 100);
        assert_eq!(alpha_bin(0.0049, 100), 1);
        assert_eq!(alpha_bin(0.01, 100), 2);
    }
}
