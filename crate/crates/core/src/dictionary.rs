//! The three analysis dictionary families: cyclic finite differences on a
//! square grid (DIF), i.i.d. Gaussian rows (RAND), and DIF right-multiplied
//! by a random invertible matrix (MIX), plus user-supplied operators.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{norm2, rank_of, Mat};
use crate::rng::{standard_normal_vec, stream_rng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Dif,
    Rand,
    Mix,
    Custom,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Dif => "dif",
            Family::Rand => "rand",
            Family::Mix => "mix",
            Family::Custom => "custom",
        }
    }
}

/// A `p×d` analysis operator with unit-norm rows plus its provenance.
#[derive(Debug, Clone)]
pub struct AnalysisDictionary {
    omega: Mat,
    family: Family,
    seed: Option<u64>,
    grid_side: Option<usize>,
}

impl AnalysisDictionary {
    #[inline]
    pub fn omega(&self) -> &Mat {
        &self.omega
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.omega.rows()
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.omega.cols()
    }

    /// The `j`-th analysis atom `w_j`.
    #[inline]
    pub fn atom(&self, j: usize) -> &[f64] {
        self.omega.row(j)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn grid_side(&self) -> Option<usize> {
        self.grid_side
    }

    /// Relabel provenance, e.g. after reloading a generated operator from
    /// disk alongside its metadata. Entries are untouched.
    pub fn with_provenance(
        mut self,
        family: Family,
        seed: Option<u64>,
        grid_side: Option<usize>,
    ) -> Self {
        self.family = family;
        self.seed = seed;
        self.grid_side = grid_side;
        self
    }

    /// Analysis representation `Ωx`.
    pub fn analyze(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.omega.matvec(x)
    }

    pub fn submatrix(&self, indices: &[usize]) -> Result<Mat> {
        self.omega.select_rows(indices)
    }
}

/// Cyclic horizontal and vertical one-sided derivatives on a
/// `grid_side × grid_side` image, rows scaled to unit norm.
pub fn make_dif(grid_side: usize) -> Result<AnalysisDictionary> {
    if grid_side < 2 {
        return Err(Error::InvalidArgument("grid_side must be >= 2"));
    }
    let s = grid_side;
    let d = s * s;
    let inv = 1.0 / libm::sqrt(2.0);
    let mut data = vec![0.0; 2 * d * d];
    // horizontal differences in row-major pixel order, then vertical
    for i in 0..s {
        for j in 0..s {
            let pix = i * s + j;
            let right = i * s + (j + 1) % s;
            data[pix * d + pix] += inv;
            data[pix * d + right] -= inv;
            let down = ((i + 1) % s) * s + j;
            let row = d + pix;
            data[row * d + pix] += inv;
            data[row * d + down] -= inv;
        }
    }
    Ok(AnalysisDictionary {
        omega: Mat::new(2 * d, d, data)?,
        family: Family::Dif,
        seed: None,
        grid_side: Some(s),
    })
}

/// Rows drawn i.i.d. standard normal, then normalized to unit norm.
pub fn make_rand(p: usize, d: usize, seed: u64) -> Result<AnalysisDictionary> {
    if d == 0 || p < d {
        return Err(Error::InvalidArgument("require p >= d >= 1"));
    }
    let mut rng = stream_rng(seed, 0);
    let mut data = Vec::with_capacity(p * d);
    for _ in 0..p {
        let mut row = standard_normal_vec(&mut rng, d);
        let nrm = norm2(&row);
        for v in row.iter_mut() {
            *v /= nrm;
        }
        data.extend_from_slice(&row);
    }
    Ok(AnalysisDictionary {
        omega: Mat::new(p, d, data)?,
        family: Family::Rand,
        seed: Some(seed),
        grid_side: None,
    })
}

/// `Ω_MIX = Ω_DIF · A` with `A` a Gaussian `d×d` matrix (redrawn until
/// invertible), rows renormalized to unit norm afterwards. The right
/// multiplication preserves the row dependency structure of `Ω_DIF`.
pub fn make_mix(grid_side: usize, seed: u64) -> Result<AnalysisDictionary> {
    let dif = make_dif(grid_side)?;
    let d = dif.d();
    // stream 1: distinct from the RAND constructor's stream for the same seed
    let mut rng = stream_rng(seed, 1);
    let a = loop {
        let cand = Mat::new(d, d, standard_normal_vec(&mut rng, d * d))?;
        if rank_of(&cand) == d {
            break cand;
        }
    };
    let mut omega = dif.omega().matmul(&a)?;
    for i in 0..omega.rows() {
        let nrm = norm2(omega.row(i));
        for v in omega.row_mut(i) {
            *v /= nrm;
        }
    }
    Ok(AnalysisDictionary {
        omega,
        family: Family::Mix,
        seed: Some(seed),
        grid_side: Some(grid_side),
    })
}

/// Validate a user-supplied operator: rows are renormalized to unit norm.
/// Returns the dictionary and the largest relative renormalization applied,
/// so callers can warn when it exceeds their tolerance.
pub fn from_matrix(mut omega: Mat) -> Result<(AnalysisDictionary, f64)> {
    if omega.rows() < omega.cols() {
        return Err(Error::InvalidInput(format!(
            "analysis dictionary must have p >= d, got {}x{}",
            omega.rows(),
            omega.cols()
        )));
    }
    let mut max_dev: f64 = 0.0;
    for i in 0..omega.rows() {
        let nrm = norm2(omega.row(i));
        if nrm == 0.0 {
            return Err(Error::InvalidInput(format!("row {i} is zero")));
        }
        max_dev = max_dev.max(libm::fabs(nrm - 1.0));
        for v in omega.row_mut(i) {
            *v /= nrm;
        }
    }
    Ok((
        AnalysisDictionary {
            omega,
            family: Family::Custom,
            seed: None,
            grid_side: None,
        },
        max_dev,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;
    use rand::Rng;

    #[test]
    fn dif_rows_have_two_entries_of_inv_sqrt2() {
        let dict = make_dif(3).unwrap();
        assert_eq!(dict.p(), 18);
        assert_eq!(dict.d(), 9);
        let inv = 1.0 / libm::sqrt(2.0);
        for j in 0..dict.p() {
            let row = dict.atom(j);
            let pos: Vec<f64> = row.iter().copied().filter(|v| *v > 0.0).collect();
            let neg: Vec<f64> = row.iter().copied().filter(|v| *v < 0.0).collect();
            assert_eq!(pos.len(), 1);
            assert_eq!(neg.len(), 1);
            assert!((pos[0] - inv).abs() < 1e-15);
            assert!((neg[0] + inv).abs() < 1e-15);
        }
    }

    #[test]
    fn constructed_rows_are_unit_norm() {
        for dict in [
            make_dif(3).unwrap(),
            make_rand(18, 9, 42).unwrap(),
            make_mix(3, 42).unwrap(),
        ] {
            for j in 0..dict.p() {
                assert!((norm2(dict.atom(j)) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rand_is_deterministic_per_seed() {
        let a = make_rand(18, 9, 5).unwrap();
        let b = make_rand(18, 9, 5).unwrap();
        let c = make_rand(18, 9, 6).unwrap();
        assert_eq!(a.omega().data(), b.omega().data());
        assert_ne!(a.omega().data(), c.omega().data());
    }

    #[test]
    fn square_rand_has_full_rank() {
        let dict = make_rand(9, 9, 3).unwrap();
        assert_eq!(rank_of(dict.omega()), 9);
    }

    #[test]
    fn dif_full_operator_spans_the_space() {
        let dict = make_dif(3).unwrap();
        // every cyclic difference annihilates the constant vector, so rank is d - 1
        assert_eq!(rank_of(dict.omega()), 8);
    }

    #[test]
    fn grid_side_two_has_negation_partners() {
        // on a 2-wide grid each horizontal difference pairs with its negation
        let dict = make_dif(2).unwrap();
        let mut found = false;
        for a in 0..dict.p() {
            for b in (a + 1)..dict.p() {
                let s = dot(dict.atom(a), dict.atom(b));
                if (s + 1.0).abs() < 1e-12 {
                    found = true;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn mix_preserves_row_dependency_ranks() {
        let dif = make_dif(3).unwrap();
        let mix = make_mix(3, 11).unwrap();
        let mut rng = stream_rng(99, 0);
        for _ in 0..100 {
            let size = rng.random_range(1..=9usize);
            let idx = crate::rng::shuffled_indices(&mut rng, 18)[..size].to_vec();
            let ra = rank_of(&dif.submatrix(&idx).unwrap());
            let rb = rank_of(&mix.submatrix(&idx).unwrap());
            assert_eq!(ra, rb);
        }
    }

    #[test]
    fn custom_rejects_zero_row_and_wide_matrices() {
        let zero = Mat::new(2, 2, alloc::vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(from_matrix(zero), Err(Error::InvalidInput(_))));
        let wide = Mat::new(1, 2, alloc::vec![1.0, 0.0]).unwrap();
        assert!(matches!(from_matrix(wide), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn custom_reports_renormalization() {
        let m = Mat::new(2, 2, alloc::vec![2.0, 0.0, 0.0, 1.0]).unwrap();
        let (dict, dev) = from_matrix(m).unwrap();
        assert!((dev - 1.0).abs() < 1e-15);
        assert!((norm2(dict.atom(0)) - 1.0).abs() < 1e-15);
    }
}
