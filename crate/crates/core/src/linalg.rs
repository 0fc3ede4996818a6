//! Dense linear-algebra kernels with explicit tolerances.
//!
//! Two independent routes to the same null-space projector are kept on
//! purpose: [`OrthoBasis`] accumulates an orthonormal basis by modified
//! Gram-Schmidt row insertion, while [`nullspace_projector`] goes through a
//! pivoted Householder QR of the transposed submatrix. The test suite pins
//! them against each other.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result, TOL_RANK};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("matrix dimensions must be >= 1"));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite"));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Build a matrix from a list of equal-length rows.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(Error::InvalidArgument("matrix dimensions must be >= 1"));
        }
        let ncols = rows[0].len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Mat::new(nrows, ncols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Keep only the rows listed in `indices` (in the given order).
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidArgument("row selection must be non-empty"));
        }
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            if i >= self.rows {
                return Err(Error::InvalidArgument("row index out of range"));
            }
            data.extend_from_slice(self.row(i));
        }
        Mat::new(indices.len(), self.cols, data)
    }

    /// `self * other`
    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a vector `v`.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| libm::fabs(a - b))
            .fold(0.0, f64::max)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Ordered set of mutually orthonormal vectors spanning a row subspace.
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl OrthoBasis {
    pub fn new(ambient_dim: usize) -> Self {
        OrthoBasis {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Residual of `w` against the current basis, with one
    /// re-orthogonalization pass for stability.
    fn residual(&self, w: &[f64]) -> Vec<f64> {
        let mut q: Vec<f64> = w.to_vec();
        for _ in 0..2 {
            for b in &self.vectors {
                let c = dot(b, &q);
                for (qi, bi) in q.iter_mut().zip(b) {
                    *qi -= c * bi;
                }
            }
        }
        q
    }

    /// Insert a new row by modified Gram-Schmidt. Returns `true` and grows
    /// the basis when the residual carries rank, leaves the basis unchanged
    /// otherwise.
    pub fn gs_insert(&mut self, w: &[f64]) -> Result<bool> {
        if w.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: w.len(),
            });
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("vector entries must be finite"));
        }
        if self.vectors.len() == self.ambient_dim {
            return Ok(false);
        }
        let wnorm = norm2(w);
        if wnorm == 0.0 {
            return Ok(false);
        }
        let q = self.residual(w);
        let qnorm = norm2(&q);
        if qnorm > TOL_RANK * wnorm {
            let inv = 1.0 / qnorm;
            self.vectors.push(q.iter().map(|v| v * inv).collect());
            Ok(true)
        } else {
            Ok(false)
        }
    }

    /// Squared norm of the component of `w` inside the span.
    pub fn span_component_sq(&self, w: &[f64]) -> f64 {
        self.vectors.iter().map(|b| dot(b, w) * dot(b, w)).sum()
    }

    /// Norm of the residual of `w` outside the span.
    pub fn residual_norm(&self, w: &[f64]) -> f64 {
        norm2(&self.residual(w))
    }

    /// Whether `w` lies inside the span at relative tolerance `tol`.
    pub fn contains(&self, w: &[f64], tol: f64) -> bool {
        let wnorm = norm2(w);
        wnorm == 0.0 || self.residual_norm(w) <= tol * wnorm
    }

    /// Project `y` onto the orthogonal complement of the span:
    /// `y - Σ_j (q_j·y) q_j`.
    pub fn project_complement(&self, y: &[f64]) -> Vec<f64> {
        let mut x = y.to_vec();
        for b in &self.vectors {
            let c = dot(b, &x);
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= c * bi;
            }
        }
        x
    }

    /// Assemble the projector `I - Σ_j q_j q_j^T` explicitly.
    pub fn complement_projector(&self) -> Mat {
        let d = self.ambient_dim;
        let mut p = Mat::identity(d);
        for b in &self.vectors {
            for i in 0..d {
                for j in 0..d {
                    let v = p.get(i, j) - b[i] * b[j];
                    p.set(i, j, v);
                }
            }
        }
        p
    }
}

/// Numerical rank of a matrix = number of rows accepted by `gs_insert`.
pub fn rank_of(m: &Mat) -> usize {
    let mut basis = OrthoBasis::new(m.cols());
    for i in 0..m.rows() {
        // rows are finite by construction
        let _ = basis.gs_insert(m.row(i));
    }
    basis.len()
}

/// Projector onto the null space of `omega_sub`: `P = I - Ω_Λ†Ω_Λ`.
///
/// Computed from an orthonormal basis of the row space obtained by a
/// column-pivoted Householder QR of `Ω_Λ^T`, deliberately not sharing code
/// with [`OrthoBasis`].
pub fn nullspace_projector(omega_sub: &Mat) -> Mat {
    let d = omega_sub.cols();
    let q = rowspace_basis_householder(omega_sub);
    let mut p = Mat::identity(d);
    for col in &q {
        for i in 0..d {
            for j in 0..d {
                let v = p.get(i, j) - col[i] * col[j];
                p.set(i, j, v);
            }
        }
    }
    p
}

/// Orthonormal basis of the row space of `m`, as columns in ambient
/// dimension `m.cols()`, via Householder QR with column pivoting.
pub fn rowspace_basis_householder(m: &Mat) -> Vec<Vec<f64>> {
    let d = m.cols();
    let n = m.rows();
    // a = m^T, stored column-major: a[j] is the j-th column (one row of m).
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| m.row(j).to_vec()).collect();
    let scale = a.iter().map(|c| norm2(c)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let tol = TOL_RANK * scale;
    let kmax = core::cmp::min(d, n);
    let mut reflectors: Vec<Vec<f64>> = Vec::new();
    for k in 0..kmax {
        // column pivot on remaining norms below row k
        let (mut piv, mut best) = (k, -1.0);
        #[allow(clippy::needless_range_loop)] // pivot search wants the index
        for j in k..n {
            let nrm = norm2(&a[j][k..]);
            if nrm > best {
                best = nrm;
                piv = j;
            }
        }
        if best <= tol {
            break;
        }
        a.swap(k, piv);
        // Householder vector annihilating a[k][k+1..]
        let alpha = if a[k][k] >= 0.0 { -best } else { best };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm = norm2(&v);
        if vnorm > 0.0 {
            for vi in v.iter_mut() {
                *vi /= vnorm;
            }
            // apply H = I - 2vv^T to the remaining columns
            for col in a.iter_mut().skip(k) {
                let tail = &mut col[k..];
                let c = 2.0 * dot(&v, tail);
                for (t, vi) in tail.iter_mut().zip(&v) {
                    *t -= c * vi;
                }
            }
        }
        reflectors.push(v);
    }
    let rank = reflectors.len();
    // Q_r = H_0 ... H_{rank-1} [I_r; 0]
    let mut q = Vec::with_capacity(rank);
    for j in 0..rank {
        let mut col = vec![0.0; d];
        col[j] = 1.0;
        for (k, v) in reflectors.iter().enumerate().rev() {
            let tail = &mut col[k..];
            let c = 2.0 * dot(v, tail);
            for (t, vi) in tail.iter_mut().zip(v) {
                *t -= c * vi;
            }
        }
        q.push(col);
    }
    q
}
