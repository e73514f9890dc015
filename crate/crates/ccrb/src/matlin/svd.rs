//! Rank-revealing SVD shared by the kernel operations.
//!
//! Every rank decision in this crate flows through [`RankedSvd`]: the SVD is
//! computed once per matrix, the numerical rank is fixed by the relative
//! cutoff `rank_rel_tol`, and the pseudoinverse, column-space projector and
//! null-space basis are all derived from the same factorization so their
//! answers cannot disagree about the rank.

use nalgebra::{DMatrix, DVector};

pub(crate) struct RankedSvd {
    nrows: usize,
    ncols: usize,
    /// Thin left factor, `nrows × p` with `p = min(nrows, ncols)`.
    u: DMatrix<f64>,
    /// Singular values in descending order, length `p`.
    sigma: DVector<f64>,
    /// Thin right factor transposed, `p × ncols`.
    v_t: DMatrix<f64>,
    rank: usize,
}

impl RankedSvd {
    pub(crate) fn new(m: &DMatrix<f64>, rank_rel_tol: f64) -> Self {
        let (nrows, ncols) = m.shape();
        let p = nrows.min(ncols);
        if p == 0 {
            return Self {
                nrows,
                ncols,
                u: DMatrix::zeros(nrows, 0),
                sigma: DVector::zeros(0),
                v_t: DMatrix::zeros(0, ncols),
                rank: 0,
            };
        }
        let svd = m.clone().svd(true, true);
        let u = svd.u.expect("svd requested u");
        let v_t = svd.v_t.expect("svd requested v_t");
        let sigma = svd.singular_values;
        let sigma_max = sigma.max();
        let cutoff = rank_rel_tol * sigma_max;
        let rank = if sigma_max == 0.0 {
            0
        } else {
            sigma.iter().filter(|&&s| s > cutoff).count()
        };
        Self {
            nrows,
            ncols,
            u,
            sigma,
            v_t,
            rank,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    pub(crate) fn singular_values(&self) -> &DVector<f64> {
        &self.sigma
    }

    /// Thin left factor (`nrows × min(nrows, ncols)`).
    pub(crate) fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    /// Thin right factor transposed (`min(nrows, ncols) × ncols`).
    pub(crate) fn v_t(&self) -> &DMatrix<f64> {
        &self.v_t
    }

    /// Moore–Penrose inverse `V_r Σ_r⁻¹ U_rᵀ` (zero matrix maps to zero).
    pub(crate) fn pinv(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.rank {
            let vi = self.v_t.row(i).transpose();
            let ui = self.u.column(i);
            let s_inv = 1.0 / self.sigma[i];
            // out += s_inv * vi uiᵀ
            out.ger(s_inv, &vi, &ui, 1.0);
        }
        out
    }

    /// Orthogonal projector onto the column space, `U_r U_rᵀ`.
    pub(crate) fn col_projector(&self) -> DMatrix<f64> {
        let ur = self.u.columns(0, self.rank);
        &ur * ur.transpose()
    }

    /// Orthonormal basis of the column space (`nrows × rank`).
    pub(crate) fn col_basis(&self) -> DMatrix<f64> {
        self.u.columns(0, self.rank).into_owned()
    }

    /// Orthonormal basis of the null space (`ncols × (ncols − rank)`).
    ///
    /// The thin SVD only carries `min(nrows, ncols)` right singular vectors,
    /// so the basis is recovered from the complement of the row-space
    /// projector rather than from trailing rows of `Vᵀ`.
    pub(crate) fn null_basis(&self) -> DMatrix<f64> {
        let n = self.ncols;
        let null_dim = n - self.rank;
        if null_dim == 0 {
            return DMatrix::zeros(n, 0);
        }
        if self.rank == 0 {
            return DMatrix::identity(n, n);
        }
        let vr_t = self.v_t.rows(0, self.rank);
        let complement = DMatrix::identity(n, n) - vr_t.transpose() * vr_t;
        // Singular values of the complement are 1 (null directions) and 0,
        // so a fixed 0.5 cutoff is unambiguous.
        let svd = complement.svd(true, false);
        let u = svd.u.expect("svd requested u");
        let mut idx: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > 0.5)
            .collect();
        idx.truncate(null_dim);
        debug_assert_eq!(idx.len(), null_dim);
        let mut out = DMatrix::zeros(n, null_dim);
        for (j, &i) in idx.iter().enumerate() {
            out.set_column(j, &u.column(i));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = DMatrix::<f64>::zeros(3, 2);
        let svd = RankedSvd::new(&m, 1e-10);
        assert_eq!(svd.rank(), 0);
        assert_eq!(svd.pinv(), DMatrix::zeros(2, 3));
        assert_eq!(svd.null_basis().ncols(), 2);
    }

    #[test]
    fn empty_shapes_are_handled() {
        let m = DMatrix::<f64>::zeros(3, 0);
        let svd = RankedSvd::new(&m, 1e-10);
        assert_eq!(svd.rank(), 0);
        assert_eq!(svd.pinv().shape(), (0, 3));
        assert_eq!(svd.col_projector().shape(), (3, 3));

        let m = DMatrix::<f64>::zeros(0, 4);
        let svd = RankedSvd::new(&m, 1e-10);
        assert_eq!(svd.null_basis().shape(), (4, 4));
    }

    #[test]
    fn wide_matrix_null_space_has_full_dimension() {
        // 2×5 of rank 2: null space must be 3-dimensional even though the
        // thin SVD only carries 2 right singular vectors.
        let m = DMatrix::from_row_slice(2, 5, &[1., 0., 1., 2., 0., 0., 1., 1., 0., 3.]);
        let svd = RankedSvd::new(&m, 1e-10);
        assert_eq!(svd.rank(), 2);
        let n = svd.null_basis();
        assert_eq!(n.shape(), (5, 3));
        assert!((&m * &n).norm() < 1e-12);
        assert!((n.transpose() * &n - DMatrix::identity(3, 3)).norm() < 1e-12);
    }
}
