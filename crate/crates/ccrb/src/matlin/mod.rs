//! Dense-matrix kernel with explicit tolerances.
//!
//! Everything downstream — tangent spans, bound formulas, Schur tests — is
//! exact linear algebra in the mathematics but inexact in floating point.
//! This module concentrates the numerical policy in one place:
//!
//! - numerical rank is decided by a relative singular-value cutoff
//!   ([`Tolerances::rank_rel_tol`]) and every consumer of a matrix's rank
//!   derives it from the same SVD;
//! - positive semidefiniteness allows eigenvalues down to `−psd_tol`;
//! - the Loewner comparison [`loewner_geq`] uses a slack scaled by the
//!   operand norms, since the underlying inequalities are exact but the
//!   computed eigenvalues are not;
//! - column-space inclusion [`colspace_included`] is a projector-residual
//!   test with threshold [`Tolerances::incl_tol`].

use nalgebra::DMatrix;

use crate::{Error, Result};

mod svd;
pub(crate) use svd::RankedSvd;

/// Numerical thresholds for rank, definiteness, symmetry and inclusion tests.
///
/// All fields must be strictly positive. The defaults sit a couple of orders
/// of magnitude above the double-precision SVD noise floor and can be
/// overridden per call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Singular values below `rank_rel_tol · σ_max` are treated as zero.
    pub rank_rel_tol: f64,
    /// Eigenvalues ≥ `−psd_tol` are accepted as nonnegative.
    pub psd_tol: f64,
    /// Maximum accepted asymmetry `max|M − Mᵀ|`, relative to `max(1, max|M|)`.
    pub sym_tol: f64,
    /// Residual-norm threshold for column-space inclusion.
    pub incl_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-10,
            psd_tol: 1e-9,
            sym_tol: 1e-10,
            incl_tol: 1e-8,
        }
    }
}

impl Tolerances {
    /// Checks that every threshold is strictly positive.
    pub fn validate(&self) -> Result<()> {
        let ok = self.rank_rel_tol > 0.0
            && self.psd_tol > 0.0
            && self.sym_tol > 0.0
            && self.incl_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::BadTolerance)
        }
    }
}

/// Dense real matrix with finite entries.
///
/// Construction rejects NaN and infinities; beyond that the type is a thin
/// wrapper over [`nalgebra::DMatrix`], to which it derefs for read access.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    inner: DMatrix<f64>,
}

impl Mat {
    /// Wraps a matrix, rejecting non-finite entries.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.iter().all(|x| x.is_finite()) {
            Ok(Self { inner: m })
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Builds a matrix from row-major data.
    pub fn from_rows(nrows: usize, ncols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::DimMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                nrows * ncols,
                nrows,
                ncols,
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(nrows, ncols, data))
    }

    /// Builds a single-column matrix from a slice.
    pub fn col_vector(data: &[f64]) -> Result<Self> {
        Self::from_rows(data.len(), 1, data)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(nrows, ncols),
        }
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.inner
    }
}

impl std::ops::Deref for Mat {
    type Target = DMatrix<f64>;
    fn deref(&self) -> &DMatrix<f64> {
        &self.inner
    }
}

impl From<SymMat> for Mat {
    fn from(s: SymMat) -> Self {
        Self { inner: s.inner }
    }
}

/// Symmetric real matrix, stored symmetrized.
///
/// [`SymMat::new`] accepts input whose asymmetry is within
/// [`Tolerances::sym_tol`] (relative to `max(1, max|M|)`) and stores
/// `(M + Mᵀ)/2`; anything worse is rejected rather than silently averaged.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMat {
    inner: DMatrix<f64>,
}

impl SymMat {
    /// Symmetrizes `m`, rejecting non-square, non-finite, or visibly
    /// asymmetric input.
    pub fn new(m: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = 1.0f64.max(m.amax());
        let asym = (&m - m.transpose()).amax();
        if asym > tol.sym_tol * scale {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self::symmetrized_unchecked(m))
    }

    /// Symmetrizes `m` without an asymmetry check, for matrices that are
    /// symmetric by construction up to rounding. Non-finite entries are still
    /// rejected.
    pub fn symmetrized(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self::symmetrized_unchecked(m))
    }

    fn symmetrized_unchecked(m: DMatrix<f64>) -> Self {
        let sym = (&m + m.transpose()) * 0.5;
        Self { inner: sym }
    }

    pub fn from_rows(n: usize, data: &[f64], tol: &Tolerances) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimMismatch(format!(
                "expected {} entries for a {0}x{0} matrix, got {1}",
                n,
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, n, data), tol)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: DMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.inner
    }

    /// View as a general [`Mat`] (cheap clone of the storage).
    pub fn to_mat(&self) -> Mat {
        Mat {
            inner: self.inner.clone(),
        }
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        min_eig(&self.inner)
    }

    /// Spectral norm (largest absolute eigenvalue).
    pub fn spectral_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        nalgebra::linalg::SymmetricEigen::new(self.inner.clone())
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs()))
    }
}

impl std::ops::Deref for SymMat {
    type Target = DMatrix<f64>;
    fn deref(&self) -> &DMatrix<f64> {
        &self.inner
    }
}

fn min_eig(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    nalgebra::linalg::SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, &l| acc.min(l))
}

/// Moore–Penrose pseudoinverse via SVD with the `rank_rel_tol` cutoff.
///
/// The zero matrix maps to the zero matrix, which is the Penrose-consistent
/// convention and avoids a special error path.
pub fn pinv(m: &Mat, tol: &Tolerances) -> Mat {
    Mat {
        inner: RankedSvd::new(m, tol.rank_rel_tol).pinv(),
    }
}

/// Symmetric positive-semidefinite square root.
///
/// Eigenvalues in `[−psd_tol, 0)` are clamped to zero; anything below
/// `−psd_tol` is rejected with [`Error::NotPsd`].
pub fn sym_sqrt(m: &SymMat, tol: &Tolerances) -> Result<SymMat> {
    if m.dim() == 0 {
        return Ok(SymMat::zeros(0));
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(m.inner.clone());
    let min = eig.eigenvalues.min();
    if min < -tol.psd_tol {
        return Err(Error::NotPsd(min));
    }
    let sqrt_vals = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let q = &eig.eigenvectors;
    let s = q * DMatrix::from_diagonal(&sqrt_vals) * q.transpose();
    SymMat::symmetrized(s)
}

/// Orthogonal projector onto the column space of `w`, equal to `W·W†`.
pub fn col_projector(w: &Mat, tol: &Tolerances) -> SymMat {
    let p = RankedSvd::new(w, tol.rank_rel_tol).col_projector();
    SymMat::symmetrized_unchecked(p)
}

/// Loewner comparison `A ⪰ B`, true iff the smallest eigenvalue of `A − B`
/// is at least `−psd_tol · (1 + ‖A‖ + ‖B‖)` (spectral norms).
pub fn loewner_geq(a: &SymMat, b: &SymMat, tol: &Tolerances) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!(
            "Loewner comparison needs equal dimensions, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    if a.dim() == 0 {
        return Ok(true);
    }
    let diff = &a.inner - &b.inner;
    let slack = tol.psd_tol * (1.0 + a.spectral_norm() + b.spectral_norm());
    Ok(min_eig(&diff) >= -slack)
}

/// Column-space inclusion `col B ⊂ col C`, tested as
/// `‖(I − C·C†)·B‖ ≤ incl_tol · (1 + ‖B‖)` (Frobenius norms).
pub fn colspace_included(b: &Mat, c: &Mat, tol: &Tolerances) -> Result<bool> {
    if b.nrows() != c.nrows() {
        return Err(Error::DimMismatch(format!(
            "column-space inclusion needs equal row counts, got {} and {}",
            b.nrows(),
            c.nrows()
        )));
    }
    if b.ncols() == 0 || b.nrows() == 0 {
        return Ok(true);
    }
    let proj = RankedSvd::new(c, tol.rank_rel_tol).col_projector();
    let residual = b.as_dmatrix() - proj * b.as_dmatrix();
    Ok(residual.norm() <= tol.incl_tol * (1.0 + b.norm()))
}

/// Orthonormal basis of the null space of `m` (columns), possibly empty.
pub fn null_space(m: &Mat, tol: &Tolerances) -> Mat {
    Mat {
        inner: RankedSvd::new(m, tol.rank_rel_tol).null_basis(),
    }
}

/// Numerical rank of `m` at the configured cutoff.
pub fn rank(m: &Mat, tol: &Tolerances) -> usize {
    RankedSvd::new(m, tol.rank_rel_tol).rank()
}

/// Orthonormal basis of the column space of `m`.
pub fn col_basis(m: &Mat, tol: &Tolerances) -> Mat {
    Mat {
        inner: RankedSvd::new(m, tol.rank_rel_tol).col_basis(),
    }
}
