//! Generalized Schur complement test for block positive semidefiniteness.
//!
//! The block matrix
//!
//! ```text
//! M = [ A   B ]
//!     [ Bᵀ  C ]
//! ```
//!
//! with A, C symmetric is positive semidefinite if and only if all three of
//! the following hold, with no nonsingularity assumption on C:
//!
//! 1. `C ⪰ 0`,
//! 2. `A − B C† Bᵀ ⪰ 0`,
//! 3. `(I − C C†) Bᵀ = 0`, i.e. `col Bᵀ ⊂ col C`.
//!
//! [`schur_conditions`] evaluates the three conditions independently and
//! [`block_psd_direct`] is the eigenvalue oracle on the assembled matrix, so
//! the equivalence itself is checkable rather than assumed. The forward
//! implication `M ⪰ 0 ⇒ condition 2` holds on its own; the full equivalence
//! needs all three.

use nalgebra::DMatrix;

use crate::matlin::{self, Mat, RankedSvd, SymMat, Tolerances};
use crate::{Error, Result};

/// Symmetric block matrix `[[A, B], [Bᵀ, C]]` described by its blocks.
#[derive(Clone, Debug)]
pub struct BlockSym {
    a: SymMat,
    b: Mat,
    c: SymMat,
}

impl BlockSym {
    /// Checks block compatibility: `A` is p×p, `B` is p×q, `C` is q×q.
    pub fn new(a: SymMat, b: Mat, c: SymMat) -> Result<Self> {
        if b.nrows() != a.dim() || b.ncols() != c.dim() {
            return Err(Error::DimMismatch(format!(
                "blocks A ({p}x{p}), B ({}x{}), C ({q}x{q}) are incompatible",
                b.nrows(),
                b.ncols(),
                p = a.dim(),
                q = c.dim()
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> &SymMat {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn c(&self) -> &SymMat {
        &self.c
    }

    /// Assembles the full `(p+q)×(p+q)` symmetric matrix.
    pub fn assemble(&self) -> SymMat {
        let p = self.a.dim();
        let q = self.c.dim();
        let mut m = DMatrix::zeros(p + q, p + q);
        m.view_mut((0, 0), (p, p)).copy_from(self.a.as_dmatrix());
        m.view_mut((0, p), (p, q)).copy_from(self.b.as_dmatrix());
        m.view_mut((p, 0), (q, p))
            .copy_from(&self.b.as_dmatrix().transpose());
        m.view_mut((p, p), (q, q)).copy_from(self.c.as_dmatrix());
        SymMat::symmetrized(m).expect("blocks are finite")
    }
}

/// Outcome of the three Schur conditions, evaluated independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchurConditions {
    /// `C ⪰ 0`.
    pub c_psd: bool,
    /// `A − B C† Bᵀ ⪰ 0`.
    pub complement_psd: bool,
    /// `(I − C C†) Bᵀ = 0`, equivalently `col Bᵀ ⊂ col C`.
    pub range_ok: bool,
}

impl SchurConditions {
    pub fn all(&self) -> bool {
        self.c_psd && self.complement_psd && self.range_ok
    }
}

/// Evaluates the three block-PSD conditions.
///
/// The range condition is tested through the projector residual
/// `‖(I − C C†) Bᵀ‖ ≤ incl_tol · (1 + ‖B‖)`, matching the stated form of the
/// condition rather than a rank comparison.
pub fn schur_conditions(m: &BlockSym, tol: &Tolerances) -> SchurConditions {
    let c_psd = m.c.min_eigenvalue() >= -tol.psd_tol;
    let complement = schur_complement(m, tol);
    let complement_psd = complement.min_eigenvalue() >= -tol.psd_tol;
    let b_t = Mat::new(m.b.transpose()).expect("finite by construction");
    let range_ok =
        matlin::colspace_included(&b_t, &m.c.to_mat(), tol).expect("row counts match");
    SchurConditions {
        c_psd,
        complement_psd,
        range_ok,
    }
}

/// Eigenvalue oracle: assembles the block matrix and tests
/// `λ_min ≥ −psd_tol` directly.
pub fn block_psd_direct(m: &BlockSym, tol: &Tolerances) -> bool {
    m.assemble().min_eigenvalue() >= -tol.psd_tol
}

/// The generalized Schur complement `A − B C† Bᵀ`, symmetrized.
pub fn schur_complement(m: &BlockSym, tol: &Tolerances) -> SymMat {
    let c_pinv = RankedSvd::new(m.c.as_dmatrix(), tol.rank_rel_tol).pinv();
    let s = m.a.as_dmatrix() - m.b.as_dmatrix() * c_pinv * m.b.as_dmatrix().transpose();
    SymMat::symmetrized(s).expect("finite by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn block(a: &[f64], p: usize, b: &[f64], q: usize, c: &[f64]) -> BlockSym {
        BlockSym::new(
            SymMat::from_rows(p, a, &t()).unwrap(),
            Mat::from_rows(p, q, b).unwrap(),
            SymMat::from_rows(q, c, &t()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_blocks_pass_everything() {
        let m = block(&[1., 0., 0., 1.], 2, &[0., 0., 0., 0.], 2, &[1., 0., 0., 1.]);
        let cond = schur_conditions(&m, &t());
        assert!(cond.c_psd && cond.complement_psd && cond.range_ok);
        assert!(block_psd_direct(&m, &t()));
    }

    #[test]
    fn zero_a_with_identity_off_diagonal_fails_complement_only() {
        // A=0, B=I, C=I: complement = −I.
        let m = block(&[0., 0., 0., 0.], 2, &[1., 0., 0., 1.], 2, &[1., 0., 0., 1.]);
        let cond = schur_conditions(&m, &t());
        assert!(cond.c_psd);
        assert!(!cond.complement_psd);
        assert!(cond.range_ok);
        assert!(!block_psd_direct(&m, &t()));
    }

    #[test]
    fn range_condition_fails_for_singular_c() {
        // C = e₁e₁ᵀ is singular; B = I has col Bᵀ = ℝ² ⊄ col C.
        let m = block(&[1., 0., 0., 1.], 2, &[1., 0., 0., 1.], 2, &[1., 0., 0., 0.]);
        let cond = schur_conditions(&m, &t());
        assert!(!cond.range_ok);
        assert!(!block_psd_direct(&m, &t()));
    }

    #[test]
    fn direct_oracle_rejects_semidefinite_a_with_identity_coupling() {
        // A=diag(1,0), B=I₂, C=I₂: complement = diag(0,−1).
        let m = block(&[1., 0., 0., 0.], 2, &[1., 0., 0., 1.], 2, &[1., 0., 0., 1.]);
        assert!(!block_psd_direct(&m, &t()));
        assert!(!schur_conditions(&m, &t()).all());
    }

    #[test]
    fn gram_split_is_psd() {
        // GᵀG is PSD by construction for any G; split it into blocks.
        let g = DMatrix::from_row_slice(
            5,
            4,
            &[
                0.3, -1.2, 0.7, 0.4, 1.1, 0.2, -0.5, 0.9, -0.8, 0.6, 1.3, -0.2, 0.5, -0.4, 0.1,
                1.0, -0.9, 0.8, 0.2, -0.6,
            ],
        );
        let gram = g.transpose() * &g;
        let a = SymMat::symmetrized(gram.view((0, 0), (2, 2)).into_owned()).unwrap();
        let b = Mat::new(gram.view((0, 2), (2, 2)).into_owned()).unwrap();
        let c = SymMat::symmetrized(gram.view((2, 2), (2, 2)).into_owned()).unwrap();
        let m = BlockSym::new(a, b, c).unwrap();
        assert!(block_psd_direct(&m, &t()));
        assert!(schur_conditions(&m, &t()).all());
    }

    #[test]
    fn complement_cancellation_and_identity_cases() {
        // A=I, B=0 → complement = I.
        let m = block(&[1., 0., 0., 1.], 2, &[0., 0., 0., 0.], 2, &[1., 0., 0., 1.]);
        assert_abs_diff_eq!(
            schur_complement(&m, &t()).as_dmatrix(),
            Mat::identity(2).as_dmatrix(),
            epsilon = 1e-14
        );

        // A=B=C=I → complement = 0.
        let m = block(&[1., 0., 0., 1.], 2, &[1., 0., 0., 1.], 2, &[1., 0., 0., 1.]);
        assert_abs_diff_eq!(
            schur_complement(&m, &t()).as_dmatrix(),
            Mat::zeros(2, 2).as_dmatrix(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn complement_hand_checked_on_rank_one_c() {
        // A = diag(1,0), B = [[1,1],[0,0]], C = ones(2):
        // C† = ones/4, B C† Bᵀ = diag(1,0), so the complement is 0.
        let m = block(&[1., 0., 0., 0.], 2, &[1., 1., 0., 0.], 2, &[1., 1., 1., 1.]);
        assert_abs_diff_eq!(
            schur_complement(&m, &t()).as_dmatrix(),
            Mat::zeros(2, 2).as_dmatrix(),
            epsilon = 1e-14
        );
        assert!(schur_conditions(&m, &t()).all());
        assert!(block_psd_direct(&m, &t()));
    }

    #[test]
    fn incompatible_blocks_are_rejected() {
        let a = SymMat::identity(2);
        let b = Mat::zeros(3, 2);
        let c = SymMat::identity(2);
        assert!(BlockSym::new(a, b, c).is_err());
    }
}
