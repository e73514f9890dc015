//! Per-variant tangent-span basis builders.
//!
//! Each builder returns a matrix with orthonormal columns spanning the
//! tangent-cone span at the given point, expressed in the vectorized ambient
//! space. Matrix-valued parameters use column-major vectorization.

use nalgebra::{DMatrix, DVector};

use crate::matlin::{self, Mat, RankedSvd, Tolerances};
use crate::tangent::maps::{jacobian_or_fd, DifferentiableMap};
use crate::{Error, Result};

pub(super) fn unvec(theta: &DVector<f64>, p: usize, q: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(p, q, theta.as_slice())
}

pub(super) fn vec_mat(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Sphere: orthonormal basis of the hyperplane `{u : θᵀu = 0}`.
pub(super) fn sphere_span(theta: &DVector<f64>, tol: &Tolerances) -> DMatrix<f64> {
    let row = Mat::new(theta.transpose()).expect("finite checked upstream");
    matlin::null_space(&row, tol).into_dmatrix()
}

/// Stiefel-type manifolds `{X : XᵀX = I}` (including the orthogonal and
/// special orthogonal groups): the tangent space `{U : XᵀU + UᵀX = 0}` is the
/// null space of the Jacobian of the q(q+1)/2 independent entries of
/// `XᵀX − I`.
pub(super) fn stiefel_span(
    theta: &DVector<f64>,
    p: usize,
    q: usize,
    tol: &Tolerances,
) -> DMatrix<f64> {
    let x = unvec(theta, p, q);
    let n_constraints = q * (q + 1) / 2;
    let mut jac = DMatrix::zeros(n_constraints, p * q);
    let mut row = 0;
    for i in 0..q {
        for j in i..q {
            // d(xᵢᵀxⱼ) = xⱼᵀ dxᵢ + xᵢᵀ dxⱼ
            for a in 0..p {
                jac[(row, i * p + a)] += x[(a, j)];
                jac[(row, j * p + a)] += x[(a, i)];
            }
            row += 1;
        }
    }
    let jac = Mat::new(jac).expect("finite by construction");
    matlin::null_space(&jac, tol).into_dmatrix()
}

/// Fixed-rank matrices: basis of the three-block tangent form
/// `U_r (·) V_rᵀ + U_r (·) V_⊥ᵀ + U_⊥ (·) V_rᵀ`, dimension `r(p+q−r)`.
pub(super) fn fixed_rank_span(
    theta: &DVector<f64>,
    p: usize,
    q: usize,
    r: usize,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let x = unvec(theta, p, q);
    let svd = RankedSvd::new(&x, tol.rank_rel_tol);
    let sigma = svd.singular_values();
    if r > 0 && (sigma.len() < r || sigma[r - 1] < 10.0 * tol.rank_rel_tol * sigma[0]) {
        return Err(Error::RankTolAmbiguous);
    }
    let u_r = svd.u().columns(0, r).into_owned();
    let v_r = svd.v_t().rows(0, r).transpose();
    let u_perp = orthogonal_complement(&u_r, p, tol);
    let v_perp = orthogonal_complement(&v_r, q, tol);

    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(r * (p + q - r));
    for i in 0..r {
        for j in 0..r {
            cols.push(vec_mat(&(u_r.column(i) * v_r.column(j).transpose())));
        }
    }
    for i in 0..r {
        for j in 0..q - r {
            cols.push(vec_mat(&(u_r.column(i) * v_perp.column(j).transpose())));
        }
    }
    for i in 0..p - r {
        for j in 0..r {
            cols.push(vec_mat(&(u_perp.column(i) * v_r.column(j).transpose())));
        }
    }
    if cols.is_empty() {
        return Ok(DMatrix::zeros(p * q, 0));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Fixed-rank positive-semidefinite matrices: symmetric middle-block form
/// with dimension `r(r+1)/2 + r(p−r)`.
pub(super) fn fixed_rank_psd_span(
    theta: &DVector<f64>,
    p: usize,
    r: usize,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let x = unvec(theta, p, p);
    let sym = (&x + x.transpose()) * 0.5;
    let eig = nalgebra::linalg::SymmetricEigen::new(sym);
    // Order eigenpairs by |λ| descending.
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .abs()
            .partial_cmp(&eig.eigenvalues[a].abs())
            .unwrap()
    });
    if r > 0 {
        let top = eig.eigenvalues[order[0]].abs();
        let rth = eig.eigenvalues[order[r - 1]].abs();
        if top == 0.0 || rth < 10.0 * tol.rank_rel_tol * top {
            return Err(Error::RankTolAmbiguous);
        }
    }
    let mut q_r = DMatrix::zeros(p, r);
    for (j, &i) in order.iter().take(r).enumerate() {
        q_r.set_column(j, &eig.eigenvectors.column(i));
    }
    let q_perp = orthogonal_complement(&q_r, p, tol);

    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(r * (r + 1) / 2 + r * (p - r));
    for i in 0..r {
        for j in i..r {
            let qi = q_r.column(i);
            let qj = q_r.column(j);
            let m = if i == j {
                qi * qj.transpose()
            } else {
                (qi * qj.transpose() + qj * qi.transpose()) * inv_sqrt2
            };
            cols.push(vec_mat(&m));
        }
    }
    for a in 0..p - r {
        for b in 0..r {
            let qa = q_perp.column(a);
            let qb = q_r.column(b);
            let m = (qa * qb.transpose() + qb * qa.transpose()) * inv_sqrt2;
            cols.push(vec_mat(&m));
        }
    }
    if cols.is_empty() {
        return Ok(DMatrix::zeros(p * p, 0));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Positive-definite matrices: the tangent space is all symmetric matrices,
/// dimension `p(p+1)/2`, independent of the base point.
pub(super) fn positive_definite_span(p: usize) -> DMatrix<f64> {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(p * (p + 1) / 2);
    for i in 0..p {
        for j in i..p {
            let mut m = DMatrix::zeros(p, p);
            if i == j {
                m[(i, i)] = 1.0;
            } else {
                m[(i, j)] = inv_sqrt2;
                m[(j, i)] = inv_sqrt2;
            }
            cols.push(vec_mat(&m));
        }
    }
    DMatrix::from_columns(&cols)
}

/// Equality-constrained manifold `{θ : h(θ) = 0}`: null space of `∂h/∂θ`.
pub(super) fn equality_span(
    map: &dyn DifferentiableMap,
    theta: &DVector<f64>,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let grad = Mat::new(jacobian_or_fd(map, theta)?)?;
    Ok(matlin::null_space(&grad, tol).into_dmatrix())
}

/// Image of a map `g`: orthonormalized column space of `∂g/∂ρ` at the given
/// preimage. Rank-deficient Jacobians yield a basis of the numerical column
/// space.
pub(super) fn transform_span(
    map: &dyn DifferentiableMap,
    rho: &DVector<f64>,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let jac = Mat::new(jacobian_or_fd(map, rho)?)?;
    Ok(matlin::col_basis(&jac, tol).into_dmatrix())
}

/// Orthonormal basis of the orthogonal complement of the columns of `b`
/// inside ℝⁿ.
fn orthogonal_complement(b: &DMatrix<f64>, n: usize, tol: &Tolerances) -> DMatrix<f64> {
    debug_assert_eq!(b.nrows(), n);
    let bt = Mat::new(b.transpose()).expect("finite by construction");
    matlin::null_space(&bt, tol).into_dmatrix()
}
