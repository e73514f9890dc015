//! Differentiable maps with optional analytic gradients.
//!
//! Equality-constrained sets carry a map `h : ℝᵏ → ℝᵏ⁻ᵐ` whose zero set is the
//! constraint; image sets carry a map `g : ℝᵈ → ℝᵏ` whose image is the set.
//! Either kind may provide an analytic Jacobian; when it does not, central
//! finite differences with step `h_fd = 1e-6 · (1 + ‖x‖)` are used.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// A differentiable map between Euclidean spaces, with an optional analytic
/// Jacobian oracle. Implementations must be safe to call from multiple
/// threads.
pub trait DifferentiableMap: Send + Sync {
    fn domain_dim(&self) -> usize;
    fn codomain_dim(&self) -> usize;
    fn eval(&self, x: &DVector<f64>) -> DVector<f64>;

    /// Analytic Jacobian at `x` (`codomain_dim × domain_dim`), if available.
    fn jacobian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        let _ = x;
        None
    }
}

/// Finite-difference step for derivative estimates at `x`.
pub fn fd_step(x: &DVector<f64>) -> f64 {
    1e-6 * (1.0 + x.norm())
}

/// Jacobian of `map` at `x`: the analytic oracle when present, otherwise
/// columnwise central finite differences.
pub fn jacobian_or_fd(map: &dyn DifferentiableMap, x: &DVector<f64>) -> Result<DMatrix<f64>> {
    if x.len() != map.domain_dim() {
        return Err(Error::DimMismatch(format!(
            "map expects domain dimension {}, got {}",
            map.domain_dim(),
            x.len()
        )));
    }
    if let Some(j) = map.jacobian(x) {
        if j.shape() != (map.codomain_dim(), map.domain_dim()) {
            return Err(Error::DimMismatch(format!(
                "jacobian oracle returned {}x{}, expected {}x{}",
                j.nrows(),
                j.ncols(),
                map.codomain_dim(),
                map.domain_dim()
            )));
        }
        return Ok(j);
    }
    let h = fd_step(x);
    let mut j = DMatrix::zeros(map.codomain_dim(), map.domain_dim());
    for i in 0..map.domain_dim() {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        let col = (map.eval(&xp) - map.eval(&xm)) / (2.0 * h);
        j.set_column(i, &col);
    }
    Ok(j)
}

/// Directional derivative of `f` at `theta` in the direction `u`,
/// `∂f/∂u = (∂f/∂θ)·u`.
///
/// With an analytic Jacobian this is a matrix–vector product; otherwise a
/// single central difference along `u` is taken, with the step scaled down by
/// `max(1, ‖u‖)` so the evaluation points stay near `theta`.
pub fn directional_derivative(
    f: &dyn DifferentiableMap,
    theta: &DVector<f64>,
    u: &DVector<f64>,
) -> Result<DVector<f64>> {
    if theta.len() != f.domain_dim() || u.len() != f.domain_dim() {
        return Err(Error::DimMismatch(format!(
            "map expects domain dimension {}, got point {} and direction {}",
            f.domain_dim(),
            theta.len(),
            u.len()
        )));
    }
    if !u.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(j) = f.jacobian(theta) {
        return Ok(j * u);
    }
    let t = fd_step(theta) / 1.0f64.max(u.norm());
    let fp = f.eval(&(theta + u * t));
    let fm = f.eval(&(theta - u * t));
    Ok((fp - fm) / (2.0 * t))
}

/// Affine map `x ↦ M x + c`, usable both as an equality constraint
/// (`h(θ) = Mθ − c₀` via a negated offset) and as a parameterization of an
/// affine subspace.
#[derive(Clone, Debug)]
pub struct AffineMap {
    m: DMatrix<f64>,
    c: DVector<f64>,
}

impl AffineMap {
    pub fn new(m: DMatrix<f64>, c: DVector<f64>) -> Result<Self> {
        if m.nrows() != c.len() {
            return Err(Error::DimMismatch(format!(
                "matrix has {} rows but offset has length {}",
                m.nrows(),
                c.len()
            )));
        }
        if !m.iter().all(|x| x.is_finite()) || !c.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { m, c })
    }

    pub fn linear(m: DMatrix<f64>) -> Result<Self> {
        let c = DVector::zeros(m.nrows());
        Self::new(m, c)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.c
    }
}

impl DifferentiableMap for AffineMap {
    fn domain_dim(&self) -> usize {
        self.m.ncols()
    }

    fn codomain_dim(&self) -> usize {
        self.m.nrows()
    }

    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.m * x + &self.c
    }

    fn jacobian(&self, _x: &DVector<f64>) -> Option<DMatrix<f64>> {
        Some(self.m.clone())
    }
}

/// Map defined by closures, for ad-hoc constraints and parameterizations.
#[derive(Clone)]
pub struct FnMap {
    domain: usize,
    codomain: usize,
    f: Arc<dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync>,
    jac: Option<Arc<dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync>>,
}

impl FnMap {
    pub fn new(
        domain: usize,
        codomain: usize,
        f: impl Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            codomain,
            f: Arc::new(f),
            jac: None,
        }
    }

    pub fn with_jacobian(
        mut self,
        jac: impl Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        self.jac = Some(Arc::new(jac));
        self
    }
}

impl DifferentiableMap for FnMap {
    fn domain_dim(&self) -> usize {
        self.domain
    }

    fn codomain_dim(&self) -> usize {
        self.codomain
    }

    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.f)(x)
    }

    fn jacobian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        self.jac.as_ref().map(|j| j(x))
    }
}

impl std::fmt::Debug for FnMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnMap")
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .field("analytic_jacobian", &self.jac.is_some())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dvector;

    #[test]
    fn identity_map_directional_derivative_is_the_direction() {
        let id = AffineMap::linear(DMatrix::identity(3, 3)).unwrap();
        let u = dvector![0.3, -1.0, 2.0];
        let d = directional_derivative(&id, &dvector![1.0, 0.0, 0.0], &u).unwrap();
        assert_abs_diff_eq!(d, u, epsilon = 1e-12);
    }

    #[test]
    fn finite_differences_match_analytic_jacobian_on_a_quadratic() {
        // f(x) = (x₀², x₀x₁), analytic J = [[2x₀, 0], [x₁, x₀]].
        let f_no_jac = FnMap::new(2, 2, |x: &DVector<f64>| dvector![x[0] * x[0], x[0] * x[1]]);
        let f_jac = FnMap::new(2, 2, |x: &DVector<f64>| dvector![x[0] * x[0], x[0] * x[1]])
            .with_jacobian(|x| DMatrix::from_row_slice(2, 2, &[2.0 * x[0], 0.0, x[1], x[0]]));
        let x = dvector![0.7, -1.3];
        let jf = jacobian_or_fd(&f_no_jac, &x).unwrap();
        let ja = jacobian_or_fd(&f_jac, &x).unwrap();
        assert_abs_diff_eq!(jf, ja, epsilon = 1e-8);

        let u = dvector![2.0, 0.5];
        let dd_fd = directional_derivative(&f_no_jac, &x, &u).unwrap();
        let dd_an = directional_derivative(&f_jac, &x, &u).unwrap();
        assert_abs_diff_eq!(dd_fd, dd_an, epsilon = 1e-7);
    }

    #[test]
    fn sphere_constraint_is_flat_along_tangents() {
        // h(θ) = θᵀθ − 1 is constant on the sphere, so its directional
        // derivative along any u ⊥ θ vanishes.
        let h = FnMap::new(3, 1, |x: &DVector<f64>| dvector![x.dot(x) - 1.0]);
        let theta = dvector![1.0, 0.0, 0.0];
        let u = dvector![0.0, 1.0, -2.0];
        let d = directional_derivative(&h, &theta, &u).unwrap();
        assert!(d.norm() < 1e-9);
    }
}
