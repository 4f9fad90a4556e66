use crate::error::{Error, Result};
use crate::gwa::GwaInstance;
use crate::linalg::Matrix;
use crate::module::MatrixModule;
use crate::ring::CoefScalar;

/// Descent coefficient `c_k = (φ^{-k} z)(μ)`, the scalar with
/// `x · y^k v = c_k y^{k-1} v`.
pub fn descent_coefficient(inst: &GwaInstance, weight: CoefScalar, k: i64) -> CoefScalar {
    inst.z().eval(inst.phi().shift_weight(weight, -k))
}

/// The quotient of the Verma module of highest weight `μ` by `y^D v`, with
/// basis `v, yv, ..., y^{D-1} v`.
///
/// Requires `z(μ) = 0`, since `yx v = 0` must equal `z v`, and `c_D = 0` so
/// that `y^D v` spans a submodule.
pub fn verma_quotient(inst: &GwaInstance, weight: CoefScalar, dim: usize) -> Result<MatrixModule> {
    let ring = inst.ring();
    let c0 = descent_coefficient(inst, weight, 0);
    if !c0.is_zero() {
        return Err(Error::NotHighestWeight(format!("{weight} (z(μ) = {c0})")));
    }
    let cd = descent_coefficient(inst, weight, dim as i64);
    if !cd.is_zero() {
        return Err(Error::TruncationNotStable {
            dim,
            coefficient: cd.to_string(),
        });
    }
    let weights: Vec<CoefScalar> = (0..dim as i64)
        .map(|k| inst.phi().shift_weight(weight, -k))
        .collect();
    let h = Matrix::diagonal(ring, &weights);
    let mut x = Matrix::zeros(ring, dim, dim);
    let mut y = Matrix::zeros(ring, dim, dim);
    for k in 1..dim {
        x[(k - 1, k)] = descent_coefficient(inst, weight, k as i64);
        y[(k, k - 1)] = ring.one();
    }
    MatrixModule::new(inst, h, x, y)
}

/// All `D` in `1..=max_dim` for which the Verma quotient at `μ` exists.
pub fn stable_dimensions(inst: &GwaInstance, weight: CoefScalar, max_dim: usize) -> Vec<usize> {
    if !descent_coefficient(inst, weight, 0).is_zero() {
        return Vec::new();
    }
    (1..=max_dim)
        .filter(|&d| descent_coefficient(inst, weight, d as i64).is_zero())
        .collect()
}
