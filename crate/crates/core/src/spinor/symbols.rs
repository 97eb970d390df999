//! Closed-form symbol expressions for Clifford exponentials and group
//! lifts, with the sign resolved on the exp(γ(A)) branch:
//!
//!   q⁻¹(exp γ(A)) = det^{1/2}(cosh(A/2)) · exp∧(2λ(tanh(A/2)))
//!   q⁻¹(exp γ(A)) = Pf(2 sinh(A/2)) · exp(ι_{½λ(coth(A/2))}) dVol
//!
//! and their sign-ambiguous generalizations to arbitrary (lifted)
//! orthogonal maps C with det(C±I) ≠ 0.

use nalgebra::{DMatrix, DVector};

use crate::blade::{lambda_of_block, MultiVector, System};
use crate::error::{Error, Result};
use crate::matfun::{self, series, AnalyticFunctionId, SkewAdjointMap};

/// The oriented unit-volume blade of the pairing: f₁∧…∧f_n for an oriented
/// orthonormal frame, i.e. det(P)·e₁∧…∧e_n = (det B)^{-1/2}·e₁∧…∧e_n.
pub fn volume_form(sys: &System) -> Result<MultiVector> {
    let frame = sys.orthonormal_frame()?;
    let det_p = frame.lu().determinant();
    let n = sys.generator_count();
    let top = ((1u64 << n) - 1) as u32;
    Ok(MultiVector::from_terms(sys, [(top, det_p)]))
}

/// Symbol of exp(γ(A)) through the tangent form:
/// det^{1/2}(cosh(A/2)) exp∧(2λ(tanh(A/2))), with the analytic sign.
pub fn symbol_formula_i_exp(a: &SkewAdjointMap) -> Result<MultiVector> {
    let sys = a.system().clone();
    matfun::check_guard(AnalyticFunctionId::TanhHalf, a.matrix())?;
    let cosh = series::cosh_half_series(a.matrix())?;
    let det = cosh.lu().determinant();
    if det <= 0.0 {
        return Err(Error::domain(
            "det cosh(A/2) is not positive; spectrum too close to the odd lattice",
        ));
    }
    let tanh = matfun::eval_matrix_function(AnalyticFunctionId::TanhHalf, a)?;
    let form = lambda_of_block(&sys, sys.core_indices(), &tanh).scale(2.0);
    Ok(form.exp_exterior()?.scale(det.sqrt()))
}

/// Symbol of a lift of an orthogonal C with det(C+I) ≠ 0, up to a global
/// sign: |det((C+I)/2)|^{1/2} exp∧(2λ((C−I)(C+I)⁻¹)).
pub fn symbol_formula_i_general(sys: &System, c: &DMatrix<f64>) -> Result<MultiVector> {
    let n = sys.core_dim();
    let eye = DMatrix::<f64>::identity(n, n);
    if matfun::eigen::sigma_min(&(c + &eye)) <= matfun::RESOLVENT_FLOOR {
        return Err(Error::domain("C + I is numerically singular"));
    }
    let w = (c - &eye) * series::inverse(&(c + &eye), "C + I")?;
    let w = SkewAdjointMap::new(sys, w)?;
    let det = ((c + &eye) * 0.5).lu().determinant();
    let form = lambda_of_block(sys, sys.core_indices(), w.matrix()).scale(2.0);
    Ok(form.exp_exterior()?.scale(det.abs().sqrt()))
}

/// Symbol of exp(γ(A)) through the volume form (even definite V):
/// Pf(2 sinh(A/2)) · exp(ι_{½λ(coth(A/2))}) dVol, with the analytic sign.
pub fn symbol_formula_ii_exp(a: &SkewAdjointMap) -> Result<MultiVector> {
    let sys = a.system().clone();
    let two_sinh = series::two_sinh_half_series(a.matrix())?;
    let pf = matfun::pfaffian_sqrt_det(&SkewAdjointMap::new(&sys, two_sinh)?)?;
    let coth = matfun::eval_matrix_function(AnalyticFunctionId::CothHalf, a)?;
    let form = lambda_of_block(&sys, sys.core_indices(), &coth).scale(0.5);
    let dvol = volume_form(&sys)?;
    Ok(dvol.contract_multi(&form.exp_exterior()?)?.scale(pf))
}

/// Symbol of a Pin lift of an orthogonal C with det(C−I) ≠ 0, up to a
/// global sign: |det(I−C⁻¹)|^{1/2} exp(ι_{½λ((C+I)(C−I)⁻¹)}) dVol.
pub fn symbol_formula_ii_general(sys: &System, c: &DMatrix<f64>) -> Result<MultiVector> {
    let n = sys.core_dim();
    let eye = DMatrix::<f64>::identity(n, n);
    if matfun::eigen::sigma_min(&(c - &eye)) <= matfun::RESOLVENT_FLOOR {
        return Err(Error::domain("C − I is numerically singular"));
    }
    let c_inv = series::inverse(c, "C")?;
    let w = (c + &eye) * series::inverse(&(c - &eye), "C − I")?;
    let w = SkewAdjointMap::new(sys, w)?;
    let det = (&eye - c_inv).lu().determinant();
    let form = lambda_of_block(sys, sys.core_indices(), w.matrix()).scale(0.5);
    let dvol = volume_form(sys)?;
    Ok(dvol
        .contract_multi(&form.exp_exterior()?)?
        .scale(det.abs().sqrt()))
}

/// Hyperplane reflection negating u: x ↦ x − 2 B(u,x)/Q(u) · u.
pub fn reflection_matrix(sys: &System, u: &DVector<f64>) -> Result<DMatrix<f64>> {
    let b = matfun::core_pairing(sys);
    let q = (u.transpose() * &b * u)[(0, 0)];
    if q.abs() < 1e-12 {
        return Err(Error::domain("cannot reflect through an isotropic vector"));
    }
    let n = sys.core_dim();
    let bu = &b * u;
    Ok(DMatrix::identity(n, n) - u * bu.transpose() * (2.0 / q))
}

/// Pin lift of a product of reflections R_{u_k}∘…∘R_{u_1}: the Clifford
/// product û_k·…·û_1 of the vectors normalized to û² = 1 (definite Q only).
pub fn pin_lift_from_reflections(sys: &System, vectors: &[DVector<f64>]) -> Result<MultiVector> {
    let b = matfun::core_pairing(sys);
    let mut lift = MultiVector::one(sys);
    // R_{u_k}∘…∘R_{u_1} lifts to û_k·…·û_1: later reflections multiply from
    // the left.
    for u in vectors {
        let q = (u.transpose() * &b * u)[(0, 0)];
        if q <= 1e-12 {
            return Err(Error::domain(
                "Pin lift construction needs positive-norm reflection vectors",
            ));
        }
        let normalized = MultiVector::vector(sys, &(u * (2.0 / q).sqrt()))?;
        lift = normalized.clifford_product(&lift)?;
    }
    Ok(lift)
}
