//! Bootstrap lock of the multivector-contraction ordering.
//!
//! The contraction of a blade composes single contractions in one of two
//! orders; the factorization identity
//!     q(ι_{S(A)} exp∧(λ(A))) = exp_Cl(γ(A))
//! at n = 2 is the unambiguous arbiter. The shipped convention (last wedge
//! factor contracts first) must validate and the reversed convention must
//! fail, locking the golden value ι_{e₁∧e₂}(e₁∧e₂) = -1.

use cdybe_core::blade::{gamma_of, lambda_of, GeneratorSystem, MultiVector};
use cdybe_core::matfun::SkewAdjointMap;
use cdybe_core::rmatrix::s_function;

/// Reversed-order contraction: ι_{v₁∧…∧v_k} = ι_{v_k}∘…∘ι_{v₁}
/// (first wedge factor contracts first).
fn contract_multi_reversed(x: &MultiVector, beta: &MultiVector) -> MultiVector {
    let mut out = MultiVector::zero(x.system());
    for (mask, c) in beta.terms() {
        let mut acc = x.clone();
        let mut rest = mask;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            acc = acc.contract_generator(j as usize);
            if acc.is_zero() {
                break;
            }
        }
        out = &out + &acc.scale(c);
    }
    out
}

#[test]
fn factorization_identity_selects_the_contraction_order() {
    let sys = GeneratorSystem::euclidean(2);
    let theta = 0.7;
    let a = SkewAdjointMap::new(&sys, nalgebra::dmatrix![0.0, -theta; theta, 0.0]).unwrap();
    let s = s_function(&a).unwrap();
    let exp_lambda = lambda_of(&a).exp_exterior().unwrap();
    let rhs = gamma_of(&a).exp_clifford(1e-15).unwrap();

    let lhs_impl = exp_lambda.contract_multi(&s).unwrap().quantize();
    let impl_residual = (&lhs_impl - &rhs).coeff_norm();
    assert!(
        impl_residual < 1e-10,
        "shipped convention must validate the identity: residual {impl_residual}"
    );

    let lhs_rev = contract_multi_reversed(&exp_lambda, &s).quantize();
    let rev_residual = (&lhs_rev - &rhs).coeff_norm();
    assert!(
        rev_residual > 1e-2,
        "reversed convention must fail the identity: residual {rev_residual}"
    );
}

#[test]
fn locked_golden_contraction_value() {
    // With the validated ordering, ι_{e₁∧e₂}(e₁∧e₂) = -1 for B = I.
    let sys = GeneratorSystem::euclidean(2);
    let e12 = MultiVector::blade(&sys, &[0, 1], 1.0);
    let v = e12.contract_multi(&e12).unwrap();
    assert_eq!(v.scalar_part(), -1.0);
    assert_eq!(v.term_count(), 1);
    // and the star-operator golden that follows from it
    let star = e12.star(&e12).unwrap();
    assert_eq!(star.scalar_part(), 1.0);
}
