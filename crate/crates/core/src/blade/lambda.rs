//! The canonical isomorphism between skew-adjoint maps and degree-2
//! multivectors: λ(A) = ½ Σ_a A(e_a) ∧ e^a, its inverse, and the Clifford
//! image γ(A) = q(λ(A)).
//!
//! In blade coordinates λ(A) = Σ_{c<b} M_cb e_c∧e_b with M = A·B⁻¹, which is
//! antisymmetric precisely because A is skew-adjoint.

use nalgebra::DMatrix;

use super::multivector::MultiVector;
use super::system::System;
use crate::error::{Error, Result};
use crate::matfun::SkewAdjointMap;

/// λ(A) over the core generators of A's system.
pub fn lambda_of(a: &SkewAdjointMap) -> MultiVector {
    lambda_of_block(a.system(), a.system().core_indices(), a.matrix())
}

/// λ of a skew-adjoint block acting on the span of `indices` (a subset of
/// core generators whose pairing block must be invertible), expressed in the
/// ambient system.
pub fn lambda_of_block(system: &System, indices: &[usize], m: &DMatrix<f64>) -> MultiVector {
    let k = indices.len();
    assert_eq!(m.nrows(), k, "block size must match index count");
    let b = DMatrix::from_fn(k, k, |i, j| system.pairing(indices[i], indices[j]));
    let b_inv = b
        .lu()
        .try_inverse()
        .expect("pairing block must be invertible for lambda");
    let coords = m * b_inv;
    let mut out = MultiVector::zero(system);
    for c in 0..k {
        for bb in (c + 1)..k {
            // antisymmetrize to wash out rounding in M
            let w = 0.5 * (coords[(c, bb)] - coords[(bb, c)]);
            let (i, j) = (indices[c], indices[bb]);
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            let sign = if i < j { 1.0 } else { -1.0 };
            out.add_term((1 << lo) | (1 << hi), sign * w);
        }
    }
    out.pruned()
}

/// Inverse of [`lambda_of`]: recover the unique skew-adjoint map with the
/// given degree-2 image.
pub fn lambda_inv(lambda2: &MultiVector) -> Result<SkewAdjointMap> {
    let system = lambda2.system();
    if !lambda2.is_homogeneous(2) {
        return Err(Error::domain(
            "lambda inverse needs a homogeneous degree-2 multivector",
        ));
    }
    let core = system.core_indices();
    let k = core.len();
    let pos: std::collections::HashMap<usize, usize> =
        core.iter().enumerate().map(|(p, &a)| (a, p)).collect();
    let mut coords = DMatrix::zeros(k, k);
    for (mask, coeff) in lambda2.terms() {
        let i = mask.trailing_zeros() as usize;
        let j = (31 - mask.leading_zeros()) as usize;
        let (pi, pj) = match (pos.get(&i), pos.get(&j)) {
            (Some(&pi), Some(&pj)) => (pi, pj),
            _ => {
                return Err(Error::domain(
                    "lambda inverse needs a multivector supported on core generators",
                ))
            }
        };
        coords[(pi, pj)] = coeff;
        coords[(pj, pi)] = -coeff;
    }
    let b = DMatrix::from_fn(k, k, |i, j| system.pairing(core[i], core[j]));
    SkewAdjointMap::new(system, coords * b)
}

/// γ(A) = q(λ(A)); generates the action of A by graded commutators.
pub fn gamma_of(a: &SkewAdjointMap) -> MultiVector {
    lambda_of(a).quantize()
}

/// The parameter coupling term −Σ_a e_a ∧ φ^a ∈ V∧E of the doubling
/// construction, for a linear map φ: V → E given as an |E| × |V| matrix in
/// primal coordinates (φ^a = φ(e^a) with e^a the dual basis).
pub fn extension_pairing_form(system: &System, phi: &DMatrix<f64>) -> Result<MultiVector> {
    let core = system.core_indices();
    let ext = system.ext_indices();
    if phi.ncols() != core.len() || phi.nrows() != ext.len() {
        return Err(Error::structural(format!(
            "φ must be {}x{} (extension x core)",
            ext.len(),
            core.len()
        )));
    }
    let mut out = MultiVector::zero(system);
    for (apos, &a) in core.iter().enumerate() {
        let dual = system.dual_vector(a);
        // φ^a = φ applied to the dual vector e^a
        for (epos, &eidx) in ext.iter().enumerate() {
            let mut coeff = 0.0;
            for (jpos, &j) in core.iter().enumerate() {
                coeff += phi[(epos, jpos)] * dual[j];
            }
            if coeff != 0.0 {
                // a < eidx always (extension indices come after core ones)
                out.add_term((1 << a) | (1 << eidx), -coeff);
            }
        }
        let _ = apos;
    }
    Ok(out.pruned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blade::system::GeneratorSystem;
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn rotation_block_lambda() {
        // A = [[0,−θ],[θ,0]], B = I → λ(A) = −θ e₁∧e₂
        let sys = GeneratorSystem::euclidean(2);
        let theta = 0.8;
        let a = SkewAdjointMap::new(&sys, dmatrix![0.0, -theta; theta, 0.0]).unwrap();
        let l = lambda_of(&a);
        assert!((l.coeff(0b11) + theta).abs() < 1e-15);
        assert_eq!(l.term_count(), 1);
        // and back
        let back = lambda_inv(&l).unwrap();
        assert!((back.matrix() - a.matrix()).norm() < 1e-14);
    }

    #[test]
    fn lambda_of_zero() {
        let sys = GeneratorSystem::euclidean(3);
        assert!(lambda_of(&SkewAdjointMap::zero(&sys)).is_zero());
    }

    #[test]
    fn roundtrip_random_nonorthogonal() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let b = dmatrix![
            1.0, 0.3, 0.0, 0.0;
            0.3, 2.0, -0.2, 0.0;
            0.0, -0.2, 1.5, 0.4;
            0.0, 0.0, 0.4, 1.0
        ];
        let sys = GeneratorSystem::from_bilinear(b.clone()).unwrap();
        for _ in 0..100 {
            // A = S·B with S skew-symmetric is skew-adjoint wrt B
            let mut s = DMatrix::<f64>::zeros(4, 4);
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let v: f64 = rng.random_range(-1.5..1.5);
                    s[(i, j)] = v;
                    s[(j, i)] = -v;
                }
            }
            let a = SkewAdjointMap::new(&sys, s * &b).unwrap();
            let rt = lambda_inv(&lambda_of(&a)).unwrap();
            assert!((rt.matrix() - a.matrix()).norm() < 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn lambda_inv_rejects_wrong_grade() {
        let sys = GeneratorSystem::euclidean(2);
        let x = MultiVector::one(&sys);
        assert!(lambda_inv(&x).is_err());
    }

    #[test]
    fn gamma_is_a_lie_homomorphism() {
        // γ([A,B]) = [γ(A), γ(B)] under the Clifford commutator.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let sys = GeneratorSystem::euclidean(4);
        for _ in 0..10 {
            let mut skew = || {
                let mut m = DMatrix::<f64>::zeros(4, 4);
                for i in 0..4 {
                    for j in (i + 1)..4 {
                        let v: f64 = rng.random_range(-1.0..1.0);
                        m[(i, j)] = v;
                        m[(j, i)] = -v;
                    }
                }
                m
            };
            let (ma, mb) = (skew(), skew());
            let comm_mat = &ma * &mb - &mb * &ma;
            let ga = gamma_of(&SkewAdjointMap::new(&sys, ma).unwrap());
            let gb = gamma_of(&SkewAdjointMap::new(&sys, mb).unwrap());
            let lhs = gamma_of(&SkewAdjointMap::new(&sys, comm_mat).unwrap());
            let rhs = &ga.clifford_product(&gb).unwrap() - &gb.clifford_product(&ga).unwrap();
            assert!((&lhs - &rhs).coeff_norm() < 1e-12);
        }
    }

    #[test]
    fn gamma_commutator_generates_action() {
        // [γ(A), v] = A(v) in the Clifford algebra.
        let sys = GeneratorSystem::euclidean(3);
        let a = SkewAdjointMap::new(
            &sys,
            dmatrix![
                0.0, -1.1, 0.5;
                1.1, 0.0, 0.7;
                -0.5, -0.7, 0.0
            ],
        )
        .unwrap();
        let g = gamma_of(&a);
        for b in 0..3 {
            let v = MultiVector::generator(&sys, b);
            let comm = &g.clifford_product(&v).unwrap() - &v.clifford_product(&g).unwrap();
            let av = MultiVector::vector(
                &sys,
                &(a.matrix() * dvector![0.0, 0.0, 0.0].map_with_location(|i, _, _| {
                    if i == b { 1.0 } else { 0.0 }
                })),
            )
            .unwrap();
            assert!((&comm - &av).coeff_norm() < 1e-13);
        }
    }
}
