//! The doubled-space spinor representation and the Gauss factorization of
//! Clifford exponentials.
//!
//! W = V ⊕ V* carries the split pairing Q_W(v⊕α) = 2α(v); Cl(W) acts on ∧V
//! with V wedging and V* contracting. Left Clifford multiplication of Cl(V)
//! on itself, transported to ∧V, is the restriction of that action along the
//! isometry κ(v, w) = (v+w, ½(v−w)♭).

pub mod factor;
pub mod symbols;

use nalgebra::{DMatrix, DVector};

use crate::blade::operator::{operator_of, OperatorMatrix};
use crate::blade::{GeneratorSystem, MultiVector, System};
use crate::error::{Error, Result};

/// V together with W = V ⊕ V*.
///
/// W generators: 0..n are the V generators, n..2n are the abstract duals ε^a
/// with pairing B_W(e_a, ε^b) = δ_ab and both blocks isotropic.
#[derive(Debug, Clone)]
pub struct DoubledSpace {
    base: System,
    doubled: System,
}

impl DoubledSpace {
    pub fn new(base: &System) -> Result<Self> {
        if base.has_extension() {
            return Err(Error::structural(
                "doubled space needs a core-only base system",
            ));
        }
        let n = base.generator_count();
        let mut bw = DMatrix::zeros(2 * n, 2 * n);
        for a in 0..n {
            bw[(a, n + a)] = 1.0;
            bw[(n + a, a)] = 1.0;
        }
        let doubled = GeneratorSystem::from_bilinear(bw)?;
        Ok(DoubledSpace {
            base: base.clone(),
            doubled,
        })
    }

    pub fn base(&self) -> &System {
        &self.base
    }

    pub fn doubled(&self) -> &System {
        &self.doubled
    }

    pub fn base_dim(&self) -> usize {
        self.base.generator_count()
    }

    /// π of a W-vector w = v ⊕ α on an exterior element: v∧x + ι_α x
    /// (plain dual-pairing contraction, no ½).
    pub fn pi_vector_apply(&self, w: &DVector<f64>, x: &MultiVector) -> Result<MultiVector> {
        let n = self.base_dim();
        if w.len() != 2 * n {
            return Err(Error::structural("W-vector has wrong dimension"));
        }
        self.base.check_same(x.system())?;
        let v = MultiVector::vector(&self.base, &w.rows(0, n).into_owned())?;
        let alpha = w.rows(n, n).into_owned();
        Ok(&v.wedge(x)? + &x.contract_dual(&alpha)?)
    }

    /// π of a single W-generator.
    fn pi_generator_apply(&self, a: usize, x: &MultiVector) -> Result<MultiVector> {
        let n = self.base_dim();
        if a < n {
            MultiVector::generator(&self.base, a).wedge(x)
        } else {
            let mut alpha = DVector::zeros(n);
            alpha[a - n] = 1.0;
            x.contract_dual(&alpha)
        }
    }

    /// π of a Cl(W) element (Clifford coordinates over the doubled system)
    /// applied to an exterior element of ∧V.
    pub fn pi_apply(&self, cl_w: &MultiVector, x: &MultiVector) -> Result<MultiVector> {
        self.doubled.check_same(cl_w.system())?;
        self.base.check_same(x.system())?;
        let mut out = MultiVector::zero(&self.base);
        for (mask, c) in cl_w.terms() {
            let mut acc = x.clone();
            // monomial e_{j1}…e_{jk} acts with the rightmost factor first
            let mut rest = mask;
            while rest != 0 {
                let j = 31 - rest.leading_zeros();
                rest &= !(1 << j);
                acc = self.pi_generator_apply(j as usize, &acc)?;
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc.scale(c);
        }
        Ok(out.pruned())
    }

    /// π as a dense operator on ∧V.
    pub fn pi_action(&self, w: &DVector<f64>) -> Result<OperatorMatrix> {
        operator_of(&self.base, |x| self.pi_vector_apply(w, x))
    }

    pub fn pi_operator(&self, cl_w: &MultiVector) -> Result<OperatorMatrix> {
        operator_of(&self.base, |x| self.pi_apply(cl_w, x))
    }

    /// The image of a V-generator under κ(·, 0): e_a + ½ Σ_b B_ba ε^b ∈ W.
    pub fn kappa_generator(&self, a: usize) -> MultiVector {
        let n = self.base_dim();
        let mut out = MultiVector::generator(&self.doubled, a);
        for b in 0..n {
            let coeff = 0.5 * self.base.pairing(b, a);
            if coeff != 0.0 {
                out.add_term(1 << (n + b), coeff);
            }
        }
        out
    }

    /// Embed a Cl(V) element into Cl(W) along κ (monomial by monomial).
    pub fn kappa_embed(&self, x: &MultiVector) -> Result<MultiVector> {
        self.base.check_same(x.system())?;
        let mut out = MultiVector::zero(&self.doubled);
        for (mask, c) in x.terms() {
            let mut acc = MultiVector::one(&self.doubled);
            let mut rest = mask;
            // multiply the generator images in increasing order
            while rest != 0 {
                let j = rest.trailing_zeros();
                rest &= rest - 1;
                acc = acc.clifford_product(&self.kappa_generator(j as usize))?;
            }
            out = &out + &acc.scale(c);
        }
        Ok(out.pruned())
    }

    /// The block matrix of ι: SO(V) → SO(W) in the (V, V*) coordinates:
    /// [[½(C+I), (C−I)B⁻¹], [¼B(C−I), ½B(C+I)B⁻¹]].
    pub fn iota_so(&self, c: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.base_dim();
        let b = crate::matfun::core_pairing(&self.base);
        let b_inv = b.clone().try_inverse().expect("core pairing invertible");
        let eye = DMatrix::<f64>::identity(n, n);
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        out.view_mut((0, 0), (n, n)).copy_from(&((c + &eye) * 0.5));
        out.view_mut((0, n), (n, n)).copy_from(&((c - &eye) * &b_inv));
        out.view_mut((n, 0), (n, n)).copy_from(&(&b * (c - &eye) * 0.25));
        out.view_mut((n, n), (n, n))
            .copy_from(&(&b * (c + &eye) * &b_inv * 0.5));
        out
    }
}

/// Left Clifford multiplication ρ(x) transported to ∧V: on generators
/// ρ(v) = v∧(·) + ½ι_v(·); for a Clifford element, monomials compose.
pub fn rho_apply(x: &MultiVector, alpha: &MultiVector) -> Result<MultiVector> {
    x.system().check_same(alpha.system())?;
    let mut out = MultiVector::zero(x.system());
    for (mask, c) in x.terms() {
        let mut acc = alpha.clone();
        let mut rest = mask;
        while rest != 0 {
            let j = 31 - rest.leading_zeros();
            rest &= !(1 << j);
            acc = acc.rho_generator(j as usize);
            if acc.is_zero() {
                break;
            }
        }
        out = &out + &acc.scale(c);
    }
    Ok(out.pruned())
}

/// ρ(x) as a dense operator on ∧V.
pub fn rho_embed(x: &MultiVector) -> Result<OperatorMatrix> {
    operator_of(x.system(), |alpha| rho_apply(x, alpha))
}

/// The algebra-automorphism extension of an invertible matrix R on V to ∧V,
/// as a dense operator (blades map to wedges of column images).
pub fn gl_extension_operator(system: &System, r: &DMatrix<f64>) -> Result<OperatorMatrix> {
    let n = system.generator_count();
    if r.nrows() != n || r.ncols() != n {
        return Err(Error::structural("GL extension: matrix has wrong shape"));
    }
    let columns: Vec<MultiVector> = (0..n)
        .map(|j| MultiVector::vector(system, &r.column(j).into_owned()))
        .collect::<Result<_>>()?;
    operator_of(system, |x| {
        let mut out = MultiVector::zero(system);
        for (mask, c) in x.terms() {
            let mut acc = MultiVector::scalar(system, c);
            let mut rest = mask;
            while rest != 0 {
                let j = rest.trailing_zeros();
                rest &= rest - 1;
                acc = acc.wedge(&columns[j as usize])?;
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blade::GeneratorSystem;
    use nalgebra::dvector;
    use rand::{Rng, SeedableRng};

    #[test]
    fn pi_trivial_actions() {
        let base = GeneratorSystem::euclidean(2);
        let d = DoubledSpace::new(&base).unwrap();
        let one = MultiVector::one(&base);
        // π(v⊕0).1 = v
        let w = dvector![1.0, 0.0, 0.0, 0.0];
        let r = d.pi_vector_apply(&w, &one).unwrap();
        assert_eq!(r.coeff(0b01), 1.0);
        // π(0⊕α).1 = 0
        let w = dvector![0.0, 0.0, 1.0, 0.5];
        assert!(d.pi_vector_apply(&w, &one).unwrap().is_zero());
    }

    #[test]
    fn pi_squares_to_half_pairing() {
        // π(w)² = α(v)·Id since ½Q_W(v⊕α) = α(v).
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let base = GeneratorSystem::euclidean(3);
        let d = DoubledSpace::new(&base).unwrap();
        for _ in 0..10 {
            let w = DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0));
            let op = d.pi_action(&w).unwrap();
            let sq = op.compose(&op).unwrap();
            let alpha_v: f64 = (0..3).map(|a| w[a] * w[3 + a]).sum();
            let expect = OperatorMatrix::identity(&base).unwrap().scale(alpha_v);
            assert!(sq.max_abs_diff(&expect) < 1e-12);
        }
    }

    #[test]
    fn pi_is_algebra_homomorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let base = GeneratorSystem::euclidean(2);
        let d = DoubledSpace::new(&base).unwrap();
        let w_sys = d.doubled().clone();
        for _ in 0..10 {
            let mut rand_mv = |density: f64| {
                let mut terms = Vec::new();
                for m in 0..16u32 {
                    if rng.random::<f64>() < density {
                        terms.push((m, rng.random_range(-1.0..1.0)));
                    }
                }
                MultiVector::from_terms(&w_sys, terms)
            };
            let x = rand_mv(0.4);
            let y = rand_mv(0.4);
            let prod = x.clifford_product(&y).unwrap();
            let lhs = d.pi_operator(&prod).unwrap();
            let rhs = d
                .pi_operator(&x)
                .unwrap()
                .compose(&d.pi_operator(&y).unwrap())
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }
    }

    #[test]
    fn rho_trivial_and_square() {
        let sys = GeneratorSystem::euclidean(3);
        // ρ(1) = Id
        let rho_one = rho_embed(&MultiVector::one(&sys)).unwrap();
        assert!(
            rho_one.max_abs_diff(&OperatorMatrix::identity(&sys).unwrap()) < 1e-15
        );
        // ρ(v)² = ½Q(v)·Id
        let v = MultiVector::vector(&sys, &dvector![0.7, -0.3, 1.1]).unwrap();
        let op = rho_embed(&v).unwrap();
        let sq = op.compose(&op).unwrap();
        let q = 0.7f64.powi(2) + 0.3f64.powi(2) + 1.1f64.powi(2);
        let expect = OperatorMatrix::identity(&sys).unwrap().scale(0.5 * q);
        assert!(sq.max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn rho_of_one_gives_symbol() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        let sys = GeneratorSystem::from_bilinear(nalgebra::dmatrix![
            1.0, 0.2, 0.0;
            0.2, 1.5, -0.4;
            0.0, -0.4, 2.0
        ])
        .unwrap();
        for _ in 0..20 {
            let mut terms = Vec::new();
            for m in 0..8u32 {
                if rng.random::<f64>() < 0.6 {
                    terms.push((m, rng.random_range(-1.0..1.0)));
                }
            }
            let x = MultiVector::from_terms(&sys, terms);
            let via_rho = rho_apply(&x, &MultiVector::one(&sys)).unwrap();
            let via_symbol = x.symbol();
            assert!((&via_rho - &via_symbol).coeff_norm() < 1e-12);
        }
    }

    #[test]
    fn rho_is_an_algebra_homomorphism() {
        // ρ(x·y) = ρ(x)∘ρ(y) as operators.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(51);
        let sys = GeneratorSystem::from_bilinear(nalgebra::dmatrix![
            1.0, -0.2, 0.0;
            -0.2, 1.4, 0.3;
            0.0, 0.3, 0.9
        ])
        .unwrap();
        for _ in 0..10 {
            let mut rand_mv = |density: f64| {
                let mut terms = Vec::new();
                for m in 0..8u32 {
                    if rng.random::<f64>() < density {
                        terms.push((m, rng.random_range(-1.0..1.0)));
                    }
                }
                MultiVector::from_terms(&sys, terms)
            };
            let x = rand_mv(0.6);
            let y = rand_mv(0.6);
            let lhs = rho_embed(&x.clifford_product(&y).unwrap()).unwrap();
            let rhs = rho_embed(&x).unwrap().compose(&rho_embed(&y).unwrap()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn rho_is_restriction_of_pi_along_kappa() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let base = GeneratorSystem::from_bilinear(nalgebra::dmatrix![
            1.0, 0.3;
            0.3, 2.0
        ])
        .unwrap();
        let d = DoubledSpace::new(&base).unwrap();
        for _ in 0..10 {
            let mut terms = Vec::new();
            for m in 0..4u32 {
                if rng.random::<f64>() < 0.7 {
                    terms.push((m, rng.random_range(-1.0..1.0)));
                }
            }
            let x = MultiVector::from_terms(&base, terms);
            let via_kappa = d.pi_operator(&d.kappa_embed(&x).unwrap()).unwrap();
            let via_rho = rho_embed(&x).unwrap();
            assert!(via_kappa.max_abs_diff(&via_rho) < 1e-12);
        }
    }

    #[test]
    fn kappa_is_isometry_on_generators() {
        // Q_W(κ(v,0)) = Q_V(v): κ(e_a,0)·κ(e_b,0) + κ(e_b,0)·κ(e_a,0) = B_ab.
        let base = GeneratorSystem::from_bilinear(nalgebra::dmatrix![
            2.0, 0.5;
            0.5, 1.0
        ])
        .unwrap();
        let d = DoubledSpace::new(&base).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let ka = d.kappa_generator(a);
                let kb = d.kappa_generator(b);
                let anti =
                    &ka.clifford_product(&kb).unwrap() + &kb.clifford_product(&ka).unwrap();
                assert!(
                    (anti.scalar_part() - base.pairing(a, b)).abs() < 1e-13,
                    "B_W(κe_{a}, κe_{b}) != B_V"
                );
                assert!(anti.max_grade() == Some(0));
            }
        }
    }

    #[test]
    fn triangular_subgroup_lifts_act_by_wedge_and_contraction() {
        // The lift of [[I,D],[0,I]] ∈ SO(W) acts by wedging with exp∧(λ(D));
        // the lift of [[I,0],[E,I]] acts by contraction with exp∧(λ(E)).
        // Both are checked against exp_Cl(γ_W(X)) through π.
        use crate::blade::{gamma_of, lambda_of_block, operator_of};
        use crate::matfun::SkewAdjointMap;
        let base = GeneratorSystem::euclidean(2);
        let d = DoubledSpace::new(&base).unwrap();
        let w_sys = d.doubled().clone();
        let weight = 0.8;
        let skew = nalgebra::dmatrix![0.0, weight; -weight, 0.0];
        let form = lambda_of_block(&base, &[0, 1], &skew);

        // upper-triangular generator X = [[0, D], [0, 0]] ∈ o(W)
        let mut upper = nalgebra::DMatrix::<f64>::zeros(4, 4);
        upper.view_mut((0, 2), (2, 2)).copy_from(&skew);
        let x_upper = SkewAdjointMap::new(&w_sys, upper).unwrap();
        let lift = gamma_of(&x_upper).exp_clifford(1e-15).unwrap();
        let via_pi = d.pi_operator(&lift).unwrap();
        let exp_form = form.exp_exterior().unwrap();
        let wedge_op = operator_of(&base, |x| exp_form.wedge(x)).unwrap();
        assert!(via_pi.max_abs_diff(&wedge_op) < 1e-12);

        // lower-triangular generator X = [[0, 0], [E, 0]] ∈ o(W)
        let mut lower = nalgebra::DMatrix::<f64>::zeros(4, 4);
        lower.view_mut((2, 0), (2, 2)).copy_from(&skew);
        let x_lower = SkewAdjointMap::new(&w_sys, lower).unwrap();
        let lift = gamma_of(&x_lower).exp_clifford(1e-15).unwrap();
        let via_pi = d.pi_operator(&lift).unwrap();
        let contract_op = operator_of(&base, |x| x.contract_multi(&exp_form)).unwrap();
        assert!(via_pi.max_abs_diff(&contract_op) < 1e-12);
    }

    #[test]
    fn gl_extension_of_identity_and_scaling() {
        let sys = GeneratorSystem::euclidean(3);
        let id = gl_extension_operator(&sys, &DMatrix::identity(3, 3)).unwrap();
        assert!(id.max_abs_diff(&OperatorMatrix::identity(&sys).unwrap()) < 1e-15);
        // R = 2I multiplies grade-k blades by 2^k
        let op = gl_extension_operator(&sys, &(DMatrix::identity(3, 3) * 2.0)).unwrap();
        let x = MultiVector::blade(&sys, &[0, 2], 1.0);
        let y = op.apply(&x).unwrap();
        assert!((y.coeff(0b101) - 4.0).abs() < 1e-14);
    }
}
