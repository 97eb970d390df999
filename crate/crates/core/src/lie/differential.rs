//! Lie algebra and Clifford differentials, realized on ∧g through the
//! pairing identification g ≅ g*.
//!
//! The Lie algebra differential is the odd derivation
//!   d = -½ Σ f^c_ab (e^a∧)(e^b∧) ∘ ι_{e_c},
//! equivalently d(v) = λ^g(v) on vectors. The Clifford differential is the
//! graded commutator δ = [q(Θ), ·]; its square vanishes because q(Θ)²
//! is a scalar.

use super::QuadraticLieAlgebra;
use crate::blade::multivector::MultiVector;
use crate::blade::operator::{operator_of, OperatorMatrix};
use crate::blade::System;
use crate::error::Result;

/// The Lie algebra differential on ∧(host), with the host's core carrying
/// the algebra structure (extension generators are annihilated).
pub struct LieDifferential {
    /// forms[c] = λ^g(e^c) = -½ Σ_ab f^c_ab e^a ∧ e^b, wedged against ι_{e_c}x.
    forms: Vec<MultiVector>,
    host: System,
}

impl LieDifferential {
    pub fn new(g: &QuadraticLieAlgebra, host: &System) -> Result<Self> {
        g.check_host(host)?;
        let n = g.dim();
        let mut forms = Vec::with_capacity(n);
        for c in 0..n {
            let dual_c = g.system().dual_vector(c);
            let mut padded = nalgebra::DVector::zeros(host.generator_count());
            padded.rows_mut(0, n).copy_from(&dual_c);
            forms.push(g.lambda_g(host, &padded)?);
        }
        Ok(LieDifferential {
            forms,
            host: host.clone(),
        })
    }

    pub fn apply(&self, x: &MultiVector) -> Result<MultiVector> {
        self.host.check_same(x.system())?;
        let mut out = MultiVector::zero(&self.host);
        for (c, form) in self.forms.iter().enumerate() {
            if form.is_zero() {
                continue;
            }
            let contracted = x.contract_generator(c);
            if contracted.is_zero() {
                continue;
            }
            out = &out + &form.wedge(&contracted)?;
        }
        Ok(out)
    }

    pub fn operator(&self) -> Result<OperatorMatrix> {
        operator_of(&self.host, |x| self.apply(x))
    }
}

/// The Clifford differential δ = [q(Θ), ·] (graded commutator).
pub struct CliffordDifferential {
    q_theta: MultiVector,
    host: System,
}

impl CliffordDifferential {
    pub fn new(g: &QuadraticLieAlgebra, host: &System) -> Result<Self> {
        let q_theta = g.cubic_theta(host)?.quantize();
        Ok(CliffordDifferential {
            q_theta,
            host: host.clone(),
        })
    }

    pub fn q_theta(&self) -> &MultiVector {
        &self.q_theta
    }

    pub fn apply(&self, x: &MultiVector) -> Result<MultiVector> {
        self.host.check_same(x.system())?;
        // [q(Θ), x] = qΘ·x_even - x_even·qΘ + qΘ·x_odd + x_odd·qΘ
        let even = x.even_part();
        let odd = x.odd_part();
        let mut out = MultiVector::zero(&self.host);
        if !even.is_zero() {
            out = &out
                + &(&self.q_theta.clifford_product(&even)?
                    - &even.clifford_product(&self.q_theta)?);
        }
        if !odd.is_zero() {
            out = &out
                + &(&self.q_theta.clifford_product(&odd)?
                    + &odd.clifford_product(&self.q_theta)?);
        }
        Ok(out)
    }

    pub fn operator(&self) -> Result<OperatorMatrix> {
        operator_of(&self.host, |x| self.apply(x))
    }
}

#[cfg(test)]
mod tests {
    use super::super::catalog;
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn d_of_scalar_is_zero() {
        let g = catalog::so3().algebra;
        let sys = g.system().clone();
        let d = LieDifferential::new(&g, &sys).unwrap();
        assert!(d.apply(&MultiVector::one(&sys)).unwrap().is_zero());
    }

    #[test]
    fn d_on_vectors_is_lambda() {
        // d(μ) = λ^g(μ) for basis μ, over every catalog algebra.
        for name in catalog::CATALOG_NAMES {
            let g = catalog::by_name(name).unwrap().algebra;
            let sys = g.system().clone();
            let d = LieDifferential::new(&g, &sys).unwrap();
            for a in 0..g.dim() {
                let mu = MultiVector::generator(&sys, a);
                let via_d = d.apply(&mu).unwrap();
                let coeffs = DVector::from_fn(g.dim(), |i, _| if i == a { 1.0 } else { 0.0 });
                let via_lambda = g.lambda_g(&sys, &coeffs).unwrap();
                assert!(
                    (&via_d - &via_lambda).coeff_norm() < 1e-12,
                    "{name}: d(e_{a}) != lambda(e_{a})"
                );
            }
        }
    }

    #[test]
    fn d_squares_to_zero_operator() {
        for name in ["so3", "so21", "semidirect2"] {
            let g = catalog::by_name(name).unwrap().algebra;
            let sys = g.system().clone();
            let d = LieDifferential::new(&g, &sys).unwrap().operator().unwrap();
            let dd = d.compose(&d).unwrap();
            assert!(dd.max_abs() < 1e-11, "{name}: d² = {}", dd.max_abs());
        }
    }

    #[test]
    fn delta_on_vectors_is_gamma() {
        for name in ["so3", "so21", "semidirect2"] {
            let g = catalog::by_name(name).unwrap().algebra;
            let sys = g.system().clone();
            let delta = CliffordDifferential::new(&g, &sys).unwrap();
            for a in 0..g.dim() {
                let mu = MultiVector::generator(&sys, a);
                let via_delta = delta.apply(&mu).unwrap();
                let coeffs =
                    DVector::from_fn(g.dim(), |i, _| if i == a { 1.0 } else { 0.0 });
                let via_gamma = g.gamma_g(&sys, &coeffs).unwrap();
                assert!(
                    (&via_delta - &via_gamma).coeff_norm() < 1e-12,
                    "{name}: δ(e_{a}) != γ(e_{a})"
                );
            }
        }
    }

    #[test]
    fn delta_squares_to_zero_and_q_theta_squares_to_scalar() {
        for name in ["so3", "so21", "semidirect2", "abelian4"] {
            let g = catalog::by_name(name).unwrap().algebra;
            let sys = g.system().clone();
            let delta = CliffordDifferential::new(&g, &sys).unwrap();
            let sq = delta
                .q_theta()
                .clifford_product(delta.q_theta())
                .unwrap();
            let mut nonscalar = sq.clone();
            nonscalar.add_term(0, -sq.scalar_part());
            assert!(
                nonscalar.pruned().coeff_norm() < 1e-11,
                "{name}: q(Θ)² is not scalar"
            );
            let dd = delta.operator().unwrap();
            let sq_op = dd.compose(&dd).unwrap();
            assert!(sq_op.max_abs() < 1e-11, "{name}: δ² = {}", sq_op.max_abs());
        }
    }

    #[test]
    fn so3_q_theta_squared_is_minus_one_eighth() {
        let g = catalog::so3().algebra;
        let sys = g.system().clone();
        let q_theta = g.cubic_theta(&sys).unwrap().quantize();
        let sq = q_theta.clifford_product(&q_theta).unwrap();
        assert!((sq.scalar_part() + 0.125).abs() < 1e-14);
        assert_eq!(sq.term_count(), 1);
    }

    #[test]
    fn abelian_differentials_vanish() {
        let g = catalog::abelian(4).algebra;
        let sys = g.system().clone();
        let d = LieDifferential::new(&g, &sys).unwrap().operator().unwrap();
        assert_eq!(d.max_abs(), 0.0);
        let delta = CliffordDifferential::new(&g, &sys).unwrap().operator().unwrap();
        assert_eq!(delta.max_abs(), 0.0);
    }
}
