//! Star operator associated with a volume-like multivector Γ:
//! *ζ is the unique η with ι_η Γ = ζ.
//!
//! Contraction against Γ is invertible whenever the top-degree part of Γ is
//! nonzero (it maps grade k onto grade n−k plus filtration-lower terms); the
//! map is materialized on the blade basis and inverted by LU.

use nalgebra::DVector;

use super::multivector::{BladeMask, MultiVector};
use super::operator::operator_of;
use crate::error::{Error, Result};

impl MultiVector {
    /// Apply the star operator defined by `self` (the volume-like Γ) to ζ.
    pub fn star(&self, zeta: &MultiVector) -> Result<MultiVector> {
        let sys = self.system();
        sys.check_same(zeta.system())?;
        let n = sys.generator_count() as u32;
        let top = ((1u64 << n) - 1) as BladeMask;
        if self.coeff(top).abs() < 1e-12 {
            return Err(Error::domain(
                "star operator needs a volume-like multivector with nonzero top part",
            ));
        }
        // M: η ↦ ι_η Γ
        let m = operator_of(sys, |eta| self.contract_multi(eta))?;
        let dim = sys.blade_count();
        let mut rhs = DVector::zeros(dim);
        for (mask, c) in zeta.terms() {
            rhs[mask as usize] = c;
        }
        let lu = m.matrix().clone().lu();
        if lu.determinant().abs() < 1e-12 {
            return Err(Error::domain("star operator: contraction map is singular"));
        }
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| Error::numeric("star operator solve failed"))?;
        Ok(MultiVector::from_terms(
            sys,
            sol.iter().enumerate().map(|(i, &c)| (i as BladeMask, c)),
        ))
    }

    /// Wedge-inverse of a multivector with nonzero scalar part:
    /// (s + N)⁻¹ = s⁻¹ Σ (−N/s)^∧k.
    pub fn wedge_inverse(&self) -> Result<MultiVector> {
        let s = self.scalar_part();
        if s.abs() < 1e-12 {
            return Err(Error::domain(
                "wedge inverse needs a nonzero scalar part",
            ));
        }
        let sys = self.system();
        let mut nil = self.scale(1.0 / s);
        nil.add_term(0, -1.0);
        let nil = nil.pruned();
        let mut acc = MultiVector::one(sys);
        let mut term = MultiVector::one(sys);
        for _ in 0..=sys.generator_count() {
            term = term.wedge(&nil)?.scale(-1.0);
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc.scale(1.0 / s))
    }
}
