//! Exponentials in the exterior and Clifford readings of the algebra.

use super::multivector::MultiVector;
use crate::error::{Error, Result};

/// Hard cap on Clifford exponential series length.
pub const EXP_CLIFFORD_MAX_TERMS: usize = 500;

impl MultiVector {
    fn require_even(&self, what: &str) -> Result<()> {
        if !self.odd_part().is_zero() {
            return Err(Error::domain(format!(
                "{what} requires an even-parity argument"
            )));
        }
        Ok(())
    }

    /// Exterior exponential e^s · Σ_k (x-s)^∧k / k! (nilpotent tail).
    pub fn exp_exterior(&self) -> Result<MultiVector> {
        self.require_even("exterior exponential")?;
        let sys = self.system();
        let s = self.scalar_part();
        let mut nil = self.clone();
        nil.add_term(0, -s);
        let nil = nil.pruned();
        let mut acc = MultiVector::one(sys);
        let mut term = MultiVector::one(sys);
        let max_k = sys.generator_count() / 2 + 1;
        for k in 1..=max_k {
            term = term.wedge(&nil)?.scale(1.0 / k as f64);
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc.scale(s.exp()))
    }

    /// Clifford exponential Σ_k x^k / k!, truncated when three consecutive
    /// terms fall below `tol · max(1, ‖partial sum‖)`.
    pub fn exp_clifford(&self, tol: f64) -> Result<MultiVector> {
        self.require_even("Clifford exponential")?;
        let sys = self.system();
        let mut acc = MultiVector::one(sys);
        let mut term = MultiVector::one(sys);
        let mut small_streak = 0;
        for k in 1..=EXP_CLIFFORD_MAX_TERMS {
            term = term.clifford_product(self)?.scale(1.0 / k as f64);
            acc = &acc + &term;
            if term.coeff_norm() < tol * acc.coeff_norm().max(1.0) {
                small_streak += 1;
                if small_streak >= 3 {
                    return Ok(acc);
                }
            } else {
                small_streak = 0;
            }
        }
        Err(Error::numeric(format!(
            "Clifford exponential did not converge within {EXP_CLIFFORD_MAX_TERMS} terms"
        )))
    }
}
