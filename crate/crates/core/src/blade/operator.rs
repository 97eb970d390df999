//! Dense operator matrices on ∧V in the blade basis.
//!
//! These are the brute-force oracles for operator identities: a linear map
//! is materialized column by column by applying it to each of the 2ⁿ blades.

use nalgebra::DMatrix;

use super::multivector::{BladeMask, MultiVector};
use super::system::System;
use crate::error::{Error, Result};

/// Largest generator count for which dense 2ⁿ×2ⁿ operator matrices are built.
pub const MAX_OPERATOR_GENERATORS: usize = 11;

/// Dense 2ⁿ×2ⁿ real matrix representing a linear operator on ∧V, with blade
/// bitmask = column/row index.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    system: System,
    matrix: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn identity(system: &System) -> Result<Self> {
        check_size(system)?;
        let dim = system.blade_count();
        Ok(OperatorMatrix {
            system: system.clone(),
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn zero(system: &System) -> Result<Self> {
        check_size(system)?;
        let dim = system.blade_count();
        Ok(OperatorMatrix {
            system: system.clone(),
            matrix: DMatrix::zeros(dim, dim),
        })
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Apply the operator to a multivector.
    pub fn apply(&self, x: &MultiVector) -> Result<MultiVector> {
        self.system.check_same(x.system())?;
        let mut v = nalgebra::DVector::zeros(self.dim());
        for (m, c) in x.terms() {
            v[m as usize] = c;
        }
        let w = &self.matrix * v;
        Ok(MultiVector::from_terms(
            &self.system,
            w.iter()
                .enumerate()
                .map(|(i, &c)| (i as BladeMask, c)),
        ))
    }

    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.system.check_same(&rhs.system)?;
        Ok(OperatorMatrix {
            system: self.system.clone(),
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    pub fn add(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.system.check_same(&rhs.system)?;
        Ok(OperatorMatrix {
            system: self.system.clone(),
            matrix: &self.matrix + &rhs.matrix,
        })
    }

    pub fn sub(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.system.check_same(&rhs.system)?;
        Ok(OperatorMatrix {
            system: self.system.clone(),
            matrix: &self.matrix - &rhs.matrix,
        })
    }

    pub fn scale(&self, s: f64) -> OperatorMatrix {
        OperatorMatrix {
            system: self.system.clone(),
            matrix: &self.matrix * s,
        }
    }

    /// Operator exponential as a plain matrix series (for nilpotent or
    /// small-norm operators such as contraction exponentials).
    pub fn exp(&self) -> Result<OperatorMatrix> {
        let dim = self.dim();
        let mut acc = DMatrix::identity(dim, dim);
        let mut term = DMatrix::<f64>::identity(dim, dim);
        for k in 1..=200 {
            term = &term * &self.matrix / k as f64;
            let tn = term.norm();
            acc += &term;
            if tn < 1e-18 * acc.norm().max(1.0) {
                return Ok(OperatorMatrix {
                    system: self.system.clone(),
                    matrix: acc,
                });
            }
        }
        Err(Error::numeric("operator exponential did not converge"))
    }

    /// Largest absolute entry of the difference (operator residual).
    pub fn max_abs_diff(&self, rhs: &OperatorMatrix) -> f64 {
        (&self.matrix - &rhs.matrix).amax()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.amax()
    }
}

fn check_size(system: &System) -> Result<()> {
    if system.generator_count() > MAX_OPERATOR_GENERATORS {
        return Err(Error::structural(format!(
            "operator matrices support at most {MAX_OPERATOR_GENERATORS} generators"
        )));
    }
    Ok(())
}

/// Materialize a linear action on ∧V as a dense matrix by applying it to
/// every blade.
pub fn operator_of<F>(system: &System, f: F) -> Result<OperatorMatrix>
where
    F: Fn(&MultiVector) -> Result<MultiVector>,
{
    check_size(system)?;
    let dim = system.blade_count();
    let mut matrix = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut basis = MultiVector::zero(system);
        basis.add_term(col as BladeMask, 1.0);
        let image = f(&basis)?;
        image.system().check_same(system)?;
        for (m, c) in image.terms() {
            matrix[(m as usize, col)] = c;
        }
    }
    Ok(OperatorMatrix {
        system: system.clone(),
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::super::system::GeneratorSystem;
    use super::*;

    #[test]
    fn identity_operator() {
        let sys = GeneratorSystem::euclidean(3);
        let op = operator_of(&sys, |x| Ok(x.clone())).unwrap();
        assert_eq!(op.max_abs_diff(&OperatorMatrix::identity(&sys).unwrap()), 0.0);
    }

    #[test]
    fn wedge_by_vector_squares_to_zero() {
        let sys = GeneratorSystem::euclidean(3);
        let e1 = MultiVector::generator(&sys, 0);
        let op = operator_of(&sys, |x| e1.wedge(x)).unwrap();
        let sq = op.compose(&op).unwrap();
        assert_eq!(sq.max_abs(), 0.0);
    }

    #[test]
    fn clifford_left_mult_squares_to_half_pairing() {
        // operator_of(ρ(e₁))² = ½ B₁₁ · Id
        let sys = GeneratorSystem::euclidean(3);
        let op = operator_of(&sys, |x| Ok(x.rho_generator(0))).unwrap();
        let sq = op.compose(&op).unwrap();
        let expect = OperatorMatrix::identity(&sys).unwrap().scale(0.5);
        assert!(sq.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn apply_matches_direct_action() {
        let sys = GeneratorSystem::euclidean(4);
        let y = MultiVector::from_terms(&sys, [(0b0110, 1.3), (0b0001, -2.0)]);
        let op = operator_of(&sys, |x| y.clifford_product(x)).unwrap();
        let x = MultiVector::from_terms(&sys, [(0b1010, 0.7), (0, 1.0), (0b1111, -0.2)]);
        let via_op = op.apply(&x).unwrap();
        let direct = y.clifford_product(&x).unwrap();
        assert!((&via_op - &direct).coeff_norm() < 1e-14);
    }
}
