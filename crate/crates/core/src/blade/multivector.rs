use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DVector;

use super::system::System;
use crate::error::{Error, Result};

/// Blade bitmask: bit `a` is set iff generator `a` is a factor, with factors
/// understood in increasing index order.
pub type BladeMask = u32;

/// Z₂ degree of a blade.
pub fn blade_grade(mask: BladeMask) -> u32 {
    mask.count_ones()
}

/// Sparse element of the blade-coordinatized algebra over a [`GeneratorSystem`].
///
/// The same coordinates serve both ∧V (blade = wedge of generators) and
/// Cl(V) (blade = ordered Clifford product of generators); the quantization
/// and symbol maps convert between the two readings.
///
/// [`GeneratorSystem`]: super::system::GeneratorSystem
#[derive(Debug, Clone)]
pub struct MultiVector {
    system: System,
    terms: BTreeMap<BladeMask, f64>,
}

impl MultiVector {
    pub fn zero(system: &System) -> Self {
        MultiVector {
            system: system.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(system: &System, value: f64) -> Self {
        let mut mv = Self::zero(system);
        mv.add_term(0, value);
        mv
    }

    pub fn one(system: &System) -> Self {
        Self::scalar(system, 1.0)
    }

    /// The generator e_a as a multivector.
    pub fn generator(system: &System, a: usize) -> Self {
        assert!(a < system.generator_count(), "generator index out of range");
        let mut mv = Self::zero(system);
        mv.add_term(1 << a, 1.0);
        mv
    }

    /// Degree-1 element with the given coefficients.
    pub fn vector(system: &System, coeffs: &DVector<f64>) -> Result<Self> {
        if coeffs.len() != system.generator_count() {
            return Err(Error::structural("vector coefficient count mismatch"));
        }
        let mut mv = Self::zero(system);
        for (a, &c) in coeffs.iter().enumerate() {
            mv.add_term(1 << a, c);
        }
        mv.prune();
        Ok(mv)
    }

    /// Single blade from strictly increasing generator indices.
    pub fn blade(system: &System, indices: &[usize], coeff: f64) -> Self {
        let mut mask: BladeMask = 0;
        for &i in indices {
            assert!(i < system.generator_count(), "blade index out of range");
            assert!(mask >> i == 0, "blade indices must be strictly increasing");
            mask |= 1 << i;
        }
        let mut mv = Self::zero(system);
        mv.add_term(mask, coeff);
        mv
    }

    pub fn from_terms(
        system: &System,
        terms: impl IntoIterator<Item = (BladeMask, f64)>,
    ) -> Self {
        let mut mv = Self::zero(system);
        for (m, c) in terms {
            debug_assert!((m as usize) < system.blade_count(), "mask out of range");
            mv.add_term(m, c);
        }
        mv.prune();
        mv
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn terms(&self) -> impl Iterator<Item = (BladeMask, f64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mask: BladeMask) -> f64 {
        self.terms.get(&mask).copied().unwrap_or(0.0)
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, mask: BladeMask, coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        let slot = self.terms.entry(mask).or_insert(0.0);
        *slot += coeff;
        if *slot == 0.0 {
            self.terms.remove(&mask);
        }
    }

    /// Drop coefficients below the system's prune epsilon.
    pub fn prune(&mut self) {
        let eps = self.system.prune_eps();
        self.terms.retain(|_, c| c.abs() >= eps);
    }

    pub fn pruned(mut self) -> Self {
        self.prune();
        self
    }

    /// ℓ² norm of the blade coefficients.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Grade-k homogeneous part.
    pub fn grade_part(&self, k: u32) -> Self {
        MultiVector {
            system: self.system.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| blade_grade(**m) == k)
                .map(|(&m, &c)| (m, c))
                .collect(),
        }
    }

    pub fn even_part(&self) -> Self {
        MultiVector {
            system: self.system.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| blade_grade(**m) % 2 == 0)
                .map(|(&m, &c)| (m, c))
                .collect(),
        }
    }

    pub fn odd_part(&self) -> Self {
        MultiVector {
            system: self.system.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| blade_grade(**m) % 2 == 1)
                .map(|(&m, &c)| (m, c))
                .collect(),
        }
    }

    /// Largest grade carrying a nonzero coefficient, or None for zero.
    pub fn max_grade(&self) -> Option<u32> {
        self.terms.keys().map(|&m| blade_grade(m)).max()
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|&m| blade_grade(m) % 2 == 0)
    }

    /// True if every term has the given grade (zero counts as homogeneous).
    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|&m| blade_grade(m) == k)
    }

    /// Coefficients of the degree-1 part as a vector.
    pub fn vector_part(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.system.generator_count());
        for (&m, &c) in &self.terms {
            if blade_grade(m) == 1 {
                v[m.trailing_zeros() as usize] = c;
            }
        }
        v
    }

    pub fn scale(&self, s: f64) -> Self {
        MultiVector {
            system: self.system.clone(),
            terms: self.terms.iter().map(|(&m, &c)| (m, c * s)).collect(),
        }
        .pruned()
    }

    /// Reinterpret the blade coordinates over another system with the same
    /// generator count (coordinate transport; no pairing conversion).
    pub fn with_system(&self, sys: &System) -> Result<MultiVector> {
        if sys.generator_count() != self.system.generator_count() {
            return Err(Error::structural(
                "coordinate transport needs matching generator counts",
            ));
        }
        Ok(MultiVector {
            system: sys.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Debug dump: one line per term, "±coeff e{i,j,...}", masks ascending.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (&m, &c) in &self.terms {
            let indices: Vec<String> = (0..self.system.generator_count())
                .filter(|&a| m >> a & 1 == 1)
                .map(|a| a.to_string())
                .collect();
            out.push_str(&format!("{:+} e{{{}}}\n", c, indices.join(",")));
        }
        if out.is_empty() {
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

impl Add for &MultiVector {
    type Output = MultiVector;
    fn add(self, rhs: &MultiVector) -> MultiVector {
        self.system
            .check_same(&rhs.system)
            .expect("adding multivectors over different systems");
        let mut out = self.clone();
        for (&m, &c) in &rhs.terms {
            out.add_term(m, c);
        }
        out.pruned()
    }
}

impl Sub for &MultiVector {
    type Output = MultiVector;
    fn sub(self, rhs: &MultiVector) -> MultiVector {
        self.system
            .check_same(&rhs.system)
            .expect("subtracting multivectors over different systems");
        let mut out = self.clone();
        for (&m, &c) in &rhs.terms {
            out.add_term(m, -c);
        }
        out.pruned()
    }
}

impl Neg for &MultiVector {
    type Output = MultiVector;
    fn neg(self) -> MultiVector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &MultiVector {
    type Output = MultiVector;
    fn mul(self, rhs: f64) -> MultiVector {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blade::system::GeneratorSystem;

    #[test]
    fn term_bookkeeping() {
        let sys = GeneratorSystem::euclidean(3);
        let x = MultiVector::blade(&sys, &[0, 2], 2.0);
        assert_eq!(x.coeff(0b101), 2.0);
        assert_eq!(x.max_grade(), Some(2));
        assert!(x.is_even());
        let y = &x + &MultiVector::generator(&sys, 1);
        assert_eq!(y.term_count(), 2);
        assert!(!y.is_even());
        assert_eq!((&y - &y).term_count(), 0);
    }

    #[test]
    fn dump_format_is_deterministic() {
        let sys = GeneratorSystem::euclidean(3);
        let x = &(&MultiVector::blade(&sys, &[0, 1], -1.5) + &MultiVector::scalar(&sys, 2.0))
            + &MultiVector::generator(&sys, 2);
        assert_eq!(x.dump(), "+2 e{}\n-1.5 e{0,1}\n+1 e{2}\n");
    }

    #[test]
    fn prune_drops_tiny_coefficients() {
        let sys = GeneratorSystem::euclidean(2);
        let x = MultiVector::from_terms(&sys, [(0b01, 1e-16), (0b10, 1.0)]);
        assert_eq!(x.term_count(), 1);
        assert_eq!(x.coeff(0b10), 1.0);
    }
}
