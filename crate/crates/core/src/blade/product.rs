//! Product kernels: wedge, contraction, and the Clifford product.
//!
//! Blades are bitmasks with factors in increasing index order. Reordering
//! signs are transposition parities computed by popcount; the Clifford
//! kernel has a branch-light fast path for diagonal pairings and a general
//! generator-pushing path for arbitrary symmetric pairings (including the
//! degenerate extension block, where the product degenerates to the wedge).

use std::collections::BTreeMap;

use nalgebra::DVector;

use super::multivector::{BladeMask, MultiVector};
use crate::error::{Error, Result};

/// Parity sign for concatenating blade `a` before blade `b`:
/// (-1)^{#{(i,j) : i ∈ a, j ∈ b, i > j}}.
#[inline]
pub fn reorder_sign(a: BladeMask, b: BladeMask) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign picked up by removing the factor at bit `j` from blade `m`:
/// (-1)^{#factors of m below j}.
#[inline]
fn removal_sign(m: BladeMask, j: u32) -> f64 {
    if (m & ((1 << j) - 1)).count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl MultiVector {
    /// Exterior product x ∧ y.
    pub fn wedge(&self, rhs: &MultiVector) -> Result<MultiVector> {
        self.system().check_same(rhs.system())?;
        let mut out = MultiVector::zero(self.system());
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                if ma & mb != 0 {
                    continue;
                }
                out.add_term(ma | mb, ca * cb * reorder_sign(ma, mb));
            }
        }
        Ok(out.pruned())
    }

    /// Contraction ι_v by a vector, pairing through B: ι_v e_b = B(v, e_b).
    ///
    /// An odd derivation of the wedge product. Contraction by pure-extension
    /// vectors annihilates everything (their pairing row is zero).
    pub fn contract_vector(&self, v: &DVector<f64>) -> Result<MultiVector> {
        let n = self.system().generator_count();
        if v.len() != n {
            return Err(Error::structural(format!(
                "contraction vector has {} components, system has {n}",
                v.len()
            )));
        }
        // w_j = B(v, e_j)
        let w = self.system().bilinear() * v;
        let mut out = MultiVector::zero(self.system());
        for (m, c) in self.terms() {
            let mut rest = m;
            while rest != 0 {
                let j = rest.trailing_zeros();
                rest &= rest - 1;
                let wj = w[j as usize];
                if wj != 0.0 {
                    out.add_term(m & !(1 << j), c * wj * removal_sign(m, j));
                }
            }
        }
        Ok(out.pruned())
    }

    /// Plain dual-pairing contraction by a covector α (no pairing involved):
    /// ι_α e_b = α_b. This is how the V* half of a doubled space acts on ∧V.
    pub fn contract_dual(&self, alpha: &DVector<f64>) -> Result<MultiVector> {
        let n = self.system().generator_count();
        if alpha.len() != n {
            return Err(Error::structural(format!(
                "covector has {} components, system has {n}",
                alpha.len()
            )));
        }
        let mut out = MultiVector::zero(self.system());
        for (m, c) in self.terms() {
            let mut rest = m;
            while rest != 0 {
                let j = rest.trailing_zeros();
                rest &= rest - 1;
                let aj = alpha[j as usize];
                if aj != 0.0 {
                    out.add_term(m & !(1 << j), c * aj * removal_sign(m, j));
                }
            }
        }
        Ok(out.pruned())
    }

    /// Contraction by a basis generator e_a.
    pub fn contract_generator(&self, a: usize) -> MultiVector {
        let sys = self.system();
        let mut out = MultiVector::zero(sys);
        for (m, c) in self.terms() {
            let mut rest = m;
            while rest != 0 {
                let j = rest.trailing_zeros();
                rest &= rest - 1;
                let w = sys.pairing(a, j as usize);
                if w != 0.0 {
                    out.add_term(m & !(1 << j), c * w * removal_sign(m, j));
                }
            }
        }
        out.pruned()
    }

    /// Contraction ι_β by a full multivector.
    ///
    /// On blades the map composes single contractions with the last wedge
    /// factor acting first: ι_{v₁∧…∧v_k} = ι_{v₁}∘…∘ι_{v_k}. The scalar part
    /// of β acts by scaling. This ordering is the one validated against the
    /// exterior/Clifford factorization identity at n = 2 (see the
    /// `convention_lock` integration test).
    pub fn contract_multi(&self, beta: &MultiVector) -> Result<MultiVector> {
        self.system().check_same(beta.system())?;
        let mut out = MultiVector::zero(self.system());
        for (mb, cb) in beta.terms() {
            let mut acc = self.clone();
            // Highest index first = innermost contraction.
            let mut rest = mb;
            while rest != 0 {
                let j = 31 - rest.leading_zeros();
                rest &= !(1 << j);
                acc = acc.contract_generator(j as usize);
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc.scale(cb);
        }
        Ok(out.pruned())
    }

    /// Clifford (geometric) product on the ordered-monomial coordinates.
    ///
    /// Generators satisfy e_a e_b + e_b e_a = B(e_a, e_b); in particular
    /// v·v = ½B(v,v), and the product reduces to the wedge wherever the
    /// pairing vanishes (the extension block).
    pub fn clifford_product(&self, rhs: &MultiVector) -> Result<MultiVector> {
        self.system().check_same(rhs.system())?;
        if self.system().is_diagonal() {
            return Ok(self.clifford_diagonal(rhs));
        }
        Ok(self.clifford_general(rhs))
    }

    /// Fast path for diagonal pairings: a single popcount-sign merge per
    /// blade pair, with ½B_jj picked up for every annihilated common factor.
    fn clifford_diagonal(&self, rhs: &MultiVector) -> MultiVector {
        let sys = self.system();
        let n = sys.generator_count();
        let mut diag = [0.0f64; super::system::MAX_GENERATORS];
        for j in 0..n {
            diag[j] = 0.5 * sys.pairing(j, j);
        }
        let mut out = MultiVector::zero(sys);
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                let mut coeff = ca * cb * reorder_sign(ma, mb);
                let mut common = ma & mb;
                while common != 0 {
                    let j = common.trailing_zeros();
                    common &= common - 1;
                    coeff *= diag[j as usize];
                    if coeff == 0.0 {
                        break;
                    }
                }
                if coeff != 0.0 {
                    out.add_term(ma ^ mb, coeff);
                }
            }
        }
        out.pruned()
    }

    /// General kernel: push the generators of each left monomial into the
    /// accumulated right factor one at a time using
    /// e_a e_b = -e_b e_a + B(e_a, e_b), e_a² = ½B(e_a, e_a).
    fn clifford_general(&self, rhs: &MultiVector) -> MultiVector {
        let sys = self.system();
        let mut out = MultiVector::zero(sys);
        for (ma, ca) in self.terms() {
            let mut acc: BTreeMap<BladeMask, f64> =
                rhs.terms().map(|(m, c)| (m, c)).collect();
            // Rightmost generator of the monomial multiplies first.
            let mut rest = ma;
            while rest != 0 && !acc.is_empty() {
                let a = 31 - rest.leading_zeros();
                rest &= !(1 << a);
                acc = generator_mul_left(sys, a as usize, &acc);
            }
            for (m, c) in acc {
                out.add_term(m, ca * c);
            }
        }
        out.pruned()
    }
}

/// Left multiplication e_a · x in Clifford coordinates, for a term map.
fn generator_mul_left(
    sys: &super::system::GeneratorSystem,
    a: usize,
    x: &BTreeMap<BladeMask, f64>,
) -> BTreeMap<BladeMask, f64> {
    let mut out: BTreeMap<BladeMask, f64> = BTreeMap::new();
    let mut add = |m: BladeMask, c: f64| {
        if c != 0.0 {
            let slot = out.entry(m).or_insert(0.0);
            *slot += c;
            if *slot == 0.0 {
                out.remove(&m);
            }
        }
    };
    let abit: BladeMask = 1 << a;
    for (&m, &c) in x {
        // e_a only picks up contraction terms while moving past smaller
        // indices; once it reaches its sorted slot it either meets itself
        // (½B(a,a)) or wedges in.
        let mut sign = 1.0;
        let mut below = m & (abit - 1);
        while below != 0 {
            let j = below.trailing_zeros();
            below &= below - 1;
            let pair = sys.pairing(a, j as usize);
            if pair != 0.0 {
                add(m & !(1 << j), c * sign * pair);
            }
            sign = -sign;
        }
        if m & abit != 0 {
            add(m & !abit, c * sign * 0.5 * sys.pairing(a, a));
        } else {
            add(m | abit, c * sign);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blade::system::GeneratorSystem;
    use nalgebra::{dmatrix, dvector};

    fn euclid(n: usize) -> super::super::system::System {
        GeneratorSystem::euclidean(n)
    }

    #[test]
    fn wedge_sorted_indices() {
        let sys = euclid(3);
        let e1 = MultiVector::generator(&sys, 0);
        let e2 = MultiVector::generator(&sys, 1);
        let w = e1.wedge(&e2).unwrap();
        assert_eq!(w.coeff(0b11), 1.0);
        let w = e2.wedge(&e1).unwrap();
        assert_eq!(w.coeff(0b11), -1.0);
    }

    #[test]
    fn wedge_of_inhomogeneous() {
        // (1 + e₁) ∧ (1 + e₁) = 1 + 2 e₁
        let sys = euclid(2);
        let x = &MultiVector::one(&sys) + &MultiVector::generator(&sys, 0);
        let sq = x.wedge(&x).unwrap();
        assert_eq!(sq.coeff(0), 1.0);
        assert_eq!(sq.coeff(0b01), 2.0);
        assert_eq!(sq.term_count(), 2);
    }

    #[test]
    fn wedge_rejects_mismatched_systems() {
        let a = euclid(2);
        let b = euclid(3);
        let x = MultiVector::one(&a);
        let y = MultiVector::one(&b);
        assert!(x.wedge(&y).is_err());
    }

    #[test]
    fn contraction_examples() {
        let sys = euclid(3);
        let e12 = MultiVector::blade(&sys, &[0, 1], 1.0);
        // ι_{e₁}(e₁∧e₂) = e₂ with B = I
        let r = e12.contract_vector(&dvector![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.coeff(0b10), 1.0);
        assert_eq!(r.term_count(), 1);
        // ι_{e₃}(e₁∧e₂) = 0
        let r = e12.contract_vector(&dvector![0.0, 0.0, 1.0]).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn contraction_squares_to_zero() {
        let sys = euclid(4);
        let v = dvector![0.3, -1.2, 0.7, 0.9];
        let x = MultiVector::from_terms(
            &sys,
            [(0b1011, 1.5), (0b0110, -0.4), (0b1111, 2.0), (0b0001, 0.3)],
        );
        let once = x.contract_vector(&v).unwrap();
        let twice = once.contract_vector(&v).unwrap();
        assert!(twice.coeff_norm() < 1e-12);
    }

    #[test]
    fn contraction_is_odd_derivation() {
        let sys = euclid(4);
        let v = dvector![0.5, -0.7, 1.1, 0.2];
        let a = MultiVector::blade(&sys, &[0, 2], 1.0); // even grade
        let b = &MultiVector::generator(&sys, 1) + &MultiVector::generator(&sys, 3);
        let lhs = a.wedge(&b).unwrap().contract_vector(&v).unwrap();
        let rhs = &a.contract_vector(&v).unwrap().wedge(&b).unwrap()
            + &a.wedge(&b.contract_vector(&v).unwrap()).unwrap();
        assert!((&lhs - &rhs).coeff_norm() < 1e-14);
    }

    #[test]
    fn contract_multi_scalar_and_golden() {
        let sys = euclid(2);
        let e12 = MultiVector::blade(&sys, &[0, 1], 1.0);
        // scalar β acts by scaling
        let r = e12.contract_multi(&MultiVector::scalar(&sys, 2.5)).unwrap();
        assert_eq!(r.coeff(0b11), 2.5);
        // Convention golden, locked by the factorization identity at n = 2:
        // ι_{e₁∧e₂}(e₁∧e₂) = -1 with B = I.
        let r = e12.contract_multi(&e12).unwrap();
        assert_eq!(r.scalar_part(), -1.0);
        assert_eq!(r.term_count(), 1);
    }

    #[test]
    fn clifford_generator_relations() {
        let sys = euclid(2);
        let e1 = MultiVector::generator(&sys, 0);
        let e2 = MultiVector::generator(&sys, 1);
        // e₁·e₁ = ½ B₁₁
        let sq = e1.clifford_product(&e1).unwrap();
        assert_eq!(sq.scalar_part(), 0.5);
        assert_eq!(sq.term_count(), 1);
        // e₁·e₂ = blade{1,2} for orthogonal generators
        let p = e1.clifford_product(&e2).unwrap();
        assert_eq!(p.coeff(0b11), 1.0);
        assert_eq!(p.term_count(), 1);
        // (e₁e₂)·(e₁e₂) = -¼
        let b = MultiVector::blade(&sys, &[0, 1], 1.0);
        let sq = b.clifford_product(&b).unwrap();
        assert_eq!(sq.scalar_part(), -0.25);
        assert_eq!(sq.term_count(), 1);
    }

    #[test]
    fn diagonal_and_general_kernels_agree() {
        let sys = GeneratorSystem::from_bilinear(dmatrix![
            2.0, 0.0, 0.0;
            0.0, -1.0, 0.0;
            0.0, 0.0, 0.5
        ])
        .unwrap();
        assert!(sys.is_diagonal());
        let x = MultiVector::from_terms(&sys, [(0b011, 1.2), (0b101, -0.7), (0b111, 0.4)]);
        let y = MultiVector::from_terms(&sys, [(0b110, 0.9), (0b001, 2.0), (0b010, -1.1)]);
        let fast = x.clifford_diagonal(&y);
        let slow = x.clifford_general(&y);
        assert!((&fast - &slow).coeff_norm() < 1e-13);
    }

    #[test]
    fn nonorthogonal_generator_relation() {
        let sys = GeneratorSystem::from_bilinear(dmatrix![
            1.0, 0.3;
            0.3, 2.0
        ])
        .unwrap();
        let e1 = MultiVector::generator(&sys, 0);
        let e2 = MultiVector::generator(&sys, 1);
        let anti = &e1.clifford_product(&e2).unwrap() + &e2.clifford_product(&e1).unwrap();
        // e₁e₂ + e₂e₁ = B(e₁,e₂)
        assert!((anti.scalar_part() - 0.3).abs() < 1e-15);
        assert_eq!(anti.max_grade(), Some(0));
    }

    #[test]
    fn clifford_restricted_to_extension_is_wedge() {
        let base = GeneratorSystem::euclidean(2);
        let sys = GeneratorSystem::extend(&base, 2);
        let x = MultiVector::from_terms(&sys, [(0b0100, 1.0), (0b1000, 2.0), (0b1100, -0.5)]);
        let y = MultiVector::from_terms(&sys, [(0b0100, -1.5), (0b1000, 0.25)]);
        let cl = x.clifford_product(&y).unwrap();
        let we = x.wedge(&y).unwrap();
        assert!((&cl - &we).coeff_norm() == 0.0);
    }

    #[test]
    fn clifford_associativity_spot() {
        let sys = GeneratorSystem::from_bilinear(dmatrix![
            1.0, 0.4, 0.0;
            0.4, 1.5, -0.2;
            0.0, -0.2, 0.8
        ])
        .unwrap();
        let x = MultiVector::from_terms(&sys, [(0b001, 1.0), (0b110, -0.3)]);
        let y = MultiVector::from_terms(&sys, [(0b011, 0.7), (0b100, 1.1)]);
        let z = MultiVector::from_terms(&sys, [(0b111, -0.9), (0b010, 0.6)]);
        let lhs = x
            .clifford_product(&y)
            .unwrap()
            .clifford_product(&z)
            .unwrap();
        let rhs = x
            .clifford_product(&y.clifford_product(&z).unwrap())
            .unwrap();
        assert!((&lhs - &rhs).coeff_norm() < 1e-13);
    }
}
