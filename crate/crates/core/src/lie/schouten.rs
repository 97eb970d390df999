//! Schouten bracket: the biderivation extension of the Lie bracket to the
//! exterior algebra, of degree -1.
//!
//! On blades it is computed recursively:
//!   [e_a, e_b]      = the Lie bracket,
//!   [v, y∧z]        = [v,y]∧z + y∧[v,z]            (v of degree 1),
//!   [x∧v, y]        = x∧[v,y] + (-1)^{|y|-1} [x,y]∧v,
//! and vanishes when either argument is a scalar.

use nalgebra::DVector;

use super::QuadraticLieAlgebra;
use crate::blade::multivector::{BladeMask, MultiVector};
use crate::blade::System;
use crate::error::{Error, Result};

impl QuadraticLieAlgebra {
    /// Schouten bracket [x, y] over `host` (x, y must be supported on the
    /// algebra generators).
    pub fn schouten_bracket(
        &self,
        host: &System,
        x: &MultiVector,
        y: &MultiVector,
    ) -> Result<MultiVector> {
        self.check_host(host)?;
        host.check_same(x.system())?;
        host.check_same(y.system())?;
        let core_mask: BladeMask = (1u32 << self.dim()) - 1;
        for (m, _) in x.terms().chain(y.terms()) {
            if m & !core_mask != 0 {
                return Err(Error::structural(
                    "Schouten bracket operands must be supported on the algebra generators",
                ));
            }
        }
        let mut out = MultiVector::zero(host);
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                let b = self.schouten_blades(host, mx, my)?;
                out = &out + &b.scale(cx * cy);
            }
        }
        Ok(out.pruned())
    }

    fn schouten_blades(
        &self,
        host: &System,
        mx: BladeMask,
        my: BladeMask,
    ) -> Result<MultiVector> {
        let kx = mx.count_ones();
        if kx == 0 || my == 0 {
            return Ok(MultiVector::zero(host));
        }
        if kx == 1 {
            let a = mx.trailing_zeros() as usize;
            return self.schouten_generator_blade(host, a, my);
        }
        // peel the last (highest-index) factor: mx = x' ∧ e_v
        let v = 31 - mx.leading_zeros();
        let rest = mx & !(1 << v);
        let x_rest = MultiVector::from_terms(host, [(rest, 1.0)]);
        let v_blade = MultiVector::from_terms(host, [(1u32 << v, 1.0)]);
        let y_blade = MultiVector::from_terms(host, [(my, 1.0)]);
        let term1 = x_rest.wedge(&self.schouten_generator_blade(host, v as usize, my)?)?;
        let inner = self.schouten_blades(host, rest, my)?;
        let sign = if (my.count_ones() + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let term2 = inner.wedge(&v_blade)?.scale(sign);
        let _ = y_blade;
        Ok(&term1 + &term2)
    }

    /// [e_a, blade]: derivation replacing each factor by its bracket with e_a.
    fn schouten_generator_blade(
        &self,
        host: &System,
        a: usize,
        my: BladeMask,
    ) -> Result<MultiVector> {
        let n = self.dim();
        let mut out = MultiVector::zero(host);
        let mut rest = my;
        let mut pos_sign = 1.0;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // [e_a, e_j] = Σ_c f^c_{aj} e_c, moved to the front of the blade
            let reduced = my & !(1 << j);
            for c in 0..n {
                let f = self.structure_constant(a, j, c);
                if f == 0.0 {
                    continue;
                }
                let bracket_vec = MultiVector::from_terms(host, [(1u32 << c, f)]);
                let tail = MultiVector::from_terms(host, [(reduced, 1.0)]);
                out = &out + &bracket_vec.wedge(&tail)?.scale(pos_sign);
            }
            pos_sign = -pos_sign;
        }
        Ok(out)
    }

    /// u = ½ Σ r^{ab} [e_a, e_b]: the image of a degree-2 element under the
    /// bracket map ξ∧ξ' ↦ [ξ, ξ'].
    pub fn bracket_contraction_u(&self, r: &MultiVector) -> Result<DVector<f64>> {
        if !r.is_homogeneous(2) {
            return Err(Error::domain(
                "bracket contraction is defined for degree-2 elements",
            ));
        }
        let n = self.dim();
        let mut u = DVector::zeros(n);
        for (m, w) in r.terms() {
            let a = m.trailing_zeros() as usize;
            let b = (31 - m.leading_zeros()) as usize;
            if a >= n || b >= n {
                return Err(Error::structural(
                    "bracket contraction operand must be supported on the algebra generators",
                ));
            }
            for c in 0..n {
                u[c] += w * self.structure_constant(a, b, c);
            }
        }
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::super::catalog;
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn degree_one_reduces_to_lie_bracket() {
        let g = catalog::so3().algebra;
        let sys = g.system().clone();
        let e1 = MultiVector::generator(&sys, 0);
        let e2 = MultiVector::generator(&sys, 1);
        let br = g.schouten_bracket(&sys, &e1, &e2).unwrap();
        // [e₁, e₂] = e₃
        assert_eq!(br.coeff(0b100), 1.0);
        assert_eq!(br.term_count(), 1);
    }

    #[test]
    fn derivation_in_second_argument() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let g = catalog::so21().algebra;
        let sys = g.system().clone();
        for _ in 0..20 {
            let mut v =
                || DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
            let x = MultiVector::vector(&sys, &v()).unwrap();
            let y = MultiVector::vector(&sys, &v()).unwrap();
            let z = MultiVector::vector(&sys, &v()).unwrap();
            let lhs = g
                .schouten_bracket(&sys, &x, &y.wedge(&z).unwrap())
                .unwrap();
            let rhs = &g.schouten_bracket(&sys, &x, &y).unwrap().wedge(&z).unwrap()
                + &y.wedge(&g.schouten_bracket(&sys, &x, &z).unwrap()).unwrap();
            assert!((&lhs - &rhs).coeff_norm() < 1e-13);
        }
    }

    #[test]
    fn printed_component_formula_for_r_r() {
        // [r,r] = Σ_abc (Σ_kl r^{ak} f^b_{kl} r^{lc}) e_a∧e_b∧e_c
        // for r = ½ Σ r^{ab} e_a∧e_b, on random r over so3 and semidirect2.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for entry in [catalog::so3(), catalog::semidirect2()] {
            let g = entry.algebra;
            let sys = g.system().clone();
            let n = g.dim();
            for _ in 0..10 {
                let mut comp = nalgebra::DMatrix::<f64>::zeros(n, n);
                for a in 0..n {
                    for b in (a + 1)..n {
                        let v = rng.random_range(-1.0..1.0);
                        comp[(a, b)] = v;
                        comp[(b, a)] = -v;
                    }
                }
                let r = MultiVector::from_terms(
                    &sys,
                    (0..n).flat_map(|a| {
                        let comp = comp.clone();
                        ((a + 1)..n).map(move |b| {
                            (((1u32 << a) | (1u32 << b)) as u32, comp[(a, b)])
                        })
                    }),
                );
                let via_general = g.schouten_bracket(&sys, &r, &r).unwrap();
                let mut via_formula = MultiVector::zero(&sys);
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            let mut s = 0.0;
                            for k in 0..n {
                                for l in 0..n {
                                    s += comp[(a, k)]
                                        * g.structure_constant(k, l, b)
                                        * comp[(l, c)];
                                }
                            }
                            if s != 0.0 && a != b && b != c && a != c {
                                let (mask, sign) = super::super::sorted_blade_sign(&[a, b, c]);
                                via_formula.add_term(mask, s * sign);
                            }
                        }
                    }
                }
                let via_formula = via_formula.pruned();
                assert!(
                    (&via_general - &via_formula).coeff_norm()
                        < 1e-12 * via_formula.coeff_norm().max(1.0),
                    "algebra {}",
                    g.name()
                );
            }
        }
    }

    #[test]
    fn graded_antisymmetry() {
        // [x,y] = -(-1)^{(|x|-1)(|y|-1)} [y,x] on homogeneous arguments.
        let g = catalog::so3().algebra;
        let sys = g.system().clone();
        let x = MultiVector::from_terms(&sys, [(0b011, 1.3), (0b101, -0.4)]); // degree 2
        let y = MultiVector::from_terms(&sys, [(0b001, 0.7), (0b100, 1.1)]); // degree 1
        let xy = g.schouten_bracket(&sys, &x, &y).unwrap();
        let yx = g.schouten_bracket(&sys, &y, &x).unwrap();
        // (|x|-1)(|y|-1) = 0 here, so [x,y] = -[y,x]·(-1)^0 = -[y,x]... sign = -(+1)
        let dev = (&xy + &yx).coeff_norm();
        assert!(dev < 1e-13, "dev = {dev}");
    }

    #[test]
    fn bracket_contraction_examples() {
        let g = catalog::so3().algebra;
        let sys = g.system().clone();
        // r = 0 → 0
        let u = g.bracket_contraction_u(&MultiVector::zero(&sys)).unwrap();
        assert_eq!(u.amax(), 0.0);
        // so3, r = e₁∧e₂ → [e₁,e₂] = e₃
        let r = MultiVector::blade(&sys, &[0, 1], 1.0);
        let u = g.bracket_contraction_u(&r).unwrap();
        assert_eq!(u[2], 1.0);
        assert_eq!(u[0], 0.0);
        // abelian: any r → 0
        let ab = catalog::abelian(4).algebra;
        let sys4 = ab.system().clone();
        let r = MultiVector::from_terms(&sys4, [(0b0011, 1.0), (0b1100, -2.0)]);
        assert_eq!(ab.bracket_contraction_u(&r).unwrap().amax(), 0.0);
        // non-degree-2 rejected
        assert!(g
            .bracket_contraction_u(&MultiVector::one(&sys))
            .is_err());
    }
}
