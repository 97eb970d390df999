//! Quantization and symbol maps between the exterior and Clifford readings.
//!
//! The symbol map sends a Clifford element x to ρ(x).1, where ρ is left
//! Clifford multiplication transported to ∧V: on generators
//! ρ(v).α = v∧α + ½ι_v α. Quantization is its inverse, recovered by
//! grade-descending recursion (the symbol map is the identity plus strictly
//! filtration-lowering terms).

use super::multivector::MultiVector;
use crate::error::Result;

impl MultiVector {
    /// ρ(e_a) applied to an exterior element: e_a ∧ x + ½ ι_{e_a} x.
    pub fn rho_generator(&self, a: usize) -> MultiVector {
        let sys = self.system();
        let wedge = MultiVector::generator(sys, a).wedge(self).expect("same system");
        let contr = self.contract_generator(a);
        &wedge + &contr.scale(0.5)
    }

    /// Symbol map q⁻¹: interpret the coordinates as a Clifford element and
    /// return its exterior-coordinate expression, q⁻¹(x) = ρ(x).1.
    pub fn symbol(&self) -> MultiVector {
        let sys = self.system();
        let mut out = MultiVector::zero(sys);
        for (m, c) in self.terms() {
            let mut acc = MultiVector::one(sys);
            // ρ(e_{j1} … e_{jk}).1 applies ρ(e_{jk}) first.
            let mut rest = m;
            while rest != 0 {
                let j = 31 - rest.leading_zeros();
                rest &= !(1 << j);
                acc = acc.rho_generator(j as usize);
            }
            out = &out + &acc.scale(c);
        }
        out.pruned()
    }

    /// Quantization map q: inverse of [`MultiVector::symbol`].
    ///
    /// quantize(symbol(x)) = x to machine precision; both maps preserve the
    /// grade filtration and fix the top-grade component.
    pub fn quantize(&self) -> MultiVector {
        let sys = self.system();
        let mut out = MultiVector::zero(sys);
        let mut rem = self.clone();
        while let Some(g) = rem.max_grade() {
            let top = rem.grade_part(g);
            out = &out + &top;
            rem = &rem - &top.symbol();
            // The grade-g part cancels exactly; guard against float crumbs.
            rem = rem.grade_cap(g.saturating_sub(1));
        }
        out.pruned()
    }

    /// Truncate to grades ≤ k (helper for the quantization recursion).
    fn grade_cap(&self, k: u32) -> MultiVector {
        MultiVector::from_terms(
            self.system(),
            self.terms().filter(|(m, _)| m.count_ones() <= k),
        )
    }
}

/// Oracle quantization by explicit antisymmetrization:
/// q(e_{i1}∧…∧e_{ik}) = (1/k!) Σ_σ sign(σ) e_{iσ(1)}·…·e_{iσ(k)}.
///
/// Exponential in the grade; used only to cross-check the recursion.
pub fn quantize_by_antisymmetrization(x: &MultiVector) -> Result<MultiVector> {
    let sys = x.system();
    let mut out = MultiVector::zero(sys);
    for (m, c) in x.terms() {
        let indices: Vec<usize> = (0..sys.generator_count())
            .filter(|&a| m >> a & 1 == 1)
            .collect();
        let k = indices.len();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut acc = MultiVector::zero(sys);
        // Heap's algorithm with sign tracking.
        let mut stack = vec![0usize; k];
        let mut sign = 1.0;
        let push = |perm: &[usize], sign: f64, acc: &mut MultiVector| -> Result<()> {
            let mut prod = MultiVector::one(sys);
            for &p in perm {
                prod = prod.clifford_product(&MultiVector::generator(sys, indices[p]))?;
            }
            *acc = &*acc + &prod.scale(sign);
            Ok(())
        };
        push(&perm, sign, &mut acc)?;
        let mut i = 1;
        while i < k {
            if stack[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(stack[i], i);
                }
                sign = -sign;
                push(&perm, sign, &mut acc)?;
                stack[i] += 1;
                i = 1;
            } else {
                stack[i] = 0;
                i += 1;
            }
        }
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        out = &out + &acc.scale(c / fact);
    }
    Ok(out.pruned())
}
