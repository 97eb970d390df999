//! Transformation combinators on dynamical r-matrices:
//! scaling r_t(μ) = t⁻¹ r(t⁻¹μ) (coupling t⁻²ε), shifting by central
//! elements, the rational t → ∞ limit, and adding subalgebra solutions.

use nalgebra::DVector;

use super::{BlockKind, DynamicalRMatrix, Provenance, RPart};
use crate::error::{Error, Result};
use crate::lie::{QuadraticLieAlgebra, SubalgebraSplit};

/// r_t(μ) = t⁻¹ r(t⁻¹ μ): a solution with coupling constant t⁻²ε.
pub fn scale_transform(r: &DynamicalRMatrix, t: f64) -> Result<DynamicalRMatrix> {
    if t == 0.0 {
        return Err(Error::domain("scale transform needs t ≠ 0"));
    }
    let arg_scale = r.arg_scale() / t;
    let shift = r.shift_vector().clone();
    let out_scale = r.out_scale() / t;
    let coupling = r.coupling() / (t * t);
    Ok(r.clone()
        .with(arg_scale, shift, out_scale, coupling, Provenance::Scaled(t)))
}

/// μ ↦ r(μ + ν) for ν central in k; the coupling is unchanged.
pub fn shift_transform(r: &DynamicalRMatrix, nu: &DVector<f64>) -> Result<DynamicalRMatrix> {
    let g = r.algebra();
    if nu.len() != g.dim() {
        return Err(Error::structural("shift vector has wrong dimension"));
    }
    for a in 0..g.dim() {
        if !r.k_indices().contains(&a) && nu[a] != 0.0 {
            return Err(Error::domain("shift must lie in the subalgebra k"));
        }
    }
    // centrality in k: [ν, e_i] = 0 for all i ∈ k
    for &i in r.k_indices() {
        let e_i = DVector::from_fn(g.dim(), |j, _| if j == i { 1.0 } else { 0.0 });
        if g.bracket(nu, &e_i).amax() > 1e-12 {
            return Err(Error::domain(format!(
                "shift is not central in k: [ν, e_{i}] ≠ 0"
            )));
        }
    }
    let shift = r.shift_vector() + nu * r.arg_scale();
    let (arg_scale, out_scale, coupling) = (r.arg_scale(), r.out_scale(), r.coupling());
    Ok(r.clone().with(
        arg_scale,
        shift,
        out_scale,
        coupling,
        Provenance::Shifted(nu.iter().copied().collect()),
    ))
}

/// The rational t → ∞ limit of the scaled split family:
/// μ ↦ λ((ad_μ|p)⁻¹), coupling 0 (the k-part vanishes in the limit).
pub fn rational_limit(
    g: &QuadraticLieAlgebra,
    split: &SubalgebraSplit,
) -> Result<DynamicalRMatrix> {
    split.validate(g)?;
    if split.p_indices.is_empty() {
        return Err(Error::structural(
            "rational limit needs a nontrivial complement",
        ));
    }
    let mut r = DynamicalRMatrix::split(g, split)?;
    r.parts = vec![RPart {
        indices: split.p_indices.clone(),
        kind: BlockKind::InverseAd,
        scale: 1.0,
    }];
    let n = g.dim();
    Ok(r.with(1.0, DVector::zeros(n), 1.0, 0.0, Provenance::Rational))
}

/// r + s for s valued in ∧²k solving the (k,k) equation with coupling δ
/// (spot-checked at a few admissible points); couplings add.
pub fn add_k_solution(
    r: &DynamicalRMatrix,
    s: &DynamicalRMatrix,
    spot_check_mu: &[DVector<f64>],
) -> Result<DynamicalRMatrix> {
    if r.algebra().name() != s.algebra().name() || r.algebra().dim() != s.algebra().dim() {
        return Err(Error::structural(
            "summands must live on the same algebra",
        ));
    }
    if s.k_indices() != r.k_indices() {
        return Err(Error::structural("summands must share the subalgebra k"));
    }
    // s must be valued in ∧²k
    let k_mask: u32 = r.k_indices().iter().map(|&i| 1u32 << i).sum();
    for mu in spot_check_mu {
        let val = s.eval(mu)?;
        for (m, _) in val.terms() {
            if m & !k_mask != 0 {
                return Err(Error::domain(
                    "added solution is not valued in ∧²k",
                ));
            }
        }
        // spot-check: s solves the (k,k) equation with its own coupling
        let sub = subalgebra(r.algebra(), r.k_indices())?;
        let sample = super::residual::cdybe_residual_for_subalgebra(s, &sub, mu)?;
        if sample > 1e-6 {
            return Err(Error::domain(format!(
                "added solution fails its own (k,k) equation: residual {sample:.3e}"
            )));
        }
    }
    let mut sum = r.clone();
    sum.merge_parts(s);
    let (a, o) = (sum.arg_scale(), sum.out_scale());
    let shift = sum.shift_vector().clone();
    let coupling = r.coupling() + s.coupling();
    if (r.arg_scale() - s.arg_scale()).abs() > 1e-15
        || (r.out_scale() - s.out_scale()).abs() > 1e-15
    {
        return Err(Error::structural(
            "summands must carry identical transform state",
        ));
    }
    Ok(sum.with(a, shift, o, coupling, Provenance::Sum))
}

/// Extract the quadratic subalgebra spanned by `indices` as an algebra in
/// its own right (used to spot-check added (k,k) solutions).
pub fn subalgebra(g: &QuadraticLieAlgebra, indices: &[usize]) -> Result<QuadraticLieAlgebra> {
    let k = indices.len();
    let b = nalgebra::DMatrix::from_fn(k, k, |i, j| g.system().pairing(indices[i], indices[j]));
    let sys = crate::blade::GeneratorSystem::from_bilinear(b)?;
    let mut brackets = Vec::new();
    for (ai, &a) in indices.iter().enumerate() {
        for (bi, &bb) in indices.iter().enumerate() {
            if ai >= bi {
                continue;
            }
            for (ci, &c) in indices.iter().enumerate() {
                let f = g.structure_constant(a, bb, c);
                if f != 0.0 {
                    brackets.push((ai, bi, ci, f));
                }
            }
            // closure was already validated by the split
        }
    }
    QuadraticLieAlgebra::new(format!("{}|k", g.name()), sys, &brackets)
}
