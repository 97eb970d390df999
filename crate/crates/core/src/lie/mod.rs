//! Quadratic Lie algebras: structure-constant storage, invariant validation,
//! adjoint maps, the cubic element Θ, Lie and Clifford differentials,
//! subalgebra splits, orthogonal automorphisms, and a catalog of named
//! algebras.

pub mod catalog;
pub mod differential;
pub mod schouten;

use nalgebra::{DMatrix, DVector};

use crate::blade::{lambda_of_block, MultiVector, System};
use crate::error::{Error, Result};
use crate::matfun::SkewAdjointMap;

/// Residual tolerance for the Jacobi identity and invariance of the pairing,
/// on unit-normalized structure constants.
pub const ALGEBRA_TOL: f64 = 1e-10;

/// A Lie algebra with an invariant non-degenerate pairing, stored through
/// its structure constants f^c_ab = ⟨e^c, [e_a, e_b]⟩.
#[derive(Debug, Clone)]
pub struct QuadraticLieAlgebra {
    name: String,
    system: System,
    /// ad_gens[a] is the matrix of ad_{e_a}: (ad_gens[a])_{c,b} = f^c_ab.
    ad_gens: Vec<DMatrix<f64>>,
}

/// Per-invariant residuals of a candidate algebra.
#[derive(Debug, Clone)]
pub struct AlgebraValidation {
    pub jacobi_residual: f64,
    pub invariance_residual: f64,
    pub jacobi_worst: Option<(usize, usize, usize, usize)>,
    pub invariance_worst: Option<(usize, usize, usize)>,
    pub passed: bool,
}

impl std::fmt::Display for AlgebraValidation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "jacobi residual {:.3e}{}",
            self.jacobi_residual,
            match self.jacobi_worst {
                Some((a, b, c, e)) if self.jacobi_residual > ALGEBRA_TOL =>
                    format!(" (worst at a={a}, b={b}, c={c}, e={e})"),
                _ => String::new(),
            }
        )?;
        writeln!(
            f,
            "invariance residual {:.3e}{}",
            self.invariance_residual,
            match self.invariance_worst {
                Some((a, b, c)) if self.invariance_residual > ALGEBRA_TOL =>
                    format!(" (worst at a={a}, b={b}, c={c})"),
                _ => String::new(),
            }
        )?;
        write!(f, "verdict: {}", if self.passed { "pass" } else { "FAIL" })
    }
}

impl QuadraticLieAlgebra {
    /// Build and validate. The bracket list gives f^c_ab entries as
    /// (a, b, c, value); antisymmetry in (a, b) is imposed by construction.
    pub fn new(
        name: impl Into<String>,
        system: System,
        brackets: &[(usize, usize, usize, f64)],
    ) -> Result<Self> {
        let g = Self::new_unvalidated(name, system, brackets)?;
        let report = g.validate();
        if !report.passed {
            return Err(Error::Validation(format!(
                "algebra '{}' failed validation:\n{report}",
                g.name
            )));
        }
        Ok(g)
    }

    /// Build without the Jacobi/invariance check (used by `validate` paths
    /// that want the report rather than an error).
    pub fn new_unvalidated(
        name: impl Into<String>,
        system: System,
        brackets: &[(usize, usize, usize, f64)],
    ) -> Result<Self> {
        if system.has_extension() {
            return Err(Error::structural(
                "a quadratic Lie algebra lives on a core-only system",
            ));
        }
        let n = system.generator_count();
        let mut ad_gens = vec![DMatrix::<f64>::zeros(n, n); n];
        for &(a, b, c, value) in brackets {
            if a >= n || b >= n || c >= n {
                return Err(Error::structural(format!(
                    "bracket entry ({a},{b},{c}) out of range for dimension {n}"
                )));
            }
            if a == b {
                return Err(Error::structural(format!(
                    "bracket entry [e_{a}, e_{a}] must vanish"
                )));
            }
            // f^c_ab += value, f^c_ba -= value
            ad_gens[a][(c, b)] += value;
            ad_gens[b][(c, a)] -= value;
        }
        Ok(QuadraticLieAlgebra {
            name: name.into(),
            system,
            ad_gens,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.system.generator_count()
    }

    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> f64 {
        self.ad_gens[a][(c, b)]
    }

    /// Lie bracket of coefficient vectors.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.adjoint_matrix(x) * y
    }

    /// Matrix of ad_μ = Σ_a μ^a ad_{e_a}.
    pub fn adjoint_matrix(&self, mu: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (a, ad) in self.ad_gens.iter().enumerate() {
            if mu[a] != 0.0 {
                m += ad * mu[a];
            }
        }
        m
    }

    /// ad_μ as a validated skew-adjoint map.
    pub fn adjoint(&self, mu: &DVector<f64>) -> Result<SkewAdjointMap> {
        SkewAdjointMap::new(&self.system, self.adjoint_matrix(mu))
    }

    /// Check that `host` extends this algebra's system (same core pairing,
    /// generators of g first, optional extension block appended).
    pub fn check_host(&self, host: &System) -> Result<()> {
        let n = self.dim();
        if host.core_dim() != n
            || host.core_indices() != (0..n).collect::<Vec<_>>().as_slice()
        {
            return Err(Error::structural(
                "host system must have the algebra generators as its core block",
            ));
        }
        for a in 0..n {
            for b in 0..n {
                if host.pairing(a, b) != self.system.pairing(a, b) {
                    return Err(Error::structural(
                        "host system pairing disagrees with the algebra pairing",
                    ));
                }
            }
        }
        Ok(())
    }

    /// λ^g(μ) = λ(ad_μ), the degree-2 multivector dual to the bracket,
    /// expressed over `host` (the algebra system, possibly extended).
    pub fn lambda_g(&self, host: &System, mu: &DVector<f64>) -> Result<MultiVector> {
        self.check_host(host)?;
        let core: Vec<usize> = (0..self.dim()).collect();
        Ok(lambda_of_block(host, &core, &self.adjoint_matrix(mu)))
    }

    /// γ^g(μ) = q(λ^g(μ)).
    pub fn gamma_g(&self, host: &System, mu: &DVector<f64>) -> Result<MultiVector> {
        Ok(self.lambda_g(host, mu)?.quantize())
    }

    /// The cubic element Θ = -(1/6) Σ f^{abc} e_a∧e_b∧e_c with raised
    /// structure constants f^{abc} = B(e^a, [e^b, e^c]); it satisfies
    /// ι_μ Θ = λ^g(μ).
    pub fn cubic_theta(&self, host: &System) -> Result<MultiVector> {
        self.check_host(host)?;
        let n = self.dim();
        let duals: Vec<DVector<f64>> = (0..n).map(|a| self.system.dual_vector(a)).collect();
        let mut out = MultiVector::zero(host);
        for b in 0..n {
            for c in 0..n {
                if b == c {
                    continue;
                }
                let w = self.bracket(&duals[b], &duals[c]);
                for a in 0..n {
                    if a == b || a == c {
                        continue;
                    }
                    let f_raised = w[a];
                    if f_raised == 0.0 {
                        continue;
                    }
                    let (mask, sign) = sorted_blade_sign(&[a, b, c]);
                    out.add_term(mask, -f_raised * sign / 6.0);
                }
            }
        }
        Ok(out.pruned())
    }

    /// Full validation report (Jacobi + invariance).
    pub fn validate(&self) -> AlgebraValidation {
        let n = self.dim();
        let scale = self
            .ad_gens
            .iter()
            .map(|m| m.amax())
            .fold(0.0f64, f64::max)
            .max(1.0);
        let mut jacobi_residual = 0.0f64;
        let mut jacobi_worst = None;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mut s = 0.0;
                        for d in 0..n {
                            s += self.structure_constant(a, b, d) * self.structure_constant(d, c, e)
                                + self.structure_constant(b, c, d)
                                    * self.structure_constant(d, a, e)
                                + self.structure_constant(c, a, d)
                                    * self.structure_constant(d, b, e);
                        }
                        let r = s.abs() / (scale * scale).max(1.0);
                        if r > jacobi_residual {
                            jacobi_residual = r;
                            jacobi_worst = Some((a, b, c, e));
                        }
                    }
                }
            }
        }
        let bilinear = self.system.bilinear();
        let mut invariance_residual = 0.0f64;
        let mut invariance_worst = None;
        for a in 0..n {
            let ad = &self.ad_gens[a];
            let defect = ad.transpose() * bilinear + bilinear * ad;
            for b in 0..n {
                for c in 0..n {
                    let r = defect[(b, c)].abs() / (scale * bilinear.amax()).max(1.0);
                    if r > invariance_residual {
                        invariance_residual = r;
                        invariance_worst = Some((a, b, c));
                    }
                }
            }
        }
        AlgebraValidation {
            jacobi_residual,
            invariance_residual,
            jacobi_worst,
            invariance_worst,
            passed: jacobi_residual <= ALGEBRA_TOL && invariance_residual <= ALGEBRA_TOL,
        }
    }
}

/// Sort indices into a blade mask, returning the permutation sign
/// (indices must be distinct).
pub(crate) fn sorted_blade_sign(indices: &[usize]) -> (u32, f64) {
    let mut v = indices.to_vec();
    let mut sign = 1.0;
    // insertion sort with transposition counting
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    let mut mask = 0u32;
    for &i in &v {
        mask |= 1 << i;
    }
    (mask, sign)
}

/// A quadratic subalgebra k together with its orthogonal complement p,
/// both spanned by subsets of the generator basis.
#[derive(Debug, Clone)]
pub struct SubalgebraSplit {
    pub k_indices: Vec<usize>,
    pub p_indices: Vec<usize>,
}

impl SubalgebraSplit {
    pub fn new(k_indices: Vec<usize>, p_indices: Vec<usize>) -> Self {
        SubalgebraSplit {
            k_indices,
            p_indices,
        }
    }

    /// The trivial split k = g.
    pub fn full(dim: usize) -> Self {
        SubalgebraSplit {
            k_indices: (0..dim).collect(),
            p_indices: Vec::new(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.p_indices.is_empty()
    }

    pub fn validate(&self, g: &QuadraticLieAlgebra) -> Result<()> {
        let n = g.dim();
        let mut seen = vec![false; n];
        for &i in self.k_indices.iter().chain(self.p_indices.iter()) {
            if i >= n {
                return Err(Error::Validation(format!(
                    "split index {i} out of range for dimension {n}"
                )));
            }
            if seen[i] {
                return Err(Error::Validation(format!("split repeats index {i}")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Validation(
                "split must cover all generators".to_string(),
            ));
        }
        // B block-diagonal across the split
        for &i in &self.k_indices {
            for &j in &self.p_indices {
                if g.system().pairing(i, j).abs() > 1e-12 {
                    return Err(Error::Validation(format!(
                        "pairing must be block-diagonal across the split; B({i},{j}) != 0"
                    )));
                }
            }
        }
        // [k, k] ⊆ k
        for &i in &self.k_indices {
            for &j in &self.k_indices {
                for &c in &self.p_indices {
                    if g.structure_constant(i, j, c).abs() > 1e-12 {
                        return Err(Error::Validation(format!(
                            "subalgebra is not closed: f^{c}_{{{i},{j}}} != 0"
                        )));
                    }
                }
            }
        }
        // B|_k non-degenerate
        let k = self.k_indices.len();
        if k > 0 {
            let bk = DMatrix::from_fn(k, k, |i, j| {
                g.system().pairing(self.k_indices[i], self.k_indices[j])
            });
            if bk.lu().determinant().abs() < 1e-12 {
                return Err(Error::Validation(
                    "pairing restricted to the subalgebra is degenerate".to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Restriction of a matrix on g to the block spanned by `indices`.
    pub fn restrict(m: &DMatrix<f64>, indices: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(indices.len(), indices.len(), |i, j| {
            m[(indices[i], indices[j])]
        })
    }
}

/// An orthogonal Lie algebra automorphism, optionally required to fix a
/// subalgebra pointwise.
#[derive(Debug, Clone)]
pub struct OrthogonalAutomorphism {
    pub matrix: DMatrix<f64>,
}

impl OrthogonalAutomorphism {
    pub fn new(matrix: DMatrix<f64>) -> Self {
        OrthogonalAutomorphism { matrix }
    }

    pub fn validate(&self, g: &QuadraticLieAlgebra, split: Option<&SubalgebraSplit>) -> Result<()> {
        let n = g.dim();
        let c = &self.matrix;
        if c.nrows() != n || c.ncols() != n {
            return Err(Error::Validation("automorphism has wrong shape".to_string()));
        }
        let b = g.system().bilinear();
        if (c.transpose() * b * c - b).amax() > 1e-10 * b.amax().max(1.0) {
            return Err(Error::Validation(
                "automorphism does not preserve the pairing".to_string(),
            ));
        }
        for a in 0..n {
            for bb in 0..n {
                let ea = DVector::from_fn(n, |i, _| if i == a { 1.0 } else { 0.0 });
                let eb = DVector::from_fn(n, |i, _| if i == bb { 1.0 } else { 0.0 });
                let lhs = c * g.bracket(&ea, &eb);
                let rhs = g.bracket(&(c * ea), &(c * eb));
                if (lhs - rhs).amax() > 1e-10 {
                    return Err(Error::Validation(format!(
                        "automorphism fails to intertwine the bracket on (e_{a}, e_{bb})"
                    )));
                }
            }
        }
        if let Some(split) = split {
            for &i in &split.k_indices {
                let ei = DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
                if (c * &ei - ei).amax() > 1e-10 {
                    return Err(Error::Validation(format!(
                        "automorphism must fix the subalgebra pointwise (moves e_{i})"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blade::GeneratorSystem;
    use nalgebra::dvector;

    #[test]
    fn so3_validates() {
        let g = catalog::so3();
        let report = g.algebra.validate();
        assert!(report.passed, "{report}");
    }

    #[test]
    fn broken_structure_constant_fails() {
        let sys = GeneratorSystem::euclidean(3);
        // so(3) with one entry corrupted
        let g = QuadraticLieAlgebra::new_unvalidated(
            "broken",
            sys,
            &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 0.7)],
        )
        .unwrap();
        let report = g.validate();
        assert!(!report.passed);
        assert!(report.jacobi_residual > ALGEBRA_TOL || report.invariance_residual > ALGEBRA_TOL);
    }

    #[test]
    fn abelian_validates() {
        let sys = GeneratorSystem::euclidean(4);
        let g = QuadraticLieAlgebra::new("abelian4", sys, &[]).unwrap();
        assert!(g.validate().passed);
    }

    #[test]
    fn so3_adjoint_is_rotation_generator() {
        let g = catalog::so3();
        let ad = g.algebra.adjoint(&dvector![0.0, 0.0, 1.0]).unwrap();
        // ad_{e₃} rotates the (1,2)-plane
        let m = ad.matrix();
        assert!((m[(1, 0)] - 1.0).abs() < 1e-15);
        assert!((m[(0, 1)] + 1.0).abs() < 1e-15);
        assert!(m.row(2).amax() < 1e-15);
    }

    #[test]
    fn adjoint_skewness_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = catalog::so21();
        let b = g.algebra.system().bilinear().clone();
        for _ in 0..50 {
            let mu = dvector![
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0)
            ];
            let ad = g.algebra.adjoint_matrix(&mu);
            assert!((ad.transpose() * &b + &b * &ad).amax() < 1e-12);
        }
    }

    #[test]
    fn theta_for_so3() {
        let g = catalog::so3();
        let theta = g.algebra.cubic_theta(g.algebra.system()).unwrap();
        // Θ = -e₁∧e₂∧e₃
        assert_eq!(theta.term_count(), 1);
        assert!((theta.coeff(0b111) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn theta_contraction_gives_lambda() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for entry in [catalog::so3(), catalog::so21(), catalog::semidirect2()] {
            let g = &entry.algebra;
            let sys = g.system();
            let theta = g.cubic_theta(sys).unwrap();
            for _ in 0..20 {
                let mu =
                    DVector::from_fn(g.dim(), |_, _| rng.random_range(-1.0..1.0));
                let contracted = theta.contract_vector(&mu).unwrap();
                let lambda = g.lambda_g(sys, &mu).unwrap();
                assert!(
                    (&contracted - &lambda).coeff_norm() < 1e-12,
                    "algebra {}",
                    g.name()
                );
            }
        }
    }

    #[test]
    fn lambda_g_pairing_identity() {
        // ι_ξ ι_η λ^g(μ) = B(μ, [ξ,η])
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let g = catalog::so3().algebra;
        let sys = g.system().clone();
        for _ in 0..20 {
            let mut v = || DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
            let (mu, xi, eta) = (v(), v(), v());
            let lam = g.lambda_g(&sys, &mu).unwrap();
            let val = lam
                .contract_vector(&eta)
                .unwrap()
                .contract_vector(&xi)
                .unwrap()
                .scalar_part();
            let expect = (g.bracket(&xi, &eta).transpose() * sys.bilinear() * &mu)[(0, 0)];
            assert!((val - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn split_validation() {
        let entry = catalog::so3();
        let split = entry.split.unwrap();
        split.validate(&entry.algebra).unwrap();
        // a non-closed "subalgebra" is rejected: [e₁,e₂] = e₃ leaves span(e₁,e₂)
        let bad = SubalgebraSplit::new(vec![0, 1], vec![2]);
        assert!(bad.validate(&entry.algebra).is_err());
    }
}
