//! Dynamical r-matrix families (full, split, twisted), the S function, the
//! CDYBE residual, and the transformation combinators (scaling, shifting,
//! rational limits, adding subalgebra solutions).
//!
//! Every family is a sum of blocks of the form λ(F(ad_μ|block)) for an
//! analytic F; derivatives in μ are taken analytically through the
//! block-triangular trick (ad_μ is linear in μ) or by central differences.

pub mod residual;
pub mod transforms;

use nalgebra::{DMatrix, DVector};

use crate::blade::{lambda_of_block, MultiVector, System};
use crate::error::{Error, Result};
use crate::lie::{QuadraticLieAlgebra, SubalgebraSplit};
use crate::matfun::{self, eigen, series, SkewAdjointMap};

/// Default coupling constant of the trigonometric families.
pub const DEFAULT_COUPLING: f64 = 0.25;

/// How a family was constructed; transformations compose onto it.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Full,
    Split,
    Twisted,
    Scaled(f64),
    Shifted(Vec<f64>),
    Rational,
    Sum,
    ConstantForm,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Full => "full",
            Provenance::Split => "split",
            Provenance::Twisted => "twisted",
            Provenance::Scaled(_) => "scaled",
            Provenance::Shifted(_) => "shifted",
            Provenance::Rational => "rational",
            Provenance::Sum => "sum",
            Provenance::ConstantForm => "constant-form",
        }
    }
}

/// The matrix function applied to a restricted adjoint block.
#[derive(Debug, Clone)]
pub enum BlockKind {
    /// f(ad|idx) with f(z) = ½coth(z/2) − 1/z.
    FLog,
    /// coth(ad|idx / 2) (the caller supplies the ½ as a part scale).
    Coth,
    /// (c·e^{ad} + I)(c·e^{ad} − I)⁻¹ restricted to the block.
    Cayley(DMatrix<f64>),
    /// (ad|idx)⁻¹ (the rational limit).
    InverseAd,
}

impl BlockKind {
    /// Series/LU evaluation, valid on the doubled block-triangular matrices
    /// used for directional derivatives.
    fn eval(&self, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        match self {
            BlockKind::FLog => series::f_series(m),
            BlockKind::Coth => series::coth_half_series(m),
            BlockKind::Cayley(c) => {
                let k = c.nrows();
                if m.nrows() == k {
                    matfun::cayley_like_matrix(c, m)
                } else if m.nrows() == 2 * k {
                    let mut c2 = DMatrix::zeros(2 * k, 2 * k);
                    c2.view_mut((0, 0), (k, k)).copy_from(c);
                    c2.view_mut((k, k), (k, k)).copy_from(c);
                    matfun::cayley_like_matrix(&c2, m)
                } else {
                    Err(Error::structural("cayley block has unexpected size"))
                }
            }
            BlockKind::InverseAd => series::inverse(m, "restricted adjoint"),
        }
    }

    /// Domain guard on the (undoubled) block. `floor` is the singular-value
    /// floor for resolvent-type denominators; the definitional guard uses
    /// [`matfun::RESOLVENT_FLOOR`], while samplers may demand a larger
    /// margin to keep derivative stencils well-conditioned.
    fn guard(&self, m: &DMatrix<f64>, floor: f64) -> Result<()> {
        let check_sigma = |s: f64, what: &str| {
            if s <= floor {
                Err(Error::domain(format!(
                    "{what} is nearly singular (σ_min = {s:.3e}, floor {floor:.1e})"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            BlockKind::FLog => {
                let rho = eigen::spectral_radius(m);
                if rho >= matfun::SPECTRAL_GUARD {
                    return Err(Error::domain(format!(
                        "spectral radius {rho:.4} of the adjoint block exceeds {:.4}",
                        matfun::SPECTRAL_GUARD
                    )));
                }
                Ok(())
            }
            BlockKind::Coth => {
                let rho = eigen::spectral_radius(m);
                if rho >= matfun::SPECTRAL_GUARD {
                    return Err(Error::domain(format!(
                        "spectral radius {rho:.4} of the adjoint block exceeds {:.4}",
                        matfun::SPECTRAL_GUARD
                    )));
                }
                check_sigma(eigen::sigma_min(m), "restricted adjoint")
            }
            BlockKind::Cayley(c) => {
                let e = series::expm(m);
                let n = m.nrows();
                let denom = c * e - DMatrix::<f64>::identity(n, n);
                check_sigma(eigen::sigma_min(&denom), "c·exp(ad) − I on the block")
            }
            BlockKind::InverseAd => check_sigma(eigen::sigma_min(m), "restricted adjoint"),
        }
    }
}

#[derive(Debug, Clone)]
struct RPart {
    indices: Vec<usize>,
    kind: BlockKind,
    scale: f64,
}

/// A dynamical r-matrix: a map μ ↦ ∧²g on (an open subset of) a quadratic
/// subalgebra k, carrying its coupling constant, domain guard, and
/// construction provenance.
#[derive(Debug, Clone)]
pub struct DynamicalRMatrix {
    g: QuadraticLieAlgebra,
    host: System,
    k_indices: Vec<usize>,
    parts: Vec<RPart>,
    constants: Vec<MultiVector>,
    /// evaluation argument is arg_scale·μ + shift
    arg_scale: f64,
    shift: DVector<f64>,
    /// overall output scale
    out_scale: f64,
    coupling: f64,
    provenance: Provenance,
}

impl DynamicalRMatrix {
    /// r(μ) = λ(f(ad_μ)): the solution for k = g, coupling ¼.
    pub fn full(g: &QuadraticLieAlgebra) -> Self {
        let n = g.dim();
        DynamicalRMatrix {
            g: g.clone(),
            host: g.system().clone(),
            k_indices: (0..n).collect(),
            parts: vec![RPart {
                indices: (0..n).collect(),
                kind: BlockKind::FLog,
                scale: 1.0,
            }],
            constants: Vec::new(),
            arg_scale: 1.0,
            shift: DVector::zeros(n),
            out_scale: 1.0,
            coupling: DEFAULT_COUPLING,
            provenance: Provenance::Full,
        }
    }

    /// r = λ(f(ad|k)) + ½λ(coth(ad|p / 2)): the solution for k ⊂ g,
    /// coupling ¼, defined where ad_μ|p is invertible.
    pub fn split(g: &QuadraticLieAlgebra, split: &SubalgebraSplit) -> Result<Self> {
        split.validate(g)?;
        let n = g.dim();
        let mut parts = vec![RPart {
            indices: split.k_indices.clone(),
            kind: BlockKind::FLog,
            scale: 1.0,
        }];
        if !split.p_indices.is_empty() {
            parts.push(RPart {
                indices: split.p_indices.clone(),
                kind: BlockKind::Coth,
                scale: 0.5,
            });
        }
        Ok(DynamicalRMatrix {
            g: g.clone(),
            host: g.system().clone(),
            k_indices: split.k_indices.clone(),
            parts,
            constants: Vec::new(),
            arg_scale: 1.0,
            shift: DVector::zeros(n),
            out_scale: 1.0,
            coupling: DEFAULT_COUPLING,
            provenance: Provenance::Split,
        })
    }

    /// r = λ(f(ad|k)) + ½λ((c·e^{ad}+I)(c·e^{ad}−I)⁻¹|p) for an orthogonal
    /// automorphism c fixing k pointwise; coupling ¼.
    pub fn twisted(
        g: &QuadraticLieAlgebra,
        split: &SubalgebraSplit,
        automorphism: &crate::lie::OrthogonalAutomorphism,
    ) -> Result<Self> {
        split.validate(g)?;
        automorphism.validate(g, Some(split))?;
        if split.p_indices.is_empty() {
            return Err(Error::structural(
                "twisted family needs a nontrivial complement",
            ));
        }
        let c_p = SubalgebraSplit::restrict(&automorphism.matrix, &split.p_indices);
        let n = g.dim();
        Ok(DynamicalRMatrix {
            g: g.clone(),
            host: g.system().clone(),
            k_indices: split.k_indices.clone(),
            parts: vec![
                RPart {
                    indices: split.k_indices.clone(),
                    kind: BlockKind::FLog,
                    scale: 1.0,
                },
                RPart {
                    indices: split.p_indices.clone(),
                    kind: BlockKind::Cayley(c_p),
                    scale: 0.5,
                },
            ],
            constants: Vec::new(),
            arg_scale: 1.0,
            shift: DVector::zeros(n),
            out_scale: 1.0,
            coupling: DEFAULT_COUPLING,
            provenance: Provenance::Twisted,
        })
    }

    /// A constant closed 2-form on an abelian subalgebra: a solution of the
    /// (k,k) equation with coupling 0.
    pub fn constant_form(
        g: &QuadraticLieAlgebra,
        k_indices: &[usize],
        form: MultiVector,
    ) -> Result<Self> {
        g.system().check_same(form.system())?;
        if !form.is_homogeneous(2) {
            return Err(Error::domain("constant solution must be a 2-form"));
        }
        let k_mask: u32 = k_indices.iter().map(|&i| 1u32 << i).sum();
        for (m, _) in form.terms() {
            if m & !k_mask != 0 {
                return Err(Error::domain(
                    "constant solution must be valued in ∧²k",
                ));
            }
        }
        Ok(DynamicalRMatrix {
            g: g.clone(),
            host: g.system().clone(),
            k_indices: k_indices.to_vec(),
            parts: Vec::new(),
            constants: vec![form],
            arg_scale: 1.0,
            shift: DVector::zeros(g.dim()),
            out_scale: 1.0,
            coupling: 0.0,
            provenance: Provenance::ConstantForm,
        })
    }

    pub fn algebra(&self) -> &QuadraticLieAlgebra {
        &self.g
    }

    pub fn host(&self) -> &System {
        &self.host
    }

    pub fn k_indices(&self) -> &[usize] {
        &self.k_indices
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    fn effective_argument(&self, mu: &DVector<f64>) -> Result<DVector<f64>> {
        if mu.len() != self.g.dim() {
            return Err(Error::structural("argument has wrong dimension"));
        }
        for a in 0..self.g.dim() {
            if !self.k_indices.contains(&a) && mu[a] != 0.0 {
                return Err(Error::structural(
                    "argument must be supported on the subalgebra k",
                ));
            }
        }
        Ok(mu * self.arg_scale + &self.shift)
    }

    /// Check every per-block analytic guard at μ.
    pub fn guard(&self, mu: &DVector<f64>) -> Result<()> {
        self.guard_with_floor(mu, matfun::RESOLVENT_FLOOR)
    }

    /// Guard with a caller-chosen singular-value floor on resolvent
    /// denominators (samplers use larger margins than the definitional
    /// 1e-8 so derivative stencils stay well-conditioned).
    pub fn guard_with_floor(&self, mu: &DVector<f64>, floor: f64) -> Result<()> {
        let eff = self.effective_argument(mu)?;
        let ad = self.g.adjoint_matrix(&eff);
        for part in &self.parts {
            let block = SubalgebraSplit::restrict(&ad, &part.indices);
            part.kind.guard(&block, floor)?;
        }
        Ok(())
    }

    /// Evaluate r(μ).
    pub fn eval(&self, mu: &DVector<f64>) -> Result<MultiVector> {
        let eff = self.effective_argument(mu)?;
        let ad = self.g.adjoint_matrix(&eff);
        let mut out = MultiVector::zero(&self.host);
        for part in &self.parts {
            let block = SubalgebraSplit::restrict(&ad, &part.indices);
            part.kind.guard(&block, matfun::RESOLVENT_FLOOR)?;
            let val = part.kind.eval(&block)?;
            out = &out + &lambda_of_block(&self.host, &part.indices, &val).scale(part.scale);
        }
        for c in &self.constants {
            out = &out + c;
        }
        Ok(out.scale(self.out_scale))
    }

    /// Analytic partial derivative ∂r/∂μ^a through the block-triangular
    /// trick: ad_μ is linear in μ, so the direction matrix is ad_{e_a}.
    pub fn derivative_analytic(&self, mu: &DVector<f64>, a: usize) -> Result<MultiVector> {
        let eff = self.effective_argument(mu)?;
        let ad = self.g.adjoint_matrix(&eff);
        let dir_full = {
            let e_a = DVector::from_fn(self.g.dim(), |i, _| if i == a { 1.0 } else { 0.0 });
            self.g.adjoint_matrix(&e_a) * self.arg_scale
        };
        let mut out = MultiVector::zero(&self.host);
        for part in &self.parts {
            let block = SubalgebraSplit::restrict(&ad, &part.indices);
            part.kind.guard(&block, matfun::RESOLVENT_FLOOR)?;
            let dir = SubalgebraSplit::restrict(&dir_full, &part.indices);
            let doubled = matfun::block_upper(&block, &dir);
            let val = part.kind.eval(&doubled)?;
            let k = block.nrows();
            let upper_right = val.view((0, k), (k, k)).into_owned();
            out = &out
                + &lambda_of_block(&self.host, &part.indices, &upper_right).scale(part.scale);
        }
        Ok(out.scale(self.out_scale))
    }

    /// Central-difference partial derivative (independent oracle).
    pub fn derivative_fd(&self, mu: &DVector<f64>, a: usize, h: f64) -> Result<MultiVector> {
        let mut plus = mu.clone();
        plus[a] += h;
        let mut minus = mu.clone();
        minus[a] -= h;
        Ok((&self.eval(&plus)? - &self.eval(&minus)?).scale(0.5 / h))
    }

    pub(crate) fn with(
        mut self,
        arg_scale: f64,
        shift: DVector<f64>,
        out_scale: f64,
        coupling: f64,
        provenance: Provenance,
    ) -> Self {
        self.arg_scale = arg_scale;
        self.shift = shift;
        self.out_scale = out_scale;
        self.coupling = coupling;
        self.provenance = provenance;
        self
    }

    pub(crate) fn arg_scale(&self) -> f64 {
        self.arg_scale
    }

    pub(crate) fn shift_vector(&self) -> &DVector<f64> {
        &self.shift
    }

    pub(crate) fn out_scale(&self) -> f64 {
        self.out_scale
    }

    pub(crate) fn merge_parts(&mut self, other: &DynamicalRMatrix) {
        self.parts.extend(other.parts.iter().cloned());
        self.constants.extend(other.constants.iter().cloned());
    }
}

/// S(A) = J^{1/2}(A)·exp∧(λ(f(A))): the analytic factor relating exterior
/// and Clifford exponentials.
///
/// Inside the spectral guard the direct J^{1/2}/f path evaluates it; at
/// spectra beyond the guard (where that path's factors are singular even
/// though S itself stays analytic) the star-operator construction takes
/// over for core-only systems of dimension ≤ 5.
pub fn s_function(a: &SkewAdjointMap) -> Result<MultiVector> {
    match s_function_direct(a) {
        Ok(s) => Ok(s),
        Err(Error::Domain(_))
            if !a.system().has_extension() && a.system().core_dim() <= 5 =>
        {
            let combined_val = s_function_star_path(a)?;
            // S(A) lives in ∧V; read the V-supported coefficients back.
            let sys = a.system().clone();
            let v_mask = (sys.blade_count() - 1) as u32;
            let mut out = MultiVector::zero(&sys);
            let mut spill: f64 = 0.0;
            for (mask, c) in combined_val.terms() {
                if mask & !v_mask == 0 {
                    out.add_term(mask, c);
                } else {
                    spill = spill.max(c.abs());
                }
            }
            if spill > 1e-9 * out.coeff_norm().max(1.0) {
                return Err(Error::numeric(format!(
                    "star-path S(A) leaked {spill:.3e} outside ∧V"
                )));
            }
            Ok(out.pruned())
        }
        Err(e) => Err(e),
    }
}

/// The guarded direct path: J^{1/2}(A)·exp∧(λ(f(A))).
pub fn s_function_direct(a: &SkewAdjointMap) -> Result<MultiVector> {
    let j_sqrt = matfun::j_det_sqrt(a)?;
    let f = matfun::eval_matrix_function(crate::matfun::AnalyticFunctionId::FLogDeriv, a)?;
    let r = lambda_of_block(a.system(), a.system().core_indices(), &f);
    Ok(r.exp_exterior()?.scale(j_sqrt))
}

/// S(A) through the star-operator construction (valid even at spectra where
/// the direct path's determinant square root degenerates): with E = V and
/// φ = id, S(A) = *β(A) ∧ (*α(A))⁻¹ for
/// α = exp∧(λ(A) − Σ e_a φ^a), β = q⁻¹(exp(γ(A) − Σ e_a φ^a)),
/// Γ = top part of exp∧(−Σ e_a φ^a).
pub fn s_function_star_path(a: &SkewAdjointMap) -> Result<MultiVector> {
    let base = a.system();
    if base.has_extension() {
        return Err(Error::structural(
            "star path constructs its own extension block",
        ));
    }
    let n = base.generator_count();
    let combined = crate::blade::GeneratorSystem::extend(base, n);
    let a_comb = SkewAdjointMap::new(&combined, a.matrix().clone())?;
    let lambda = crate::blade::lambda_of(&a_comb);
    // −Σ_a e_a ∧ φ^a with φ = id
    let pairing_form =
        crate::blade::lambda::extension_pairing_form(&combined, &DMatrix::identity(n, n))?;
    let arg_ext = &lambda + &pairing_form;
    let alpha = arg_ext.exp_exterior()?;
    let gamma = lambda.quantize();
    let arg_cl = &gamma + &pairing_form;
    let beta = arg_cl.exp_clifford(1e-15)?.symbol();
    let top = ((1u64 << (2 * n)) - 1) as u32;
    let gamma_vol = MultiVector::from_terms(
        &combined,
        [(top, pairing_form.exp_exterior()?.coeff(top))],
    );
    // The star operator needs an invertible contraction map, so it works in
    // an auxiliary system whose pairing extends B_V non-degenerately to E
    // (contraction by S ∈ ∧V is unchanged since the blocks stay orthogonal).
    let mut aux_pairing = DMatrix::<f64>::identity(2 * n, 2 * n);
    aux_pairing
        .view_mut((0, 0), (n, n))
        .copy_from(&matfun::core_pairing(base));
    let aux = crate::blade::GeneratorSystem::from_bilinear(aux_pairing)?;
    let gamma_vol = gamma_vol.with_system(&aux)?;
    let star_alpha = gamma_vol.star(&alpha.with_system(&aux)?)?;
    let star_beta = gamma_vol.star(&beta.with_system(&aux)?)?;
    star_beta
        .wedge(&star_alpha.wedge_inverse()?)?
        .with_system(&combined)
}
