//! The named identity suites: each verifies one family of identities at
//! seeded random samples and produces a [`ResidualReport`].

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config;
use super::report::ResidualReport;
use super::sampling::{random_skew_adjoint, sample_admissible};
use crate::blade::lambda::extension_pairing_form;
use crate::blade::{gamma_of, lambda_of, operator_of, GeneratorSystem, MultiVector, System};
use crate::error::{Error, Result};
use crate::lie::catalog::CatalogEntry;
use crate::lie::differential::{CliffordDifferential, LieDifferential};
use crate::lie::QuadraticLieAlgebra;
use crate::matfun::{series, SkewAdjointMap};
use crate::rmatrix::residual::{
    cdybe_residual, j_u_identity_residual, norm_kind, residual_norm, DerivativeMode,
};
use crate::rmatrix::transforms;
use crate::rmatrix::{s_function, DynamicalRMatrix};
use crate::spinor::symbols;
use crate::spinor::factor;

/// Seed used when neither the CLI flag nor CDYBE_SEED is given.
pub const DEFAULT_SEED: u64 = 7;

/// The verifiable identities addressed by the harness and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[allow(non_camel_case_types)]
pub enum IdentityId {
    KEY,
    ALTER,
    C1,
    C2,
    C3,
    RELATED,
    RCONJ,
    THETA_SQ,
    DELTA_SQ,
    CDYBE_FULL,
    CDYBE_SPLIT,
    CDYBE_TWISTED,
    CDYBE_SCALED,
    CDYBE_RATIONAL,
    CDYBE_SUM,
    REMARK_JU,
    RHO_FACTOR,
    SYMBOL_I,
    SYMBOL_II,
}

impl IdentityId {
    pub const ALL: [IdentityId; 19] = [
        IdentityId::KEY,
        IdentityId::ALTER,
        IdentityId::C1,
        IdentityId::C2,
        IdentityId::C3,
        IdentityId::RELATED,
        IdentityId::RCONJ,
        IdentityId::THETA_SQ,
        IdentityId::DELTA_SQ,
        IdentityId::CDYBE_FULL,
        IdentityId::CDYBE_SPLIT,
        IdentityId::CDYBE_TWISTED,
        IdentityId::CDYBE_SCALED,
        IdentityId::CDYBE_RATIONAL,
        IdentityId::CDYBE_SUM,
        IdentityId::REMARK_JU,
        IdentityId::RHO_FACTOR,
        IdentityId::SYMBOL_I,
        IdentityId::SYMBOL_II,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::KEY => "KEY",
            IdentityId::ALTER => "ALTER",
            IdentityId::C1 => "C1",
            IdentityId::C2 => "C2",
            IdentityId::C3 => "C3",
            IdentityId::RELATED => "RELATED",
            IdentityId::RCONJ => "RCONJ",
            IdentityId::THETA_SQ => "THETA_SQ",
            IdentityId::DELTA_SQ => "DELTA_SQ",
            IdentityId::CDYBE_FULL => "CDYBE_FULL",
            IdentityId::CDYBE_SPLIT => "CDYBE_SPLIT",
            IdentityId::CDYBE_TWISTED => "CDYBE_TWISTED",
            IdentityId::CDYBE_SCALED => "CDYBE_SCALED",
            IdentityId::CDYBE_RATIONAL => "CDYBE_RATIONAL",
            IdentityId::CDYBE_SUM => "CDYBE_SUM",
            IdentityId::REMARK_JU => "REMARK_JU",
            IdentityId::RHO_FACTOR => "RHO_FACTOR",
            IdentityId::SYMBOL_I => "SYMBOL_I",
            IdentityId::SYMBOL_II => "SYMBOL_II",
        }
    }

    /// Default tolerance: 1e-10 for exact operator identities, 1e-9 for
    /// analytic paths, 1e-6 for finite-difference paths.
    pub fn default_tolerance(&self, mode: DerivativeMode) -> f64 {
        match self {
            IdentityId::RELATED
            | IdentityId::RCONJ
            | IdentityId::THETA_SQ
            | IdentityId::DELTA_SQ => 1e-10,
            IdentityId::CDYBE_FULL
            | IdentityId::CDYBE_SPLIT
            | IdentityId::CDYBE_TWISTED
            | IdentityId::CDYBE_SCALED
            | IdentityId::CDYBE_RATIONAL
            | IdentityId::CDYBE_SUM
            | IdentityId::REMARK_JU => mode.default_tolerance(),
            _ => 1e-9,
        }
    }
}

impl std::str::FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_uppercase();
        IdentityId::ALL
            .iter()
            .find(|id| id.name() == upper)
            .copied()
            .ok_or_else(|| Error::structural(format!("unknown identity '{s}'")))
    }
}

/// The r-matrix families of the CDYBE suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdybeFamily {
    Full,
    Split,
    Twisted,
    Scaled,
    Rational,
    Sum,
}

impl CdybeFamily {
    pub const ALL: [CdybeFamily; 6] = [
        CdybeFamily::Full,
        CdybeFamily::Split,
        CdybeFamily::Twisted,
        CdybeFamily::Scaled,
        CdybeFamily::Rational,
        CdybeFamily::Sum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CdybeFamily::Full => "full",
            CdybeFamily::Split => "split",
            CdybeFamily::Twisted => "twisted",
            CdybeFamily::Scaled => "scaled",
            CdybeFamily::Rational => "rational",
            CdybeFamily::Sum => "sum",
        }
    }

    pub fn identity_id(&self) -> IdentityId {
        match self {
            CdybeFamily::Full => IdentityId::CDYBE_FULL,
            CdybeFamily::Split => IdentityId::CDYBE_SPLIT,
            CdybeFamily::Twisted => IdentityId::CDYBE_TWISTED,
            CdybeFamily::Scaled => IdentityId::CDYBE_SCALED,
            CdybeFamily::Rational => IdentityId::CDYBE_RATIONAL,
            CdybeFamily::Sum => IdentityId::CDYBE_SUM,
        }
    }
}

impl std::str::FromStr for CdybeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CdybeFamily::ALL
            .iter()
            .find(|f| f.name() == s.to_lowercase())
            .copied()
            .ok_or_else(|| Error::structural(format!("unknown family '{s}'")))
    }
}

/// Options shared by the identity runners.
#[derive(Debug, Clone)]
pub struct CaseOptions {
    /// Catalog name or config path supplying a Lie algebra.
    pub algebra: Option<String>,
    /// Plain Euclidean space dimension for vector-space identities.
    pub dim: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub mode: DerivativeMode,
    /// Pin the 2D rotation angle instead of sampling (C1/C2/KEY at n = 2).
    pub theta: Option<f64>,
    /// Pin a single μ instead of sampling.
    pub mu: Option<Vec<f64>>,
    /// Scaling parameter of the scaled family.
    pub scale_t: f64,
}

impl Default for CaseOptions {
    fn default() -> Self {
        CaseOptions {
            algebra: None,
            dim: None,
            samples: 20,
            seed: DEFAULT_SEED,
            tolerance: None,
            mode: DerivativeMode::Analytic,
            theta: None,
            mu: None,
            scale_t: 2.0,
        }
    }
}

// ---------------------------------------------------------------------
// Core case computations
// ---------------------------------------------------------------------

/// Residual of the factorization identity
/// q(ι_{S(A)} exp∧(λ(A) − Σ e_a φ^a)) = exp_Cl(γ(A) − Σ e_a φ^a)
/// over V ⊕ E with exactly-zero pairing on E; `phi` is |E|×|V|.
/// Also returns the residual between the two alternative right-hand sides
/// (the ALTER form), computed when `with_alter` is set.
pub fn key_identity_residuals(
    base: &System,
    a_mat: &DMatrix<f64>,
    phi: &DMatrix<f64>,
    with_alter: bool,
) -> Result<(f64, f64)> {
    let ext_dim = phi.nrows();
    let combined = GeneratorSystem::extend(base, ext_dim);
    let a = SkewAdjointMap::new(&combined, a_mat.clone())?;
    let pairing_form = extension_pairing_form(&combined, phi)?;
    let lambda = lambda_of(&a);
    let gamma = lambda.quantize();
    let s = s_function(&a)?;
    let lhs = (&lambda + &pairing_form)
        .exp_exterior()?
        .contract_multi(&s)?
        .quantize();
    let rhs = (&gamma + &pairing_form).exp_clifford(1e-15)?;
    let key_res = residual_norm(&(&lhs - &rhs));
    if !with_alter {
        return Ok((key_res, 0.0));
    }
    // ALTER right side: exp∧(−ϖ(A)) · exp_Cl(γ(A)) · exp_Cl(−Σ e_a ψ^a)
    // with ψ = φ∘jR(A) and ϖ(A) the φ-pushforward of λ(g(A)) into ∧²E.
    let psi = phi * series::jr_series(a_mat)?;
    let psi_form = extension_pairing_form(&combined, &psi)?;
    let g_mat = series::g_series(a_mat)?;
    let lambda_g = crate::blade::lambda_of_block(&combined, combined.core_indices(), &g_mat);
    let varpi = push_forward_two_form(&combined, &lambda_g, phi)?;
    let rhs_alter = (&varpi * -1.0)
        .exp_exterior()?
        .clifford_product(&gamma.exp_clifford(1e-15)?)?
        .clifford_product(&psi_form.exp_clifford(1e-15)?)?;
    let alter_res = residual_norm(&(&lhs - &rhs_alter));
    Ok((key_res, alter_res.max(residual_norm(&(&rhs - &rhs_alter)))))
}

/// Push a ∧²V form through φ: V → E into ∧²E.
fn push_forward_two_form(
    combined: &System,
    form: &MultiVector,
    phi: &DMatrix<f64>,
) -> Result<MultiVector> {
    let core = combined.core_dim();
    let ext = combined.ext_indices();
    let mut out = MultiVector::zero(combined);
    for (mask, w) in form.terms() {
        let a = mask.trailing_zeros() as usize;
        let b = (31 - mask.leading_zeros()) as usize;
        if a >= core || b >= core {
            return Err(Error::structural("push-forward input must live on V"));
        }
        for (ea, &ia) in ext.iter().enumerate() {
            for (eb, &ib) in ext.iter().enumerate() {
                if ia >= ib {
                    continue;
                }
                let coeff = w * (phi[(ea, a)] * phi[(eb, b)] - phi[(eb, a)] * phi[(ea, b)]);
                if coeff != 0.0 {
                    out.add_term((1 << ia) | (1 << ib), coeff);
                }
            }
        }
    }
    Ok(out.pruned())
}

/// Residuals of the closed-form symbol expressions against the exponential
/// series: formula I (tangent form) and formula II (volume form).
pub fn symbol_formula_residual(a: &SkewAdjointMap, volume_form: bool) -> Result<f64> {
    let series_side = gamma_of(a).exp_clifford(1e-15)?.symbol();
    let formula = if volume_form {
        symbols::symbol_formula_ii_exp(a)?
    } else {
        symbols::symbol_formula_i_exp(a)?
    };
    Ok(residual_norm(&(&series_side - &formula)))
}

/// One C3 instance: a random orthogonal c built from reflection pairs in
/// the planes of a commuting block rotation A, its Pin lift, and the
/// up-to-sign residual of the volume-form expression for c·exp(A).
pub fn c3_instance_residual(sys: &System, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = sys.generator_count();
    if n % 2 != 0 {
        return Err(Error::domain("C3 instances need even dimension"));
    }
    // random orthonormal frame
    let raw = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0f64));
    let q = raw.qr().q();
    let mut a_mat = DMatrix::<f64>::zeros(n, n);
    let mut c_mat = DMatrix::<f64>::identity(n, n);
    let mut reflections: Vec<DVector<f64>> = Vec::new();
    for block in 0..n / 2 {
        let u = q.column(2 * block).into_owned();
        let v = q.column(2 * block + 1).into_owned();
        let theta = rng.random_range(0.3..1.2f64);
        let phi = rng.random_range(0.5..2.5f64);
        // A-block: θ(v uᵀ − u vᵀ); c-block: rotation by φ via two reflections
        a_mat += (&v * u.transpose() - &u * v.transpose()) * theta;
        let w1 = u.clone();
        let w2 = &u * (phi / 2.0).cos() + &v * (phi / 2.0).sin();
        c_mat = symbols::reflection_matrix(sys, &w2)? * symbols::reflection_matrix(sys, &w1)? * c_mat;
        reflections.push(w1);
        reflections.push(w2);
    }
    let a = SkewAdjointMap::new(sys, a_mat)?;
    let lift = symbols::pin_lift_from_reflections(sys, &reflections)?;
    let lifted = lift.clifford_product(&gamma_of(&a).exp_clifford(1e-15)?)?;
    let lhs = lifted.symbol();
    let rhs = symbols::symbol_formula_ii_general(sys, &(&c_mat * series::expm(a.matrix())))?;
    Ok(residual_norm(&(&lhs - &rhs)).min(residual_norm(&(&lhs + &rhs))))
}

/// Operator residual of q⁻¹∘δ∘q = d + ¼ι_Θ.
pub fn related_operator_residual(g: &QuadraticLieAlgebra) -> Result<f64> {
    let sys = g.system().clone();
    let delta = CliffordDifferential::new(g, &sys)?;
    let d = LieDifferential::new(g, &sys)?;
    let theta = g.cubic_theta(&sys)?;
    let lhs = operator_of(&sys, |x| Ok(delta.apply(&x.quantize())?.symbol()))?;
    let rhs = d
        .operator()?
        .add(&operator_of(&sys, |x| x.contract_multi(&theta))?.scale(0.25))?;
    Ok(lhs.max_abs_diff(&rhs))
}

/// Operator residual of the contraction-conjugation identity
/// exp(−ι_r)∘d∘exp(ι_r) = d − ½ι_{[r,r]} + Σ_a e^a∘ι_{[e_a,r]} − ι_u.
pub fn rconj_operator_residual(g: &QuadraticLieAlgebra, r: &MultiVector) -> Result<f64> {
    let sys = g.system().clone();
    if !r.is_homogeneous(2) {
        return Err(Error::domain("conjugation identity needs a degree-2 r"));
    }
    let d = LieDifferential::new(g, &sys)?.operator()?;
    let exp_r = r.exp_exterior()?;
    let exp_neg = (&(*r) * -1.0).exp_exterior()?;
    let conj_pos = operator_of(&sys, |x| x.contract_multi(&exp_r))?;
    let conj_neg = operator_of(&sys, |x| x.contract_multi(&exp_neg))?;
    let lhs = conj_neg.compose(&d)?.compose(&conj_pos)?;

    let rr = g.schouten_bracket(&sys, r, r)?;
    let i_rr = operator_of(&sys, |x| x.contract_multi(&rr))?;
    let u = g.bracket_contraction_u(r)?;
    let u_mv = MultiVector::vector(&sys, &u)?;
    let i_u = operator_of(&sys, |x| x.contract_multi(&u_mv))?;
    let mut rhs = d.sub(&i_rr.scale(0.5))?.sub(&i_u)?;
    for a in 0..g.dim() {
        let e_a = MultiVector::generator(&sys, a);
        let bracket = g.schouten_bracket(&sys, &e_a, r)?;
        let dual_a = MultiVector::vector(&sys, &g.system().dual_vector(a))?;
        let term = operator_of(&sys, |x| dual_a.wedge(&x.contract_multi(&bracket)?))?;
        rhs = rhs.add(&term)?;
    }
    Ok(lhs.max_abs_diff(&rhs))
}

/// Non-scalar residual and scalar value of q(Θ)².
pub fn theta_square(g: &QuadraticLieAlgebra) -> Result<(f64, f64)> {
    let sys = g.system().clone();
    let q_theta = g.cubic_theta(&sys)?.quantize();
    let sq = q_theta.clifford_product(&q_theta)?;
    let scalar = sq.scalar_part();
    let mut nonscalar = sq;
    nonscalar.add_term(0, -scalar);
    Ok((residual_norm(&nonscalar.pruned()), scalar))
}

/// Operator residual of δ² = 0.
pub fn delta_square_residual(g: &QuadraticLieAlgebra) -> Result<f64> {
    let sys = g.system().clone();
    let delta = CliffordDifferential::new(g, &sys)?.operator()?;
    Ok(delta.compose(&delta)?.max_abs())
}

/// Closedness of γ^g(μ) − Σ e_a φ^a under δ + Σ ∂/∂μ^a φ^a, realized on the
/// extension block (the μ-derivative is exact since γ^g is linear in μ).
pub fn gamma_closedness_residual(
    g: &QuadraticLieAlgebra,
    phi: &DMatrix<f64>,
    mu: &DVector<f64>,
) -> Result<f64> {
    let combined = GeneratorSystem::extend(g.system(), phi.nrows());
    let pairing_form = extension_pairing_form(&combined, phi)?;
    let gamma_mu = g.gamma_g(&combined, mu)?;
    let x = &gamma_mu + &pairing_form;
    let q_theta = g.cubic_theta(&combined)?.quantize();
    // δX = [q(Θ), X] (X is even)
    let delta_x = &q_theta.clifford_product(&x)? - &x.clifford_product(&q_theta)?;
    let mut derivative_term = MultiVector::zero(&combined);
    let ext = combined.ext_indices();
    for a in 0..g.dim() {
        // ∂X/∂μ^a = γ^g(e_a), multiplied by φ^a = φ(e^a)
        let e_a = DVector::from_fn(g.dim(), |i, _| if i == a { 1.0 } else { 0.0 });
        let gamma_a = g.gamma_g(&combined, &e_a)?;
        let dual = g.system().dual_vector(a);
        let mut phi_a = MultiVector::zero(&combined);
        for (epos, &eidx) in ext.iter().enumerate() {
            let mut coeff = 0.0;
            for j in 0..g.dim() {
                coeff += phi[(epos, j)] * dual[j];
            }
            phi_a.add_term(1 << eidx, coeff);
        }
        derivative_term = &derivative_term + &gamma_a.clifford_product(&phi_a)?;
    }
    Ok(residual_norm(&(&delta_x + &derivative_term)))
}

/// The exterior counterpart: λ^g(μ) − Σ e^a φ_a is closed under
/// d + Σ ∂/∂μ_a φ_a on the extended system.
pub fn lambda_closedness_residual(
    g: &QuadraticLieAlgebra,
    phi: &DMatrix<f64>,
    mu: &DVector<f64>,
) -> Result<f64> {
    let combined = GeneratorSystem::extend(g.system(), phi.nrows());
    let d = LieDifferential::new(g, &combined)?;
    let ext = combined.ext_indices();
    let n = g.dim();
    // X = λ^g(μ) − Σ_a e^a ∧ φ_a with φ_a = φ(e_a)
    let mut coupling = MultiVector::zero(&combined);
    for a in 0..n {
        let dual = g.system().dual_vector(a);
        for (epos, &eidx) in ext.iter().enumerate() {
            let coeff = phi[(epos, a)];
            if coeff == 0.0 {
                continue;
            }
            // e^a ∧ ε_e picks up the dual vector components
            for j in 0..n {
                if dual[j] != 0.0 {
                    coupling.add_term((1 << j) | (1 << eidx), -coeff * dual[j]);
                }
            }
        }
    }
    let x = &g.lambda_g(&combined, mu)? + &coupling;
    let dx = d.apply(&x)?;
    // Σ_a (∂X/∂μ_a) ∧ φ_a = Σ_a λ^g(e^a) ∧ φ_a (derivative along dual coords)
    let mut derivative_term = MultiVector::zero(&combined);
    for a in 0..n {
        let dual = g.system().dual_vector(a);
        let mut padded = DVector::zeros(combined.generator_count());
        padded.rows_mut(0, n).copy_from(&dual);
        let lam = g.lambda_g(&combined, &padded)?;
        let mut phi_a = MultiVector::zero(&combined);
        for (epos, &eidx) in ext.iter().enumerate() {
            phi_a.add_term(1 << eidx, phi[(epos, a)]);
        }
        derivative_term = &derivative_term + &lam.wedge(&phi_a)?;
    }
    Ok(residual_norm(&(&dx + &derivative_term)))
}

// ---------------------------------------------------------------------
// Suite runners
// ---------------------------------------------------------------------

fn resolve_entry(opts: &CaseOptions) -> Result<Option<CatalogEntry>> {
    match &opts.algebra {
        Some(spec) => Ok(Some(config::load_algebra(spec)?)),
        None => Ok(None),
    }
}

fn euclidean_dim(opts: &CaseOptions, default: usize) -> usize {
    opts.dim.unwrap_or(default)
}

fn algebra_label(opts: &CaseOptions, entry: &Option<CatalogEntry>, default_dim: usize) -> String {
    match entry {
        Some(e) => e.algebra.name().to_string(),
        None => format!("euclidean{}", euclidean_dim(opts, default_dim)),
    }
}

/// Sampled (A, system) cases: adjoint maps of a Lie algebra when an algebra
/// is given, plain random skew-adjoint maps otherwise.
fn skew_cases(
    opts: &CaseOptions,
    entry: &Option<CatalogEntry>,
    default_dim: usize,
    rho_max: f64,
    even_only: bool,
) -> Result<(System, Vec<SkewAdjointMap>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    match entry {
        Some(e) => {
            let g = &e.algebra;
            let sys = g.system().clone();
            if even_only && g.dim() % 2 != 0 {
                return Err(Error::domain(
                    "this identity needs an even-dimensional space",
                ));
            }
            let all: Vec<usize> = (0..g.dim()).collect();
            let mus = sample_admissible(g, &all, opts.samples, opts.seed, |mu| {
                crate::matfun::eigen::spectral_radius(&g.adjoint_matrix(mu)) < rho_max
            })?;
            let cases = mus
                .iter()
                .map(|mu| g.adjoint(mu))
                .collect::<Result<Vec<_>>>()?;
            Ok((sys, cases))
        }
        None => {
            let n = euclidean_dim(opts, default_dim);
            if even_only && n % 2 != 0 {
                return Err(Error::domain(
                    "this identity needs an even-dimensional space",
                ));
            }
            let sys = GeneratorSystem::euclidean(n);
            let mut cases = Vec::with_capacity(opts.samples);
            if let Some(theta) = opts.theta {
                if n != 2 {
                    return Err(Error::structural("--theta pins a 2-dimensional case"));
                }
                let m = nalgebra::dmatrix![0.0, -theta; theta, 0.0];
                cases.push(SkewAdjointMap::new(&sys, m)?);
            }
            while cases.len() < opts.samples {
                cases.push(random_skew_adjoint(&sys, &mut rng, rho_max));
            }
            Ok((sys, cases))
        }
    }
}

/// Run one identity suite and return its report.
pub fn run_identity(id: IdentityId, opts: &CaseOptions) -> Result<ResidualReport> {
    let start = std::time::Instant::now();
    let mut report = dispatch_identity(id, opts)?;
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn dispatch_identity(id: IdentityId, opts: &CaseOptions) -> Result<ResidualReport> {
    let tolerance = opts
        .tolerance
        .unwrap_or_else(|| id.default_tolerance(opts.mode));
    match id {
        IdentityId::KEY | IdentityId::ALTER => run_key_alter(id, opts, tolerance),
        IdentityId::C1 => run_c1_c2(id, opts, tolerance, false),
        IdentityId::C2 => run_c1_c2(id, opts, tolerance, true),
        IdentityId::C3 => run_c3(opts, tolerance),
        IdentityId::RELATED
        | IdentityId::RCONJ
        | IdentityId::THETA_SQ
        | IdentityId::DELTA_SQ => run_differential(id, opts, tolerance),
        IdentityId::CDYBE_FULL => run_cdybe(CdybeFamily::Full, opts, tolerance),
        IdentityId::CDYBE_SPLIT => run_cdybe(CdybeFamily::Split, opts, tolerance),
        IdentityId::CDYBE_TWISTED => run_cdybe(CdybeFamily::Twisted, opts, tolerance),
        IdentityId::CDYBE_SCALED => run_cdybe(CdybeFamily::Scaled, opts, tolerance),
        IdentityId::CDYBE_RATIONAL => run_cdybe(CdybeFamily::Rational, opts, tolerance),
        IdentityId::CDYBE_SUM => run_cdybe(CdybeFamily::Sum, opts, tolerance),
        IdentityId::REMARK_JU => run_remark(opts, tolerance),
        IdentityId::RHO_FACTOR => run_rho_factor(opts, tolerance),
        IdentityId::SYMBOL_I => run_symbol(opts, tolerance, false),
        IdentityId::SYMBOL_II => run_symbol(opts, tolerance, true),
    }
}

fn run_key_alter(id: IdentityId, opts: &CaseOptions, tolerance: f64) -> Result<ResidualReport> {
    let entry = resolve_entry(opts)?;
    let (sys, cases) = skew_cases(opts, &entry, 3, 2.5, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e3779b97f4a7800);
    let mut report = ResidualReport::new(
        id.name(),
        algebra_label(opts, &entry, 3),
        opts.seed,
        norm_kind(&sys),
        tolerance,
    );
    let n = sys.generator_count();
    for (idx, a) in cases.iter().enumerate() {
        // alternate between E = 0 and E = V; φ = id for the algebra case,
        // random otherwise
        let phi = if idx % 2 == 0 && id == IdentityId::KEY {
            DMatrix::<f64>::zeros(0, n)
        } else if entry.is_some() {
            DMatrix::<f64>::identity(n, n)
        } else {
            DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0f64))
        };
        let with_alter = id == IdentityId::ALTER;
        let (key_res, alter_res) =
            key_identity_residuals(&sys, a.matrix(), &phi, with_alter)?;
        let residual = if with_alter { alter_res } else { key_res };
        report.push(
            vec![idx as f64, phi.nrows() as f64],
            residual,
            vec![key_res],
        );
    }
    Ok(report)
}

fn run_c1_c2(
    id: IdentityId,
    opts: &CaseOptions,
    tolerance: f64,
    volume_form: bool,
) -> Result<ResidualReport> {
    let entry = resolve_entry(opts)?;
    // formula II needs even definite dimension; both need tanh/pole guards
    let default_dim = if volume_form { 4 } else { 3 };
    let (sys, cases) = skew_cases(opts, &entry, default_dim, 2.6, volume_form)?;
    let mut report = ResidualReport::new(
        id.name(),
        algebra_label(opts, &entry, default_dim),
        opts.seed,
        norm_kind(&sys),
        tolerance,
    );
    for a in &cases {
        let residual = symbol_formula_residual(a, volume_form)?;
        report.push(vec![a.spectral_radius()], residual, vec![]);
    }
    Ok(report)
}

fn run_c3(opts: &CaseOptions, tolerance: f64) -> Result<ResidualReport> {
    let n = euclidean_dim(opts, 4);
    if n % 2 != 0 {
        return Err(Error::domain("C3 needs an even-dimensional space"));
    }
    let sys = GeneratorSystem::euclidean(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = ResidualReport::new(
        "C3",
        format!("euclidean{n}"),
        opts.seed,
        norm_kind(&sys),
        tolerance,
    );
    for idx in 0..opts.samples {
        let residual = c3_instance_residual(&sys, &mut rng)?;
        report.push(vec![idx as f64], residual, vec![]);
    }
    Ok(report)
}

fn run_differential(id: IdentityId, opts: &CaseOptions, tolerance: f64) -> Result<ResidualReport> {
    let entry = resolve_entry(opts)?
        .ok_or_else(|| Error::structural("differential identities need --algebra"))?;
    let g = &entry.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = ResidualReport::new(
        id.name(),
        g.name(),
        opts.seed,
        norm_kind(g.system()),
        tolerance,
    );
    match id {
        IdentityId::RELATED => {
            report.push(vec![0.0], related_operator_residual(g)?, vec![]);
            // extension-block closedness rides along with the differential
            // machinery: γ- and λ-closedness at random (φ, μ)
            for idx in 0..2 {
                let phi = DMatrix::from_fn(2, g.dim(), |_, _| rng.random_range(-1.0..1.0f64));
                let mu = DVector::from_fn(g.dim(), |_, _| rng.random_range(-1.0..1.0f64));
                report.push(
                    vec![1.0 + idx as f64],
                    gamma_closedness_residual(g, &phi, &mu)?
                        .max(lambda_closedness_residual(g, &phi, &mu)?),
                    vec![],
                );
            }
        }
        IdentityId::RCONJ => {
            for idx in 0..opts.samples.min(8) {
                let mut r = MultiVector::zero(g.system());
                for a in 0..g.dim() {
                    for b in (a + 1)..g.dim() {
                        r.add_term((1 << a) | (1 << b), rng.random_range(-1.0..1.0f64));
                    }
                }
                report.push(vec![idx as f64], rconj_operator_residual(g, &r)?, vec![]);
            }
        }
        IdentityId::THETA_SQ => {
            let (nonscalar, scalar) = theta_square(g)?;
            report.push(vec![scalar], nonscalar, vec![scalar]);
        }
        IdentityId::DELTA_SQ => {
            report.push(vec![0.0], delta_square_residual(g)?, vec![]);
        }
        _ => unreachable!(),
    }
    Ok(report)
}

/// Build the requested family over a catalog entry.
pub fn build_family(
    entry: &CatalogEntry,
    family: CdybeFamily,
    scale_t: f64,
    seed: u64,
) -> Result<DynamicalRMatrix> {
    let g = &entry.algebra;
    let need_split = || {
        entry.split.clone().ok_or_else(|| {
            Error::structural(format!(
                "family '{}' needs a subalgebra split on '{}'",
                family.name(),
                g.name()
            ))
        })
    };
    match family {
        CdybeFamily::Full => Ok(DynamicalRMatrix::full(g)),
        CdybeFamily::Split => DynamicalRMatrix::split(g, &need_split()?),
        CdybeFamily::Twisted => {
            let split = need_split()?;
            let c = entry.automorphism.clone().ok_or_else(|| {
                Error::structural(format!(
                    "twisted family needs an automorphism on '{}'",
                    g.name()
                ))
            })?;
            DynamicalRMatrix::twisted(g, &split, &c)
        }
        CdybeFamily::Scaled => {
            let base = match &entry.split {
                Some(split) => DynamicalRMatrix::split(g, split)?,
                None => DynamicalRMatrix::full(g),
            };
            transforms::scale_transform(&base, scale_t)
        }
        CdybeFamily::Rational => transforms::rational_limit(g, &need_split()?),
        CdybeFamily::Sum => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5f5f5f5f);
            let abelian_k: Vec<usize> = match &entry.split {
                // use the designated k when it is abelian, else k = g
                Some(split)
                    if split.k_indices.iter().all(|&i| {
                        split
                            .k_indices
                            .iter()
                            .all(|&j| (0..g.dim()).all(|c| g.structure_constant(i, j, c) == 0.0))
                    }) =>
                {
                    split.k_indices.clone()
                }
                _ => (0..g.dim()).collect(),
            };
            let base = match &entry.split {
                Some(split) if abelian_k == split.k_indices => {
                    DynamicalRMatrix::split(g, split)?
                }
                _ => DynamicalRMatrix::full(g),
            };
            if abelian_k.len() < 2
                || abelian_k
                    .iter()
                    .any(|&i| abelian_k.iter().any(|&j| g.bracket_is_nonzero(i, j)))
            {
                // no room for a nonzero closed 2-form; s = 0 still exercises
                // the combinator
                let s = DynamicalRMatrix::constant_form(
                    g,
                    base.k_indices(),
                    MultiVector::zero(g.system()),
                )?;
                return transforms::add_k_solution(&base, &s, &[]);
            }
            let mut form = MultiVector::zero(g.system());
            for (pos, &i) in abelian_k.iter().enumerate() {
                for &j in abelian_k.iter().skip(pos + 1) {
                    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                    form.add_term((1 << lo) | (1 << hi), rng.random_range(-1.0..1.0f64));
                }
            }
            let s = DynamicalRMatrix::constant_form(g, base.k_indices(), form)?;
            let spot: Vec<DVector<f64>> = sample_admissible(g, base.k_indices(), 2, seed, |mu| {
                base.guard(mu).is_ok()
            })?;
            transforms::add_k_solution(&base, &s, &spot)
        }
    }
}

fn run_cdybe(family: CdybeFamily, opts: &CaseOptions, tolerance: f64) -> Result<ResidualReport> {
    let entry = resolve_entry(opts)?
        .ok_or_else(|| Error::structural("the CDYBE suite needs --algebra"))?;
    let r = build_family(&entry, family, opts.scale_t, opts.seed)?;
    let g = r.algebra().clone();
    let mut report = ResidualReport::new(
        family.identity_id().name(),
        g.name(),
        opts.seed,
        norm_kind(r.host()),
        tolerance,
    );
    let fd_step = match opts.mode {
        DerivativeMode::CentralDifference(h) => Some(h),
        DerivativeMode::Analytic => None,
    };
    let mus: Vec<DVector<f64>> = match &opts.mu {
        Some(mu) => {
            let v = DVector::from_vec(mu.clone());
            r.guard(&v)?;
            vec![v]
        }
        None => {
            let floor = opts.mode.sampling_floor();
            sample_admissible(&g, r.k_indices(), opts.samples, opts.seed, |mu| {
                if r.guard_with_floor(mu, floor).is_err() {
                    return false;
                }
                if let Some(h) = fd_step {
                    // stencil points must pass the guards too
                    for &a in r.k_indices() {
                        for sign in [-1.0, 1.0] {
                            let mut stencil = mu.clone();
                            stencil[a] += sign * h;
                            if r.guard_with_floor(&stencil, floor).is_err() {
                                return false;
                            }
                        }
                    }
                }
                true
            })?
        }
    };
    for mu in &mus {
        let sample = cdybe_residual(&r, mu, opts.mode, tolerance)?;
        let (d, s, t) = sample.component_norms;
        report.push(sample.mu, sample.residual_norm, vec![d, s, t]);
    }
    Ok(report)
}

fn run_remark(opts: &CaseOptions, tolerance: f64) -> Result<ResidualReport> {
    let entry = resolve_entry(opts)?
        .ok_or_else(|| Error::structural("the Jacobian identity needs --algebra"))?;
    let g = &entry.algebra;
    let mut report = ResidualReport::new(
        "REMARK_JU",
        g.name(),
        opts.seed,
        norm_kind(g.system()),
        tolerance,
    );
    let all: Vec<usize> = (0..g.dim()).collect();
    let r = DynamicalRMatrix::full(g);
    let mus: Vec<DVector<f64>> = match &opts.mu {
        Some(mu) => {
            let v = DVector::from_vec(mu.clone());
            r.guard(&v)?;
            vec![v]
        }
        None => sample_admissible(g, &all, opts.samples, opts.seed, |mu| r.guard(mu).is_ok())?,
    };
    for mu in &mus {
        let residual = j_u_identity_residual(g, mu, opts.mode)?;
        report.push(mu.iter().copied().collect(), residual, vec![]);
    }
    Ok(report)
}

fn run_rho_factor(opts: &CaseOptions, tolerance: f64) -> Result<ResidualReport> {
    let n = euclidean_dim(opts, 4);
    if n % 2 != 0 {
        return Err(Error::domain(
            "the factorization suite needs even dimension (D must be invertible)",
        ));
    }
    let sys = GeneratorSystem::euclidean(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = ResidualReport::new(
        "RHO_FACTOR",
        format!("euclidean{n}"),
        opts.seed,
        norm_kind(&sys),
        tolerance,
    );
    let mut produced = 0;
    while produced < opts.samples {
        let a = random_skew_adjoint(&sys, &mut rng, 1.4);
        // alternate between D = A and an independent commuting rescaling;
        // skip samples where the admissibility guards reject the pair
        let d = if produced % 2 == 0 { a.clone() } else { a.scale(1.3) };
        let rep = match factor::verify_rho_factorization(&a, &d) {
            Ok(rep) => rep,
            Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        };
        let fac2 = factor::verify_rho_fac2(&a)?;
        report.push(
            vec![produced as f64],
            rep.residual.max(fac2),
            vec![rep.block_residual, rep.detsqrt_signed, fac2],
        );
        produced += 1;
    }
    Ok(report)
}

fn run_symbol(opts: &CaseOptions, tolerance: f64, volume_form: bool) -> Result<ResidualReport> {
    let id = if volume_form {
        IdentityId::SYMBOL_II
    } else {
        IdentityId::SYMBOL_I
    };
    run_c1_c2(id, opts, tolerance, volume_form)
}

impl QuadraticLieAlgebra {
    fn bracket_is_nonzero(&self, i: usize, j: usize) -> bool {
        (0..self.dim()).any(|c| self.structure_constant(i, j, c) != 0.0)
    }
}
