//! Analytic and meromorphic functions of skew-adjoint matrices.
//!
//! Entire functions go through their Taylor series; pole-bearing functions
//! go through a complex eigendecomposition with a series fallback when the
//! eigenvector basis is ill-conditioned. Every evaluation is protected by an
//! explicit analytic-domain guard on the spectrum.

pub mod eigen;
pub mod pfaffian;
pub mod scalar;
pub mod series;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::blade::system::System;
use crate::error::{Error, Result};

pub use pfaffian::{pfaffian, pfaffian_sqrt_det};

/// Spectral-radius cap for the functions tied to the 2πi lattice of poles
/// and zeros (f, J^{1/2}, coth): 0.9·2π.
pub const SPECTRAL_GUARD: f64 = 0.9 * std::f64::consts::TAU;
/// Floor on smallest singular values of resolvents/denominators.
pub const RESOLVENT_FLOOR: f64 = 1e-8;
/// Relative tolerance for the skew-adjointness invariant AᵀB + BA = 0.
pub const SKEW_ADJOINT_TOL: f64 = 1e-10;

/// A real matrix A on the core generators of a system, skew-adjoint with
/// respect to the core pairing: AᵀB + BA = 0.
#[derive(Debug, Clone)]
pub struct SkewAdjointMap {
    system: System,
    matrix: DMatrix<f64>,
}

impl SkewAdjointMap {
    /// Validates relative skew-adjointness ‖AᵀB + BA‖ < 1e-10·‖A‖·‖B‖.
    pub fn new(system: &System, matrix: DMatrix<f64>) -> Result<Self> {
        let k = system.core_dim();
        if matrix.nrows() != k || matrix.ncols() != k {
            return Err(Error::structural(format!(
                "skew-adjoint map must be {k}x{k} on the core generators"
            )));
        }
        let b = core_pairing(system);
        let defect = matrix.transpose() * &b + &b * &matrix;
        let scale = matrix.norm() * b.norm();
        // relative check with an absolute floor for near-zero matrices
        if defect.norm() > SKEW_ADJOINT_TOL * scale.max(1e-300)
            && defect.norm() > 1e-13 * b.norm().max(1.0)
        {
            return Err(Error::domain(format!(
                "matrix is not skew-adjoint: residual {:.3e} vs scale {:.3e}",
                defect.norm(),
                scale
            )));
        }
        Ok(SkewAdjointMap {
            system: system.clone(),
            matrix,
        })
    }

    pub fn zero(system: &System) -> Self {
        let k = system.core_dim();
        SkewAdjointMap {
            system: system.clone(),
            matrix: DMatrix::zeros(k, k),
        }
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

    pub fn scale(&self, t: f64) -> Self {
        SkewAdjointMap {
            system: self.system.clone(),
            matrix: &self.matrix * t,
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        eigen::spectral_radius(&self.matrix)
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }
}

/// Core block of the system pairing in core-position indexing.
pub fn core_pairing(system: &System) -> DMatrix<f64> {
    let core = system.core_indices();
    let k = core.len();
    DMatrix::from_fn(k, k, |i, j| system.pairing(core[i], core[j]))
}

/// The named scalar functions evaluated on matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyticFunctionId {
    /// j(z) = sinh(z/2)/(z/2); entire.
    JSinhc,
    /// f(z) = ½coth(z/2) − 1/z; odd, poles at 2πiZ\{0}.
    FLogDeriv,
    /// g(z) = (sinh z − z)/z²; entire.
    GAux,
    /// jL(z) = (1 − e⁻ᶻ)/z; entire.
    JL,
    /// jR(z) = (eᶻ − 1)/z; entire.
    JR,
    /// tanh(z/2); poles at (2Z+1)πi.
    TanhHalf,
    /// coth(z/2); poles at 2πiZ (including 0).
    CothHalf,
    /// eᶻ; entire.
    Expm,
    /// 1/z; pole at 0.
    Inv,
}

impl AnalyticFunctionId {
    pub fn is_entire(self) -> bool {
        matches!(
            self,
            AnalyticFunctionId::JSinhc
                | AnalyticFunctionId::GAux
                | AnalyticFunctionId::JL
                | AnalyticFunctionId::JR
                | AnalyticFunctionId::Expm
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            AnalyticFunctionId::JSinhc => "j",
            AnalyticFunctionId::FLogDeriv => "f",
            AnalyticFunctionId::GAux => "g",
            AnalyticFunctionId::JL => "jL",
            AnalyticFunctionId::JR => "jR",
            AnalyticFunctionId::TanhHalf => "tanh(z/2)",
            AnalyticFunctionId::CothHalf => "coth(z/2)",
            AnalyticFunctionId::Expm => "exp",
            AnalyticFunctionId::Inv => "inv",
        }
    }

    /// Scalar evaluation (primary definition of each tag).
    pub fn scalar(self, z: Complex64) -> Complex64 {
        match self {
            AnalyticFunctionId::JSinhc => scalar::j_scalar(z),
            AnalyticFunctionId::FLogDeriv => scalar::f_scalar(z),
            AnalyticFunctionId::GAux => scalar::g_scalar(z),
            AnalyticFunctionId::JL => scalar::jl_scalar(z),
            AnalyticFunctionId::JR => scalar::jr_scalar(z),
            AnalyticFunctionId::TanhHalf => scalar::tanh_half_scalar(z),
            AnalyticFunctionId::CothHalf => scalar::coth_half_scalar(z),
            AnalyticFunctionId::Expm => z.exp(),
            AnalyticFunctionId::Inv => 1.0 / z,
        }
    }

    /// Distance from a point to the pole set of this function
    /// (infinite for entire functions).
    pub fn pole_distance(self, z: Complex64) -> f64 {
        let lattice = |include_zero: bool, spacing: f64, offset: f64| -> f64 {
            // poles at i(offset + spacing·Z)
            let t = (z.im - offset) / spacing;
            let mut best = f64::INFINITY;
            for k in [t.floor(), t.ceil()] {
                let pole_im = offset + spacing * k;
                if !include_zero && pole_im.abs() < spacing / 2.0 {
                    continue;
                }
                let d = (z - Complex64::new(0.0, pole_im)).norm();
                best = best.min(d);
            }
            best
        };
        use std::f64::consts::{PI, TAU};
        match self {
            AnalyticFunctionId::FLogDeriv => lattice(false, TAU, 0.0),
            AnalyticFunctionId::CothHalf => lattice(true, TAU, 0.0),
            AnalyticFunctionId::TanhHalf => lattice(true, 2.0 * PI, PI),
            AnalyticFunctionId::Inv => z.norm(),
            _ => f64::INFINITY,
        }
    }
}

/// Check the analytic-domain guard of `id` on the spectrum of `m`.
pub fn check_guard(id: AnalyticFunctionId, m: &DMatrix<f64>) -> Result<()> {
    if id.is_entire() {
        return Ok(());
    }
    let eigs = eigen::eigenvalues(m);
    match id {
        AnalyticFunctionId::FLogDeriv | AnalyticFunctionId::CothHalf => {
            for z in &eigs {
                if z.norm() >= SPECTRAL_GUARD {
                    return Err(Error::domain(format!(
                        "{}: eigenvalue {z} exceeds the spectral-radius guard {SPECTRAL_GUARD:.4}",
                        id.name()
                    )));
                }
            }
        }
        _ => {}
    }
    if matches!(id, AnalyticFunctionId::CothHalf | AnalyticFunctionId::Inv) {
        let s = eigen::sigma_min(m);
        if s <= RESOLVENT_FLOOR {
            return Err(Error::domain(format!(
                "{}: smallest singular value {s:.3e} below the invertibility floor",
                id.name()
            )));
        }
    }
    for z in &eigs {
        let d = id.pole_distance(*z);
        if d <= RESOLVENT_FLOOR {
            return Err(Error::domain(format!(
                "{}: eigenvalue {z} lies within {d:.3e} of a pole",
                id.name()
            )));
        }
    }
    Ok(())
}

/// Series/LU route, valid on arbitrary (possibly non-diagonalizable) square
/// matrices whose spectrum satisfies the guard. Exposed for cross-checks and
/// for the block-matrix derivative trick.
pub fn eval_on_matrix_series(id: AnalyticFunctionId, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    match id {
        AnalyticFunctionId::JSinhc => series::j_series(m),
        AnalyticFunctionId::FLogDeriv => series::f_series(m),
        AnalyticFunctionId::GAux => series::g_series(m),
        AnalyticFunctionId::JL => series::jl_series(m),
        AnalyticFunctionId::JR => series::jr_series(m),
        AnalyticFunctionId::TanhHalf => {
            // the f-series of 2M needs ρ(2M) < 2π
            if eigen::spectral_radius(m) >= 0.45 * std::f64::consts::TAU {
                return Err(Error::domain(
                    "tanh(z/2) series route requires spectral radius below 0.9π",
                ));
            }
            series::tanh_half_series(m)
        }
        AnalyticFunctionId::CothHalf => series::coth_half_series(m),
        AnalyticFunctionId::Expm => Ok(series::expm(m)),
        AnalyticFunctionId::Inv => series::inverse(m, "matrix"),
    }
}

/// Primary-path evaluation of a matrix function of a skew-adjoint map.
///
/// Entire tags evaluate by Taylor series; pole-bearing tags evaluate by
/// complex eigendecomposition, falling back to the series route when the
/// eigenproblem is near-defective (condition > 1e8).
pub fn eval_matrix_function(
    id: AnalyticFunctionId,
    a: &SkewAdjointMap,
) -> Result<DMatrix<f64>> {
    eval_on_matrix(id, a.matrix())
}

/// Same as [`eval_matrix_function`] for a raw matrix (used on restricted
/// blocks of adjoint maps).
pub fn eval_on_matrix(id: AnalyticFunctionId, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_guard(id, m)?;
    if id.is_entire() {
        return eval_on_matrix_series(id, m);
    }
    if id == AnalyticFunctionId::Inv {
        return series::inverse(m, "matrix");
    }
    match eigen::decompose(m) {
        Ok(dec) if !dec.is_near_defective() => dec.apply(|z| id.scalar(z)),
        // near-defective or failed eigenproblem: series fallback
        _ => eval_on_matrix_series(id, m),
    }
}

/// J^{1/2}(A): the positive smooth square root of det(j(A)), equal to 1 at
/// A = 0 and guarded by the 0.9·2π spectral-radius cap.
pub fn j_det_sqrt(a: &SkewAdjointMap) -> Result<f64> {
    j_det_sqrt_matrix(a.matrix())
}

pub fn j_det_sqrt_matrix(m: &DMatrix<f64>) -> Result<f64> {
    let rho = eigen::spectral_radius(m);
    if rho >= SPECTRAL_GUARD {
        return Err(Error::domain(format!(
            "J^(1/2): spectral radius {rho:.4} exceeds guard {SPECTRAL_GUARD:.4}"
        )));
    }
    let j = series::j_series(m)?;
    let det = j.lu().determinant();
    if det <= 0.0 {
        return Err(Error::numeric(format!(
            "det j(A) = {det:.3e} is not positive inside the guard region"
        )));
    }
    Ok(det.sqrt())
}

/// Cayley-type transform (c·e^A + I)(c·e^A − I)⁻¹ for an orthogonal c
/// commuting with A. The result is skew-adjoint for the same pairing.
pub fn cayley_like(c: &DMatrix<f64>, a: &SkewAdjointMap) -> Result<SkewAdjointMap> {
    let m = cayley_like_matrix(c, a.matrix())?;
    SkewAdjointMap::new(a.system(), m)
}

pub fn cayley_like_matrix(c: &DMatrix<f64>, a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if c.nrows() != a.nrows() || c.ncols() != a.ncols() {
        return Err(Error::structural("cayley transform: dimension mismatch"));
    }
    let comm = c * a - a * c;
    if comm.norm() > 1e-10 * (c.norm() * a.norm()).max(1e-300) {
        return Err(Error::domain(
            "cayley transform requires commuting inputs".to_string(),
        ));
    }
    let e = series::expm(a);
    let ce = c * &e;
    let n = a.nrows();
    let denom = &ce - DMatrix::<f64>::identity(n, n);
    if eigen::sigma_min(&denom) <= RESOLVENT_FLOOR {
        return Err(Error::domain(
            "cayley transform: c·exp(A) − I is numerically singular",
        ));
    }
    let numer = &ce + DMatrix::<f64>::identity(n, n);
    let denom_inv = series::inverse(&denom, "c·exp(A) − I")?;
    Ok(numer * denom_inv)
}

/// Directional (Fréchet) derivative D f(A)[H]: evaluate the series route on
/// the block matrix [[A, H], [0, A]] and read the upper-right block.
pub fn frechet_derivative(
    id: AnalyticFunctionId,
    a: &SkewAdjointMap,
    h: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    frechet_on_matrix(id, a.matrix(), h)
}

pub fn frechet_on_matrix(
    id: AnalyticFunctionId,
    a: &DMatrix<f64>,
    h: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::structural("derivative direction has wrong shape"));
    }
    check_guard(id, a)?;
    let block = block_upper(a, h);
    let val = eval_on_matrix_series(id, &block)?;
    Ok(val.view((0, n), (n, n)).into_owned())
}

/// [[A, H], [0, A]]
pub fn block_upper(a: &DMatrix<f64>, h: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut block = DMatrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(a);
    block.view_mut((0, n), (n, n)).copy_from(h);
    block.view_mut((n, n), (n, n)).copy_from(a);
    block
}
