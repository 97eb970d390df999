use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default absolute threshold below which multivector coefficients are pruned.
pub const DEFAULT_PRUNE_EPS: f64 = 1e-14;
/// Default lower bound on |det B_core| for non-degeneracy.
pub const DEFAULT_DEGENERACY_THRESHOLD: f64 = 1e-12;
/// Operator matrices are dense 2^n x 2^n; cap n to keep them in memory.
pub const MAX_GENERATORS: usize = 16;

/// A finite generator list with a symmetric bilinear pairing.
///
/// This is the arena in which both the exterior algebra ∧V and the Clifford
/// algebra Cl(V) are coordinatized by blade bitmasks. Generators may include
/// an *extension block* E on which the pairing is identically zero; the
/// resulting algebra is Cl(V)⊗∧E realized as Cl(V⊕E) with degenerate form.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSystem {
    n: usize,
    bilinear: DMatrix<f64>,
    extension: Vec<bool>,
    orientation: Vec<usize>,
    prune_eps: f64,
    /// Inverse of the core block of `bilinear`, indexed by core position.
    core_dual: DMatrix<f64>,
    core_indices: Vec<usize>,
    ext_indices: Vec<usize>,
    diagonal: bool,
}

pub type System = Arc<GeneratorSystem>;

impl GeneratorSystem {
    /// Standard Euclidean system: B = I_n, no extension block.
    pub fn euclidean(n: usize) -> System {
        Self::new(DMatrix::identity(n, n), vec![false; n]).expect("identity pairing is valid")
    }

    /// System with the given pairing on all generators (no extension block).
    pub fn from_bilinear(bilinear: DMatrix<f64>) -> Result<System> {
        let n = bilinear.nrows();
        Self::new(bilinear, vec![false; n])
    }

    /// Extend a system by `ext` additional generators with exactly zero pairing.
    ///
    /// The core block is copied verbatim; the new generators form the
    /// extension block E (appended after the existing generators).
    pub fn extend(base: &GeneratorSystem, ext: usize) -> System {
        let n = base.n + ext;
        let mut b = DMatrix::zeros(n, n);
        b.view_mut((0, 0), (base.n, base.n)).copy_from(&base.bilinear);
        let mut mask = base.extension.clone();
        mask.extend(std::iter::repeat(true).take(ext));
        Self::new(b, mask).expect("extending a valid system stays valid")
    }

    /// General constructor. `extension[a]` marks generator `a` as part of the
    /// degenerate extension block; rows/columns of `bilinear` at extension
    /// indices must be exactly zero.
    pub fn new(bilinear: DMatrix<f64>, extension: Vec<bool>) -> Result<System> {
        let n = bilinear.nrows();
        if bilinear.ncols() != n || extension.len() != n {
            return Err(Error::structural(format!(
                "pairing must be square and extension mask must have length {n}"
            )));
        }
        if n > MAX_GENERATORS {
            return Err(Error::structural(format!(
                "generator count {n} exceeds supported maximum {MAX_GENERATORS}"
            )));
        }
        let scale = bilinear.amax().max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (bilinear[(i, j)] - bilinear[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::structural(format!(
                        "pairing is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        for (a, &is_ext) in extension.iter().enumerate() {
            if is_ext {
                for j in 0..n {
                    if bilinear[(a, j)] != 0.0 || bilinear[(j, a)] != 0.0 {
                        return Err(Error::structural(format!(
                            "extension generator {a} must have exactly zero pairing"
                        )));
                    }
                }
            }
        }
        let core_indices: Vec<usize> =
            (0..n).filter(|&a| !extension[a]).collect();
        let ext_indices: Vec<usize> = (0..n).filter(|&a| extension[a]).collect();
        let k = core_indices.len();
        let mut core = DMatrix::zeros(k, k);
        for (i, &a) in core_indices.iter().enumerate() {
            for (j, &b) in core_indices.iter().enumerate() {
                core[(i, j)] = bilinear[(a, b)];
            }
        }
        let lu = core.clone().lu();
        let det = lu.determinant();
        if k > 0 && det.abs() <= DEFAULT_DEGENERACY_THRESHOLD {
            return Err(Error::structural(format!(
                "core pairing is degenerate (|det| = {:.3e})",
                det.abs()
            )));
        }
        let core_dual = if k > 0 {
            lu.try_inverse().ok_or_else(|| {
                Error::structural("core pairing could not be inverted".to_string())
            })?
        } else {
            DMatrix::zeros(0, 0)
        };
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || bilinear[(i, j)] == 0.0));
        Ok(Arc::new(GeneratorSystem {
            n,
            bilinear,
            extension,
            orientation: core_indices.clone(),
            prune_eps: DEFAULT_PRUNE_EPS,
            core_dual,
            core_indices,
            ext_indices,
            diagonal,
        }))
    }

    pub fn generator_count(&self) -> usize {
        self.n
    }

    /// Number of blades, 2^n.
    pub fn blade_count(&self) -> usize {
        1 << self.n
    }

    pub fn bilinear(&self) -> &DMatrix<f64> {
        &self.bilinear
    }

    pub fn pairing(&self, a: usize, b: usize) -> f64 {
        self.bilinear[(a, b)]
    }

    pub fn is_extension(&self, a: usize) -> bool {
        self.extension[a]
    }

    pub fn core_indices(&self) -> &[usize] {
        &self.core_indices
    }

    pub fn ext_indices(&self) -> &[usize] {
        &self.ext_indices
    }

    pub fn core_dim(&self) -> usize {
        self.core_indices.len()
    }

    pub fn has_extension(&self) -> bool {
        !self.ext_indices.is_empty()
    }

    pub fn prune_eps(&self) -> f64 {
        self.prune_eps
    }

    pub fn set_prune_eps(self: &mut Arc<Self>, eps: f64) {
        Arc::make_mut(self).prune_eps = eps;
    }

    pub(crate) fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    /// Inverse of the core block of the pairing (core-position indexing).
    pub fn core_dual(&self) -> &DMatrix<f64> {
        &self.core_dual
    }

    /// Coefficients (in generator indexing) of the dual vector e^a of core
    /// generator `a`: the unique core vector with B(e^a, e_b) = δ_ab.
    pub fn dual_vector(&self, a: usize) -> nalgebra::DVector<f64> {
        let pos = self
            .core_indices
            .iter()
            .position(|&c| c == a)
            .expect("dual vectors exist only for core generators");
        let mut v = nalgebra::DVector::zeros(self.n);
        for (i, &c) in self.core_indices.iter().enumerate() {
            v[c] = self.core_dual[(i, pos)];
        }
        v
    }

    /// Ordered core indices defining the volume blade orientation.
    pub fn orientation(&self) -> &[usize] {
        &self.orientation
    }

    /// Two multivector operands must come from the same system.
    pub fn check_same(&self, other: &GeneratorSystem) -> Result<()> {
        if std::ptr::eq(self, other) || self == other {
            Ok(())
        } else {
            Err(Error::structural(
                "operands belong to different generator systems",
            ))
        }
    }

    /// For positive-definite core pairing: a basis change P with positive
    /// determinant such that Pᵀ B_core P = I (columns are an orthonormal
    /// frame expressed in core coordinates).
    pub fn orthonormal_frame(&self) -> Result<DMatrix<f64>> {
        let k = self.core_dim();
        let mut core = DMatrix::zeros(k, k);
        for (i, &a) in self.core_indices.iter().enumerate() {
            for (j, &b) in self.core_indices.iter().enumerate() {
                core[(i, j)] = self.bilinear[(a, b)];
            }
        }
        let chol = core.cholesky().ok_or_else(|| {
            Error::domain("pairing is not positive definite; no orthonormal frame")
        })?;
        // B = L Lᵀ  ⇒  P = (Lᵀ)⁻¹, det P = 1/det L > 0.
        let l = chol.l();
        let lt_inv = l
            .transpose()
            .try_inverse()
            .ok_or_else(|| Error::numeric("Cholesky factor inversion failed"))?;
        Ok(lt_inv)
    }
}
