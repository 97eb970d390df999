//! Named quadratic Lie algebras used throughout the verification suites.

use nalgebra::DMatrix;

use super::{OrthogonalAutomorphism, QuadraticLieAlgebra, SubalgebraSplit};
use crate::blade::GeneratorSystem;
use crate::error::{Error, Result};

/// A catalog algebra bundled with its canonical split and automorphism,
/// when it has natural ones.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub algebra: QuadraticLieAlgebra,
    pub split: Option<SubalgebraSplit>,
    pub automorphism: Option<OrthogonalAutomorphism>,
}

impl CatalogEntry {
    fn plain(algebra: QuadraticLieAlgebra) -> Self {
        CatalogEntry {
            algebra,
            split: None,
            automorphism: None,
        }
    }
}

/// so(3): f^c_ab = ε_abc, B = I. Split: k = span(e₃), p = span(e₁, e₂);
/// automorphism: the order-2 rotation by π around e₃ (fixes k pointwise).
pub fn so3() -> CatalogEntry {
    let sys = GeneratorSystem::euclidean(3);
    let algebra = QuadraticLieAlgebra::new(
        "so3",
        sys,
        &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)],
    )
    .expect("so3 is a quadratic Lie algebra");
    CatalogEntry {
        algebra,
        split: Some(SubalgebraSplit::new(vec![2], vec![0, 1])),
        automorphism: Some(OrthogonalAutomorphism::new(nalgebra::dmatrix![
            -1.0, 0.0, 0.0;
            0.0, -1.0, 0.0;
            0.0, 0.0, 1.0
        ])),
    }
}

/// so(2,1): B = diag(1,1,-1) with [e₁,e₂] = -e₃, [e₃,e₁] = e₂, [e₃,e₂] = -e₁.
/// Split: k = span(e₃) (definite line), p = span(e₁, e₂).
pub fn so21() -> CatalogEntry {
    let b = nalgebra::dmatrix![1.0, 0.0, 0.0; 0.0, 1.0, 0.0; 0.0, 0.0, -1.0];
    let sys = GeneratorSystem::from_bilinear(b).expect("Lorentz pairing");
    let algebra = QuadraticLieAlgebra::new(
        "so21",
        sys,
        &[(0, 1, 2, -1.0), (2, 0, 1, 1.0), (2, 1, 0, -1.0)],
    )
    .expect("so(2,1) is a quadratic Lie algebra");
    CatalogEntry {
        algebra,
        split: Some(SubalgebraSplit::new(vec![2], vec![0, 1])),
        automorphism: Some(OrthogonalAutomorphism::new(nalgebra::dmatrix![
            -1.0, 0.0, 0.0;
            0.0, -1.0, 0.0;
            0.0, 0.0, 1.0
        ])),
    }
}

/// Abelian algebra of the given dimension with B = I.
pub fn abelian(n: usize) -> CatalogEntry {
    let sys = GeneratorSystem::euclidean(n);
    CatalogEntry::plain(
        QuadraticLieAlgebra::new(format!("abelian{n}"), sys, &[])
            .expect("abelian algebras validate"),
    )
}

/// Semidirect product g = s ⋉ s* for a supplied Lie algebra s (given by its
/// structure constants c^k_ij), with the canonical pairing
/// B((x,α),(y,β)) = α(y) + β(x):
///   [e_i, e_j] = Σ c^k_ij e_k,  [e_i, ε^j] = -Σ_l c^j_il ε^l,  [ε, ε] = 0.
pub fn semidirect(
    name: impl Into<String>,
    s_dim: usize,
    s_brackets: &[(usize, usize, usize, f64)],
) -> Result<CatalogEntry> {
    let n = 2 * s_dim;
    let mut b = DMatrix::zeros(n, n);
    for i in 0..s_dim {
        b[(i, s_dim + i)] = 1.0;
        b[(s_dim + i, i)] = 1.0;
    }
    let sys = GeneratorSystem::from_bilinear(b)?;
    let mut brackets: Vec<(usize, usize, usize, f64)> = Vec::new();
    for &(i, j, k, v) in s_brackets {
        if i >= s_dim || j >= s_dim || k >= s_dim {
            return Err(Error::structural(
                "semidirect: supplied structure constants out of range",
            ));
        }
        // [e_i, e_j] = v e_k
        brackets.push((i, j, k, v));
        // coadjoint part: [e_i, ε^k] gets -v ε^j  (from c^k_ij = v)
        brackets.push((i, s_dim + k, s_dim + j, -v));
        brackets.push((j, s_dim + k, s_dim + i, v));
    }
    let algebra = QuadraticLieAlgebra::new(name, sys, &brackets)?;
    Ok(CatalogEntry::plain(algebra))
}

/// The default semidirect example: s the 2-dimensional non-abelian algebra
/// [s₁, s₂] = s₂, giving a 4-dimensional quadratic algebra of split signature.
pub fn semidirect2() -> CatalogEntry {
    semidirect("semidirect2", 2, &[(0, 1, 1, 1.0)])
        .expect("the 2-dim non-abelian algebra satisfies Jacobi")
}

/// Realified complexification g = k ⊕ √-1·k with B = Re of the complexified
/// pairing (so B = diag(B_k, -B_k)), split k ⊕ p with p = √-1·k, and the
/// conjugation automorphism c = diag(I, -I).
pub fn complexify(name: impl Into<String>, k: &QuadraticLieAlgebra) -> Result<CatalogEntry> {
    let m = k.dim();
    let n = 2 * m;
    let bk = k.system().bilinear();
    let mut b = DMatrix::zeros(n, n);
    for i in 0..m {
        for j in 0..m {
            b[(i, j)] = bk[(i, j)];
            b[(m + i, m + j)] = -bk[(i, j)];
        }
    }
    let sys = GeneratorSystem::from_bilinear(b)?;
    let mut brackets = Vec::new();
    for a in 0..m {
        for bb in 0..m {
            if a >= bb {
                continue;
            }
            for c in 0..m {
                let f = k.structure_constant(a, bb, c);
                if f == 0.0 {
                    continue;
                }
                // [x, y], [x, iy] = i[x,y], [ix, iy] = -[x,y]
                brackets.push((a, bb, c, f));
                brackets.push((a, m + bb, m + c, f));
                brackets.push((m + a, bb, m + c, f));
                brackets.push((m + a, m + bb, c, -f));
            }
        }
    }
    let algebra = QuadraticLieAlgebra::new(name, sys, &brackets)?;
    let mut conj = DMatrix::identity(n, n);
    for i in m..n {
        conj[(i, i)] = -1.0;
    }
    let automorphism = OrthogonalAutomorphism::new(conj);
    let split = SubalgebraSplit::new((0..m).collect(), (m..n).collect());
    split.validate(&algebra)?;
    automorphism.validate(&algebra, Some(&split))?;
    Ok(CatalogEntry {
        algebra,
        split: Some(split),
        automorphism: Some(automorphism),
    })
}

/// Orthogonal direct sum of quadratic Lie algebras.
pub fn direct_sum(name: impl Into<String>, parts: &[&QuadraticLieAlgebra]) -> Result<CatalogEntry> {
    let n: usize = parts.iter().map(|g| g.dim()).sum();
    let mut b = DMatrix::zeros(n, n);
    let mut brackets = Vec::new();
    let mut offset = 0;
    for g in parts {
        let m = g.dim();
        for i in 0..m {
            for j in 0..m {
                b[(offset + i, offset + j)] = g.system().pairing(i, j);
            }
        }
        for a in 0..m {
            for bb in (a + 1)..m {
                for c in 0..m {
                    let f = g.structure_constant(a, bb, c);
                    if f != 0.0 {
                        brackets.push((offset + a, offset + bb, offset + c, f));
                    }
                }
            }
        }
        offset += m;
    }
    let sys = GeneratorSystem::from_bilinear(b)?;
    Ok(CatalogEntry::plain(QuadraticLieAlgebra::new(
        name, sys, &brackets,
    )?))
}

/// The named catalog driven by the CLI and the acceptance gate.
pub const CATALOG_NAMES: [&str; 5] = ["so3", "so21", "abelian4", "semidirect2", "complex_so3"];

pub fn by_name(name: &str) -> Result<CatalogEntry> {
    match name {
        "so3" => Ok(so3()),
        "so21" => Ok(so21()),
        "semidirect2" => Ok(semidirect2()),
        "complex_so3" => complexify("complex_so3", &so3().algebra),
        _ => {
            if let Some(n) = name.strip_prefix("abelian") {
                let dim: usize = n
                    .parse()
                    .map_err(|_| Error::structural(format!("unknown catalog algebra '{name}'")))?;
                if dim == 0 || dim > 8 {
                    return Err(Error::structural(
                        "abelian catalog dimension must be in 1..=8",
                    ));
                }
                Ok(abelian(dim))
            } else {
                Err(Error::structural(format!(
                    "unknown catalog algebra '{name}'"
                )))
            }
        }
    }
}
