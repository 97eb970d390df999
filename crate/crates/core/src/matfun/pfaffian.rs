//! Pfaffians of skew-symmetric matrices.
//!
//! The Pfaffian is the orientation-fixed square root of the determinant of a
//! skew-symmetric matrix. Skew-adjoint maps over a positive-definite pairing
//! are first orthonormalized (Cholesky frame with positive determinant, so
//! the orientation of the volume blade is preserved).

use nalgebra::DMatrix;

use super::SkewAdjointMap;
use crate::error::{Error, Result};

/// Pfaffian of a skew-symmetric matrix by recursive first-row expansion:
/// Pf(M) = Σ_{j>0} (-1)^j M_{0j} Pf(M with rows/cols 0, j removed).
pub fn pfaffian(m: &DMatrix<f64>) -> Result<f64> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::structural("pfaffian needs a square matrix"));
    }
    if n % 2 != 0 {
        return Err(Error::domain("pfaffian needs even dimension"));
    }
    let scale = m.amax().max(1e-300);
    if (m + m.transpose()).amax() > 1e-10 * scale {
        return Err(Error::domain("pfaffian needs a skew-symmetric matrix"));
    }
    let active: Vec<usize> = (0..n).collect();
    Ok(pf_recursive(m, &active))
}

fn pf_recursive(m: &DMatrix<f64>, active: &[usize]) -> f64 {
    let n = active.len();
    if n == 0 {
        return 1.0;
    }
    let i = active[0];
    let mut acc = 0.0;
    for (pos, &j) in active.iter().enumerate().skip(1) {
        let entry = m[(i, j)];
        if entry == 0.0 {
            continue;
        }
        let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
        let rest: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&k| k != i && k != j)
            .collect();
        acc += sign * entry * pf_recursive(m, &rest);
    }
    acc
}

/// Pfaffian square root of the determinant of a skew-adjoint map, computed
/// in the orthonormal frame of a positive-definite core pairing and signed
/// by the system orientation.
pub fn pfaffian_sqrt_det(a: &SkewAdjointMap) -> Result<f64> {
    let sys = a.system();
    if sys.core_dim() % 2 != 0 {
        return Err(Error::domain("Pfaffian route needs even dimension"));
    }
    let frame = sys.orthonormal_frame()?; // errors for indefinite pairings
    // A in the orthonormal frame: P⁻¹ A P with P the frame matrix.
    let p_inv = frame
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::numeric("orthonormal frame inversion failed"))?;
    let transformed = &p_inv * a.matrix() * &frame;
    pfaffian(&transformed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blade::system::GeneratorSystem;
    use nalgebra::dmatrix;

    #[test]
    fn two_by_two() {
        let m = dmatrix![0.0, 3.5; -3.5, 0.0];
        assert_eq!(pfaffian(&m).unwrap(), 3.5);
    }

    #[test]
    fn block_diagonal_four() {
        let (a, b) = (1.3, -0.7);
        let m = dmatrix![
            0.0, a, 0.0, 0.0;
            -a, 0.0, 0.0, 0.0;
            0.0, 0.0, 0.0, b;
            0.0, 0.0, -b, 0.0
        ];
        assert!((pfaffian(&m).unwrap() - a * b).abs() < 1e-15);
    }

    #[test]
    fn pf_squared_is_det() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for &n in &[2usize, 4, 6] {
            for _ in 0..50 {
                let mut m = DMatrix::<f64>::zeros(n, n);
                for i in 0..n {
                    for j in (i + 1)..n {
                        let v = rng.random_range(-2.0..2.0);
                        m[(i, j)] = v;
                        m[(j, i)] = -v;
                    }
                }
                let pf = pfaffian(&m).unwrap();
                let det = m.clone().lu().determinant();
                assert!(
                    (pf * pf - det).abs() < 1e-10 * det.abs().max(1.0),
                    "n={n}"
                );
            }
        }
    }

    #[test]
    fn odd_dimension_and_non_skew_rejected() {
        assert!(pfaffian(&DMatrix::<f64>::zeros(3, 3)).is_err());
        let m = dmatrix![0.0, 1.0; 1.0, 0.0];
        assert!(pfaffian(&m).is_err());
    }

    #[test]
    fn skew_adjoint_over_scaled_pairing() {
        // B = diag(4, 1): the orthonormal frame rescales; Pf² must still
        // equal det of the frame-transformed matrix.
        let sys = GeneratorSystem::from_bilinear(dmatrix![4.0, 0.0; 0.0, 1.0]).unwrap();
        // A skew-adjoint wrt B: AᵀB = -BA. Try A = [[0, -1],[4, 0]]·t
        let a = SkewAdjointMap::new(&sys, dmatrix![0.0, -1.0; 4.0, 0.0]).unwrap();
        let pf = pfaffian_sqrt_det(&a).unwrap();
        let det = a.matrix().clone().lu().determinant();
        assert!((pf * pf - det).abs() < 1e-12);
        // indefinite pairing rejected
        let lorentz = GeneratorSystem::from_bilinear(dmatrix![1.0, 0.0; 0.0, -1.0]).unwrap();
        let b = SkewAdjointMap::new(&lorentz, dmatrix![0.0, 1.0; 1.0, 0.0]).unwrap();
        assert!(pfaffian_sqrt_det(&b).is_err());
    }
}
