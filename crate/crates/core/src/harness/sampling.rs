//! Seeded sampling of admissible arguments.
//!
//! Samples are drawn uniformly from a ball in the subalgebra span whose
//! radius is calibrated per direction so the adjoint spectral radius stays
//! inside the 0.9·2π analytic guard; candidates are then filtered through
//! the caller's domain guard. Exhaustion is an error, never silence.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lie::QuadraticLieAlgebra;
use crate::matfun::{eigen, SPECTRAL_GUARD};

/// Fraction of the spectral guard targeted by the sampling radius.
pub const RADIUS_FRACTION: f64 = 0.8;
/// Attempts per requested sample before declaring guard exhaustion.
pub const ATTEMPTS_PER_SAMPLE: usize = 400;

/// Draw `count` admissible points supported on `k_indices`, rejecting
/// candidates that fail `admissible`.
pub fn sample_admissible(
    g: &QuadraticLieAlgebra,
    k_indices: &[usize],
    count: usize,
    seed: u64,
    mut admissible: impl FnMut(&DVector<f64>) -> bool,
) -> Result<Vec<DVector<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.dim();
    let mut out = Vec::with_capacity(count);
    let budget = count.max(1) * ATTEMPTS_PER_SAMPLE;
    let mut attempts = 0;
    while out.len() < count {
        if attempts >= budget {
            return Err(Error::GuardExhaustion(format!(
                "found {} of {count} admissible samples in {budget} attempts \
                 (domain guards reject this configuration)",
                out.len()
            )));
        }
        attempts += 1;
        let mut direction = DVector::zeros(n);
        for &i in k_indices {
            direction[i] = rng.random_range(-1.0..1.0f64);
        }
        let norm = direction.norm();
        if norm < 1e-3 {
            continue;
        }
        direction /= norm;
        let rho_hat = eigen::spectral_radius(&g.adjoint_matrix(&direction));
        // radius keeping ρ(ad_μ) ≤ RADIUS_FRACTION·guard along this direction
        let max_len = if rho_hat > 1e-12 {
            RADIUS_FRACTION * SPECTRAL_GUARD / rho_hat
        } else {
            1.0
        };
        let len = max_len * rng.random_range(0.1..1.0f64);
        let candidate = direction * len;
        if admissible(&candidate) {
            out.push(candidate);
        }
    }
    Ok(out)
}

/// Seeded random skew-adjoint matrices over a system, rescaled to the given
/// spectral radius bound.
pub fn random_skew_adjoint(
    system: &crate::blade::System,
    rng: &mut ChaCha8Rng,
    rho_max: f64,
) -> crate::matfun::SkewAdjointMap {
    let b = crate::matfun::core_pairing(system);
    let k = system.core_dim();
    loop {
        let mut s = nalgebra::DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            for j in (i + 1)..k {
                let v = rng.random_range(-1.0..1.0);
                s[(i, j)] = v;
                s[(j, i)] = -v;
            }
        }
        // S·B is skew-adjoint for B whenever S is skew-symmetric
        let m = s * &b;
        let rho = eigen::spectral_radius(&m);
        if rho < 1e-6 {
            continue;
        }
        let scaled = m * (rho_max * rng.random_range(0.2..1.0f64) / rho);
        return crate::matfun::SkewAdjointMap::new(system, scaled)
            .expect("construction is skew-adjoint by design");
    }
}
