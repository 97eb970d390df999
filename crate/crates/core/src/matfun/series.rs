//! Series-route matrix function evaluation.
//!
//! Entire functions are evaluated by their Taylor series with a term-norm
//! convergence monitor. The pole-bearing functions are reduced to the entire
//! series of f (Bernoulli/zeta coefficients, radius 2π) plus explicit matrix
//! inverses:
//!
//!   coth(A/2) = 2A⁻¹ + 2f(A)
//!   tanh(A/2) = 4f(2A) - 2f(A)
//!
//! This route stays valid on non-diagonalizable inputs, which is what makes
//! it usable for the block-matrix directional-derivative trick, and serves
//! as the independent cross-check of the eigendecomposition route.

use nalgebra::DMatrix;

use super::scalar::f_coefficient;
use crate::error::{Error, Result};

pub const SERIES_MAX_TERMS: usize = 400;

/// Evaluate Σ_k coeff(k)·Mᵏ with a three-consecutive-small-terms stop.
/// `coeff(k)` may be zero for skipped powers.
pub fn eval_power_series(
    m: &DMatrix<f64>,
    coeff: impl Fn(usize) -> f64,
    what: &str,
) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let mut acc = DMatrix::<f64>::identity(n, n) * coeff(0);
    let mut pow = DMatrix::<f64>::identity(n, n);
    let mut small = 0;
    for k in 1..=SERIES_MAX_TERMS {
        pow *= m;
        let c = coeff(k);
        if c != 0.0 {
            acc += &pow * c;
        }
        let term_norm = pow.norm() * c.abs();
        if term_norm < 1e-17 * acc.norm().max(1.0) {
            small += 1;
            if small >= 3 {
                return Ok(acc);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::numeric(format!(
        "{what} series did not converge within {SERIES_MAX_TERMS} terms"
    )))
}

/// f(M) = Σ_{k≥1} c_k M^{2k-1} with c_k = B_{2k}/(2k)!, radius 2π.
/// Terms are accumulated through the coefficient ratio to avoid overflow in
/// the raw powers.
pub fn f_series(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let m2 = m * m;
    let mut term = m * f_coefficient(1);
    let mut acc = term.clone();
    let mut prev_c = f_coefficient(1);
    let mut small = 0;
    for k in 2..=SERIES_MAX_TERMS {
        let c = f_coefficient(k);
        term = &term * &m2 * (c / prev_c);
        prev_c = c;
        acc += &term;
        if term.norm() < 1e-17 * acc.norm().max(1.0) {
            small += 1;
            if small >= 3 {
                return Ok(acc);
            }
        } else {
            small = 0;
        }
    }
    let _ = n;
    Err(Error::numeric(
        "f-series did not converge within the term budget (spectral radius too close to 2π)",
    ))
}

/// Matrix exponential by scaling and squaring over a Taylor core.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.norm();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m / 2f64.powi(s);
    let mut acc = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        acc += &term;
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}

pub fn inverse(m: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::domain(format!("{what} is singular")))
}

/// j(M): Taylor coefficients 1/(4^k (2k+1)!) on even powers.
pub fn j_series(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let coeffs = even_series_coeffs(|k, prev| prev / (4.0 * (2 * k) as f64 * (2 * k + 1) as f64));
    eval_power_series(m, move |k| coeffs(k), "j")
}

/// g(M): coefficients 1/(2k+1)! on odd powers.
pub fn g_series(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut c = vec![0.0; SERIES_MAX_TERMS + 1];
    let mut v = 1.0 / 6.0;
    let mut k = 1usize;
    while 2 * k - 1 <= SERIES_MAX_TERMS {
        c[2 * k - 1] = v;
        v /= ((2 * k + 2) * (2 * k + 3)) as f64;
        k += 1;
    }
    eval_power_series(m, move |k| c.get(k).copied().unwrap_or(0.0), "g")
}

/// jR(M) = Σ Mᵏ/(k+1)!.
pub fn jr_series(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut c = vec![0.0; SERIES_MAX_TERMS + 1];
    let mut v = 1.0;
    for (k, slot) in c.iter_mut().enumerate() {
        *slot = v;
        v /= (k + 2) as f64;
    }
    eval_power_series(m, move |k| c.get(k).copied().unwrap_or(0.0), "jR")
}

pub fn jl_series(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    jr_series(&(-m))
}

/// cosh(M/2): even coefficients 1/(4^k (2k)!).
pub fn cosh_half_series(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let coeffs = even_series_coeffs(|k, prev| prev / (4.0 * (2 * k - 1) as f64 * (2 * k) as f64));
    eval_power_series(m, move |k| coeffs(k), "cosh(z/2)")
}

/// 2 sinh(M/2): odd coefficients 1/(4^k (2k+1)!) on M^{2k+1}.
pub fn two_sinh_half_series(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut c = vec![0.0; SERIES_MAX_TERMS + 1];
    let mut v = 1.0;
    let mut k = 0usize;
    while 2 * k + 1 <= SERIES_MAX_TERMS {
        c[2 * k + 1] = v;
        v /= 4.0 * (2 * k + 2) as f64 * (2 * k + 3) as f64;
        k += 1;
    }
    eval_power_series(m, move |k| c.get(k).copied().unwrap_or(0.0), "2sinh(z/2)")
}

/// Precompute an even-power coefficient table from a running recurrence
/// starting at coefficient 1 for k = 0.
fn even_series_coeffs(step: impl Fn(usize, f64) -> f64) -> impl Fn(usize) -> f64 {
    let mut c = vec![0.0; SERIES_MAX_TERMS + 1];
    let mut v = 1.0;
    let mut k = 0usize;
    while 2 * k <= SERIES_MAX_TERMS {
        c[2 * k] = v;
        v = step(k + 1, v);
        k += 1;
    }
    move |k: usize| c.get(k).copied().unwrap_or(0.0)
}

pub fn coth_half_series(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let inv = inverse(m, "coth(z/2) argument")?;
    Ok(inv * 2.0 + f_series(m)? * 2.0)
}

pub fn tanh_half_series(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(f_series(&(m * 2.0))? * 4.0 - f_series(m)? * 2.0)
}
