//! Scalar (complex) evaluations of the generating functions
//!
//!   j(z)  = sinh(z/2)/(z/2)          entire, zeros at 2πiZ\{0}
//!   f(z)  = (ln j)'(z) = ½coth(z/2) - 1/z   odd, poles at 2πiZ\{0}
//!   g(z)  = (sinh z - z)/z²          entire
//!   jR(z) = (eᶻ-1)/z,  jL(z) = (1-e⁻ᶻ)/z    entire, zeros at 2πiZ\{0}
//!
//! All direct formulas switch to Taylor series near the removable
//! singularity at z = 0.

use num_complex::Complex64;

const SMALL: f64 = 0.5;

/// ζ(2k) for k ≥ 1. Closed forms for small k, direct summation afterwards
/// (the tail is below f64 resolution for k ≥ 8 with 64 summands).
pub fn zeta_even(k: usize) -> f64 {
    use std::f64::consts::PI;
    match k {
        0 => panic!("zeta_even is defined for k >= 1"),
        1 => PI.powi(2) / 6.0,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        4 => PI.powi(8) / 9450.0,
        5 => PI.powi(10) / 93555.0,
        6 => 691.0 * PI.powi(12) / 638_512_875.0,
        7 => 2.0 * PI.powi(14) / 18_243_225.0,
        _ => {
            let s = -2.0 * k as f64;
            1.0 + (2..=64).map(|m| (m as f64).powf(s)).sum::<f64>()
        }
    }
}

/// Odd Taylor coefficient of f: f(z) = Σ_{k≥1} c_k z^{2k-1} with
/// c_k = B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}.
pub fn f_coefficient(k: usize) -> f64 {
    use std::f64::consts::TAU;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * 2.0 * zeta_even(k) / TAU.powi(2 * k as i32)
}

pub fn j_scalar(z: Complex64) -> Complex64 {
    if z.norm() < SMALL {
        // Σ z^{2k} / (4^k (2k+1)!)
        let z2 = z * z;
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 0..12 {
            term *= z2 / (4.0 * (2 * k + 2) as f64 * (2 * k + 3) as f64);
            acc += term;
        }
        acc
    } else {
        let h = z / 2.0;
        h.sinh() / h
    }
}

pub fn f_scalar(z: Complex64) -> Complex64 {
    if z.norm() < SMALL {
        let z2 = z * z;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = z;
        for k in 1..=14 {
            acc += f_coefficient(k) * pow;
            pow *= z2;
        }
        acc
    } else {
        0.5 * coth(z / 2.0) - 1.0 / z
    }
}

pub fn g_scalar(z: Complex64) -> Complex64 {
    if z.norm() < SMALL {
        // Σ_{k≥1} z^{2k-1} / (2k+1)!
        let z2 = z * z;
        let mut term = z / 6.0;
        let mut acc = term;
        for k in 1..12 {
            term *= z2 / ((2 * k + 2) as f64 * (2 * k + 3) as f64);
            acc += term;
        }
        acc
    } else {
        (z.sinh() - z) / (z * z)
    }
}

pub fn jr_scalar(z: Complex64) -> Complex64 {
    if z.norm() < SMALL {
        // Σ z^k / (k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 1..=18 {
            term *= z / (k + 1) as f64;
            acc += term;
        }
        acc
    } else {
        (z.exp() - 1.0) / z
    }
}

pub fn jl_scalar(z: Complex64) -> Complex64 {
    jr_scalar(-z)
}

pub fn coth(w: Complex64) -> Complex64 {
    w.cosh() / w.sinh()
}

pub fn coth_half_scalar(z: Complex64) -> Complex64 {
    coth(z / 2.0)
}

pub fn tanh_half_scalar(z: Complex64) -> Complex64 {
    (z / 2.0).tanh()
}

pub fn cosh_half_scalar(z: Complex64) -> Complex64 {
    (z / 2.0).cosh()
}

/// 2 sinh(z/2), the function whose determinant square root is the Pfaffian
/// prefactor of the volume-form symbol expression.
pub fn two_sinh_half_scalar(z: Complex64) -> Complex64 {
    2.0 * (z / 2.0).sinh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn values_at_zero() {
        let z = Complex64::new(0.0, 0.0);
        assert_relative_eq!(j_scalar(z).re, 1.0);
        assert_eq!(f_scalar(z).norm(), 0.0);
        assert_eq!(g_scalar(z).norm(), 0.0);
        assert_relative_eq!(jr_scalar(z).re, 1.0);
        assert_relative_eq!(jl_scalar(z).re, 1.0);
    }

    #[test]
    fn series_matches_direct_across_switch() {
        for &r in &[0.4999, 0.5001, 1.0, 3.0] {
            for &arg in &[0.0, 0.7, 1.9, std::f64::consts::FRAC_PI_2] {
                let z = Complex64::from_polar(r, arg);
                let direct = 0.5 * coth(z / 2.0) - 1.0 / z;
                assert_relative_eq!(f_scalar(z).re, direct.re, max_relative = 1e-10, epsilon = 1e-13);
                assert_relative_eq!(f_scalar(z).im, direct.im, max_relative = 1e-10, epsilon = 1e-13);
                let dj = (z / 2.0).sinh() / (z / 2.0);
                assert_relative_eq!(j_scalar(z).re, dj.re, max_relative = 1e-12, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn f_is_log_derivative_of_j() {
        // f = j'/j, checked by central differences.
        let h = 1e-6;
        for &x in &[0.3, 1.2, 2.5] {
            let z = Complex64::new(x, 0.0);
            let num = (j_scalar(z + h).re - j_scalar(z - h).re) / (2.0 * h);
            assert_relative_eq!(f_scalar(z).re, num / j_scalar(z).re, epsilon = 1e-8);
        }
    }

    #[test]
    fn imaginary_axis_identities() {
        // f(iθ) = i (1/θ - ½cot(θ/2)), j(iθ) = sin(θ/2)/(θ/2)
        let theta = 1.3;
        let z = Complex64::new(0.0, theta);
        let f = f_scalar(z);
        assert!(f.re.abs() < 1e-14);
        assert_relative_eq!(f.im, 1.0 / theta - 0.5 / (theta / 2.0).tan(), epsilon = 1e-12);
        let j = j_scalar(z);
        assert!(j.im.abs() < 1e-14);
        assert_relative_eq!(j.re, (theta / 2.0).sin() / (theta / 2.0), epsilon = 1e-12);
    }

    #[test]
    fn scalar_function_relations() {
        // jL(z) = e⁻ᶻ jR(z), tanh(z/2) = 4f(2z) - 2f(z), coth(z/2) = 2/z + 2f(z)
        let z = Complex64::new(0.7, 0.4);
        let lhs = jl_scalar(z);
        let rhs = (-z).exp() * jr_scalar(z);
        assert!((lhs - rhs).norm() < 1e-14);
        let t = tanh_half_scalar(z);
        let via_f = 4.0 * f_scalar(2.0 * z) - 2.0 * f_scalar(z);
        assert!((t - via_f).norm() < 1e-12);
        let c = coth_half_scalar(z);
        let via_f = 2.0 / z + 2.0 * f_scalar(z);
        assert!((c - via_f).norm() < 1e-12);
    }

    #[test]
    fn f_coefficients_start_as_bernoulli_ratios() {
        assert_relative_eq!(f_coefficient(1), 1.0 / 12.0, epsilon = 1e-15);
        assert_relative_eq!(f_coefficient(2), -1.0 / 720.0, epsilon = 1e-18);
        assert_relative_eq!(f_coefficient(3), 1.0 / 30240.0, epsilon = 1e-19);
        assert_relative_eq!(f_coefficient(4), -1.0 / 1209600.0, epsilon = 1e-20);
    }
}
