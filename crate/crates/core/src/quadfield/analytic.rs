//! `res_{s=1} ζ_K`, `ζ_K(2)` and the main terms built from them.

use core::f64::consts::PI;

use super::counting::phi_qd;
use super::ideal::{primes_up_to, IdealK};
use super::QuadraticField;
use crate::arith::kronecker_i128;
use crate::error::Result;

/// `2^{r1} (2π)^{r2} h R / (w √|d_K|)`.
pub fn zeta_residue(field: &QuadraticField) -> f64 {
    let (r1, r2) = field.signature();
    let reg = if field.is_real() { field.regulator() } else { 1.0 };
    let num = libm::pow(2.0, r1 as f64) * libm::pow(2.0 * PI, r2 as f64) * field.class_number() as f64 * reg;
    num / (field.num_roots_of_unity() as f64 * libm::sqrt(field.disc().unsigned_abs() as f64))
}

/// `ζ_K(2) = ζ(2)·L(χ_{d_K}, 2)`, with `L(χ, 2) = |d|⁻² Σ_a χ(a) ψ₁(a/|d|)`.
pub fn zeta_at_2(field: &QuadraticField) -> f64 {
    let d = field.disc() as i128;
    let n = d.unsigned_abs() as u64;
    let mut l = 0.0;
    for a in 1..n {
        let chi = kronecker_i128(d, a as i128);
        if chi != 0 {
            l += chi as f64 * trigamma(a as f64 / n as f64);
        }
    }
    PI * PI / 6.0 * l / (n as f64 * n as f64)
}

/// `ψ₁(x) = Σ_{k≥0} 1/(x + k)²` for `x > 0`.
fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 12.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let t = 1.0 / (x * x);
    // Asymptotic series 1/x + 1/(2x²) + Σ B_{2k}/x^{2k+1}.
    let tail = 1.0 + t * (1.0 / 6.0 - t * (1.0 / 30.0 - t * (1.0 / 42.0 - t * (1.0 / 30.0 - t * 5.0 / 66.0))));
    acc + 1.0 / (2.0 * x * x) + tail / x
}

/// A truncated Euler product with a bound on what the omitted factors can add.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProduct {
    pub value: f64,
    /// The full product lies in `[value, value + tail_bound]`.
    pub tail_bound: f64,
}

/// `∏_{N𝔭 < bound} (1 − N𝔭⁻²)⁻¹`. At most two primes have any given norm, so
/// the omitted factors multiply to at most `exp(Σ_{n≥B} 2/(n² − 1)) ≤ exp(2/(B − 1))`.
pub fn zeta_at_2_euler(field: &QuadraticField, bound: u64) -> EulerProduct {
    let mut log = 0.0;
    for q in primes_up_to(field, bound) {
        let n = q.norm() as f64;
        log -= libm::log1p(-1.0 / (n * n));
    }
    let value = libm::exp(log);
    let bound = bound.max(2) as f64;
    EulerProduct { value, tail_bound: value * libm::expm1(2.0 / (bound - 1.0)) }
}

/// `(1/h)(res ζ_K / ζ_K(2)) φ(𝔮, 𝔡) X`.
pub fn mainterm_sf(field: &QuadraticField, x: f64, _c: &IdealK, q: &IdealK, d: &IdealK) -> Result<f64> {
    let phi = phi_qd(field, q, d)?.to_f64();
    Ok(zeta_residue(field) / zeta_at_2(field) / field.class_number() as f64 * phi * x)
}

/// `c(K) = |O_K^×/(O_K^×)²| (1/h)(res ζ_K/ζ_K(2)) Σ_𝔟 N𝔟⁻²`.
pub fn density_constant(field: &QuadraticField) -> f64 {
    let units = field.units_mod_squares().len() as f64;
    let sum_b: f64 = field
        .class_data()
        .representatives()
        .iter()
        .map(|b| {
            let n = b.norm() as f64;
            1.0 / (n * n)
        })
        .sum();
    units * zeta_residue(field) / zeta_at_2(field) / field.class_number() as f64 * sum_b
}
