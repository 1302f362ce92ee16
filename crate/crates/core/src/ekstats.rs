//! Erdős–Kac statistics of additive functions over families of quadratic characters.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};
use core::fmt;

use crate::arith::{is_perfect_square, kronecker_i128, sieve_primes, sieve_squarefree, FactorSieve};
use crate::characters::{char_from_element, enumerate_characters, BaseField, Prime, QuadraticCharacter};
use crate::error::{Error, Result};
use crate::quadfield::{FieldElement, Splitting};
use crate::selmer::{IsogenyPair, SelmerDescentResult};

/// The value an additive function takes at a prime.
#[derive(Clone)]
pub enum PrimeRule {
    /// `f(π) = 1`: the number of prime factors of `D_χ`.
    Omega,
    Zero,
    /// `((b/π) − (a² − 4b/π))/2` at primes not above `2Δ`, 0 elsewhere.
    CurveG(IsogenyPair),
    Custom(Arc<dyn Fn(&Prime) -> f64 + Send + Sync>),
}

impl fmt::Debug for PrimeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeRule::Omega => f.write_str("Omega"),
            PrimeRule::Zero => f.write_str("Zero"),
            PrimeRule::CurveG(pair) => write!(f, "CurveG({}, {})", pair.a(), pair.b()),
            PrimeRule::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// An additive function on the primes of `field`.
#[derive(Debug, Clone)]
pub struct AdditiveFunctionSpec {
    pub field: BaseField,
    pub rule: PrimeRule,
    /// Asserts `0 ≤ f(π) ≤ 1`; checked at every evaluation.
    pub bounded_01: bool,
}

impl AdditiveFunctionSpec {
    pub fn omega(field: BaseField) -> Self {
        AdditiveFunctionSpec { field, rule: PrimeRule::Omega, bounded_01: true }
    }

    pub fn zero(field: BaseField) -> Self {
        AdditiveFunctionSpec { field, rule: PrimeRule::Zero, bounded_01: true }
    }

    /// `g_E`, with values in `{−1, 0, 1}`.
    pub fn curve_g(field: BaseField, pair: IsogenyPair) -> Self {
        AdditiveFunctionSpec { field, rule: PrimeRule::CurveG(pair), bounded_01: false }
    }

    pub fn custom(field: BaseField, f: impl Fn(&Prime) -> f64 + Send + Sync + 'static, bounded_01: bool) -> Self {
        AdditiveFunctionSpec { field, rule: PrimeRule::Custom(Arc::new(f)), bounded_01 }
    }

    /// `f(π)`.
    pub fn at(&self, prime: &Prime) -> f64 {
        let v = match &self.rule {
            PrimeRule::Omega => 1.0,
            PrimeRule::Zero => 0.0,
            PrimeRule::CurveG(pair) => curve_g_at(pair, prime) as f64,
            PrimeRule::Custom(f) => f(prime),
        };
        assert!(!self.bounded_01 || (0.0..=1.0).contains(&v), "f({prime}) = {v} outside [0, 1]");
        v
    }
}

fn curve_g_at(pair: &IsogenyPair, prime: &Prime) -> i32 {
    let p = prime.p();
    if p == 2 || pair.bad_primes().binary_search(&p).is_ok() {
        return 0;
    }
    // Rational integers are squares in F_{p²}.
    if let Prime::Ideal(q) = prime {
        if q.splitting() == Splitting::Inert {
            return 0;
        }
    }
    let s_prime = kronecker_i128(pair.b() as i128, p as i128) as i32;
    let s = kronecker_i128(pair.b_prime() as i128, p as i128) as i32;
    (s_prime - s) / 2
}

/// Sum with `O(log n)` rounding growth, independent of how the input was produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

fn prime_sum(f: &AdditiveFunctionSpec, x: u64, term: impl Fn(f64, f64) -> f64) -> f64 {
    let terms: Vec<f64> = f.field.primes_up_to(x).iter().map(|p| term(f.at(p), p.norm() as f64)).collect();
    pairwise_sum(&terms)
}

/// `μ_f(X) = Σ_{Nπ<X} f(π)/Nπ`.
pub fn mu_f(f: &AdditiveFunctionSpec, x: u64) -> f64 {
    prime_sum(f, x, |v, n| v / n)
}

/// `σ_f(X) = (Σ_{Nπ<X} f(π)²/Nπ)^{1/2}`.
pub fn sigma_f(f: &AdditiveFunctionSpec, x: u64) -> f64 {
    libm::sqrt(prime_sum(f, x, |v, n| v * v / n))
}

/// `μ̃_f(X) = Σ_{Nπ<X} f(π)/(Nπ + 1)`.
pub fn mu_tilde_f(f: &AdditiveFunctionSpec, x: u64) -> f64 {
    prime_sum(f, x, |v, n| v / (n + 1.0))
}

/// `g_π(χ)`: `f(π)(1 − 1/(Nπ+1))` if `π | D_χ`, else `−f(π)/(Nπ+1)`.
pub fn centered_g(f: &AdditiveFunctionSpec, prime: &Prime, chi: &QuadraticCharacter) -> f64 {
    let v = f.at(prime);
    let n = prime.norm() as f64;
    if chi.divides_conductor(prime) {
        v * (1.0 - 1.0 / (n + 1.0))
    } else {
        -v / (n + 1.0)
    }
}

/// `c_k = Γ(k+1)/(2^{k/2} Γ(k/2+1)) = (k − 1)!!` for even `k`.
pub fn moment_constant(k: u32) -> Result<f64> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::OddMomentOrder(k));
    }
    Ok((1..k).step_by(2).map(|j| j as f64).product())
}

/// The Γ expression for `c_k` at any `k ≥ 1`; for odd `k` it is `E|Z|^k`.
pub fn moment_constant_gamma(k: u32) -> f64 {
    let k = k as f64;
    libm::exp(libm::lgamma(k + 1.0) - k / 2.0 * core::f64::consts::LN_2 - libm::lgamma(k / 2.0 + 1.0))
}

/// Empirical `k`-th moment of `Σ_{Nπ<z} g_π(χ)` over `C(K, X)` against its prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub x: u64,
    pub z: f64,
    pub k: u32,
    pub sigma_z: f64,
    pub empirical: f64,
    /// `c_k σ_f(z)^k` for even `k`; the bound `c_k σ_f(z)^{k−1} k^{3/2}` for odd `k`.
    pub predicted: f64,
    pub ratio: f64,
    /// `k > σ_f(z)^{2/3}`: outside the range where the moment asymptotic is uniform.
    pub outside_uniform_range: bool,
    pub characters: usize,
}

/// Default prime cutoff `z = X^{(1 − λ)/k}` with `λ = 1/2`.
pub fn default_z(x: u64, k: u32) -> f64 {
    libm::pow(x as f64, 0.5 / k as f64)
}

/// The `k`-th moment of `Σ_{Nπ<z} g_π(χ)` over `C(K, X)`; `z` defaults to [`default_z`].
pub fn empirical_moment(f: &AdditiveFunctionSpec, x: u64, k: u32, z: Option<f64>) -> Result<MomentReport> {
    if k == 0 {
        return Err(Error::OutOfRange("moment order must be positive".into()));
    }
    if !f.bounded_01 {
        return Err(Error::OutOfRange("moments need an additive function bounded in [0, 1]".into()));
    }
    let z = z.unwrap_or_else(|| default_z(x, k));
    let zc = libm::ceil(z) as u64;
    let small: Vec<Prime> = f.field.primes_up_to(zc).into_iter().filter(|p| (p.norm() as f64) < z).collect();
    let weights: Vec<f64> = small.iter().map(|p| f.at(p)).collect();
    // Σ g_π(χ) = Σ_{π | D_χ} f(π) − Σ_π f(π)/(Nπ+1).
    let shift = -pairwise_sum(&small.iter().zip(&weights).map(|(p, w)| w / (p.norm() as f64 + 1.0)).collect::<Vec<_>>());
    let power = |s: f64| libm::pow(s, k as f64);
    let terms: Vec<f64> = match &f.field {
        BaseField::Rational => sieve_squarefree(x)?
            .iter()
            .map(|d| {
                let n = d.unsigned_abs();
                let hit: f64 = small.iter().zip(&weights).filter(|(p, _)| n % p.p() == 0).map(|(_, w)| *w).sum();
                power(shift + hit)
            })
            .collect(),
        BaseField::Quadratic(_) => enumerate_characters(&f.field, x)?
            .iter()
            .map(|chi| {
                let hit: f64 = small.iter().zip(&weights).filter(|(p, _)| chi.divides_conductor(p)).map(|(_, w)| *w).sum();
                power(shift + hit)
            })
            .collect(),
    };
    let empirical = pairwise_sum(&terms) / terms.len() as f64;
    let sigma_z = sigma_from(&small, &weights);
    let predicted = if k % 2 == 0 {
        moment_constant(k)? * libm::pow(sigma_z, k as f64)
    } else {
        moment_constant_gamma(k) * libm::pow(sigma_z, (k - 1) as f64) * libm::pow(k as f64, 1.5)
    };
    Ok(MomentReport {
        x,
        z,
        k,
        sigma_z,
        empirical,
        predicted,
        ratio: empirical / predicted,
        outside_uniform_range: k as f64 > libm::pow(sigma_z, 2.0 / 3.0),
        characters: terms.len(),
    })
}

fn sigma_from(primes: &[Prime], weights: &[f64]) -> f64 {
    let terms: Vec<f64> = primes.iter().zip(weights).map(|(p, w)| w * w / p.norm() as f64).collect();
    libm::sqrt(pairwise_sum(&terms))
}

/// `G(𝔮) = ∏_{π^α ‖ 𝔮} (f(π)^α/(Nπ+1))((1 − 1/(Nπ+1))^α + Nπ(−1/(Nπ+1))^α)`.
pub fn mainterm_g(f: &AdditiveFunctionSpec, q: &[(Prime, u32)]) -> f64 {
    q.iter()
        .map(|&(p, alpha)| {
            // (1 − r) + n(−r) vanishes exactly; floating point would leave a residue.
            if alpha == 1 {
                return 0.0;
            }
            let n = p.norm() as f64;
            let a = alpha as i32;
            let r = 1.0 / (n + 1.0);
            libm::pow(f.at(&p), a as f64) * r * (libm::pow(1.0 - r, a as f64) + n * libm::pow(-r, a as f64))
        })
        .product()
}

/// The standard normal distribution function.
pub fn gaussian_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Points at which the empirical and Gaussian distribution functions are compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    /// Every distinct sample value.
    Sample,
    /// Values lie on `origin + step·Z`; compare at the midpoints between lattice
    /// points (a continuity correction for integer-valued data).
    Lattice { origin: f64, step: f64 },
}

impl Grid {
    pub const INTEGER: Grid = Grid::Lattice { origin: 0.0, step: 1.0 };
}

/// Largest number of lattice grid points [`distribution_report`] will build.
pub const MAX_GRID_POINTS: usize = 1 << 20;

/// Empirical law of `(v − center)/scale` against the standard Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionReport {
    /// The cutoff `X` of the family the values came from, when there is one.
    pub x: Option<u64>,
    pub n: usize,
    pub center: f64,
    pub scale: f64,
    /// Normalized evaluation points, increasing.
    pub grid: Vec<f64>,
    pub empirical_cdf: Vec<f64>,
    pub gaussian_cdf: Vec<f64>,
    /// `max |empirical − gaussian|` over the grid.
    pub ks: f64,
}

pub fn distribution_report(values: &[f64], center: f64, scale: f64, grid: Grid) -> Result<DistributionReport> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::OutOfRange(format!("scale {scale} must be positive")));
    }
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) || !center.is_finite() {
        return Err(Error::OutOfRange("values must be finite and nonempty".into()));
    }
    let n = values.len();
    let (points, counts): (Vec<f64>, Vec<usize>) = match grid {
        Grid::Sample => {
            let mut sorted = values.to_vec();
            sorted.sort_by(f64::total_cmp);
            let mut points = Vec::new();
            let mut counts = Vec::new();
            for (i, &v) in sorted.iter().enumerate() {
                if i + 1 == n || sorted[i + 1] != v {
                    points.push(v);
                    counts.push(i + 1);
                }
            }
            (points, counts)
        }
        Grid::Lattice { origin, step } => {
            if step.is_nan() || step <= 0.0 {
                return Err(Error::OutOfRange(format!("lattice step {step} must be positive")));
            }
            let mut hist: BTreeMap<i64, usize> = BTreeMap::new();
            for &v in values {
                let t = (v - origin) / step;
                let r = libm::round(t);
                if libm::fabs(t - r) > 1e-6 {
                    return Err(Error::OutOfRange(format!("{v} is off the lattice {origin} + {step}Z")));
                }
                *hist.entry(r as i64).or_default() += 1;
            }
            let (lo, hi) = (*hist.keys().next().unwrap() - 1, *hist.keys().next_back().unwrap());
            if (hi - lo) as usize + 1 > MAX_GRID_POINTS {
                return Err(Error::OutOfRange("lattice grid too large".into()));
            }
            let mut acc = 0;
            let mut points = Vec::new();
            let mut counts = Vec::new();
            for j in lo..=hi {
                acc += hist.get(&j).copied().unwrap_or(0);
                points.push(origin + (j as f64 + 0.5) * step);
                counts.push(acc);
            }
            (points, counts)
        }
    };
    let grid: Vec<f64> = points.iter().map(|v| (v - center) / scale).collect();
    let empirical_cdf: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let gaussian: Vec<f64> = grid.iter().map(|&t| gaussian_cdf(t)).collect();
    let ks = empirical_cdf.iter().zip(&gaussian).map(|(e, g)| libm::fabs(e - g)).fold(0.0, f64::max);
    Ok(DistributionReport { x: None, n, center, scale, grid, empirical_cdf, gaussian_cdf: gaussian, ks })
}

/// `Σ_{Nπ ≤ X} (1 + (c/π))/Nπ` for nonsquare `c`. Over `Q` the symbol is
/// Kronecker's, so `p = 2` contributes; over `K` primes above 2 contribute `1/Nπ`.
pub fn mertens_char_sum(field: &BaseField, c: FieldElement, x: u64) -> Result<f64> {
    if c.is_zero() {
        return Err(Error::Zero);
    }
    let terms: Vec<f64> = match field {
        BaseField::Rational => {
            let ci = i64::try_from(c.x).ok().filter(|_| c.y == 0).ok_or_else(|| Error::OutOfRange(format!("{c} is not a rational integer")))?;
            if is_perfect_square(ci as i128) {
                return Err(Error::SquareCharacter(ci));
            }
            if x < 2 {
                return Ok(0.0);
            }
            sieve_primes(x + 1)?
                .iter()
                .map(|p| (1.0 + kronecker_i128(ci as i128, p as i128) as f64) / p as f64)
                .collect()
        }
        BaseField::Quadratic(_) => {
            let chi = char_from_element(field, c)?;
            if chi.is_trivial() {
                return Err(Error::SquareCharacter(i64::try_from(c.x).unwrap_or(i64::MAX)));
            }
            field
                .primes_up_to(x + 1)
                .iter()
                .map(|p| (1.0 + chi.value_at(p).unwrap_or(0) as f64) / p.norm() as f64)
                .collect()
        }
    };
    Ok(pairwise_sum(&terms))
}

/// `√(½ log log X)`.
pub fn sigma_g_predicted(x: f64) -> Result<f64> {
    let ll = libm::log(libm::log(x));
    if ll.is_nan() || ll <= 0.0 {
        return Err(Error::OutOfRange(format!("log log {x} is not positive")));
    }
    Ok(libm::sqrt(0.5 * ll))
}

/// `σ_g(X) = (½ Σ_{p<X, p ∤ 2Δ} (1 − (ΔΔ'/p))/p)^{1/2}`, with `ΔΔ' = b(a² − 4b)`.
pub fn sigma_g(pair: &IsogenyPair, x: u64) -> f64 {
    sigma_f(&AdditiveFunctionSpec::curve_g(BaseField::Rational, pair.clone()), x)
}

/// Fraction of `results` with `ord₂T ≥ r`.
pub fn tail_fraction(results: &[SelmerDescentResult], r: i32) -> Result<f64> {
    let values: Vec<i32> = results.iter().map(|s| s.ord2t()).collect();
    tail_fraction_of(&values, r)
}

/// [`tail_fraction`] on bare `ord₂T` values.
pub fn tail_fraction_of(ord2t: &[i32], r: i32) -> Result<f64> {
    if ord2t.is_empty() {
        return Err(Error::OutOfRange("no results".into()));
    }
    Ok(ord2t.iter().filter(|&&t| t >= r).count() as f64 / ord2t.len() as f64)
}

/// `f(χ)` for every `χ ∈ C(K, X)`, in enumeration order. Over `Q` this
/// factors through a sieve instead of building the characters.
pub fn additive_values(f: &AdditiveFunctionSpec, x: u64) -> Result<Vec<f64>> {
    match &f.field {
        BaseField::Rational => {
            let sieve = FactorSieve::new(x);
            let mut primes = Vec::new();
            Ok(sieve_squarefree(x)?
                .iter()
                .map(|d| {
                    primes.clear();
                    sieve.distinct_primes_into(d.unsigned_abs(), &mut primes);
                    primes.iter().map(|&p| f.at(&Prime::Rational(p))).sum()
                })
                .collect())
        }
        BaseField::Quadratic(_) => Ok(enumerate_characters(&f.field, x)?
            .iter()
            .map(|chi| crate::characters::eval_additive(f, chi))
            .collect()),
    }
}

/// The standard normal density.
pub fn gaussian_pdf(z: f64) -> f64 {
    libm::exp(-0.5 * z * z) / libm::sqrt(2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::QuadraticCharacter;
    use crate::selmer::make_pair;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    fn omega() -> AdditiveFunctionSpec {
        AdditiveFunctionSpec::omega(BaseField::Rational)
    }

    #[test]
    fn stated_prime_sums() {
        let f = omega();
        let mu = 0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0;
        assert!((mu_f(&f, 10) - mu).abs() < 1e-12);
        assert!((mu - 1.17619).abs() < 1e-5);
        assert!((sigma_f(&f, 10) - libm::sqrt(mu)).abs() < 1e-12);
        assert!((sigma_f(&f, 10) - 1.08452).abs() < 1e-5);
        assert_eq!((mu_f(&f, 2), sigma_f(&f, 2)), (0.0, 0.0));
        let zero = AdditiveFunctionSpec::zero(BaseField::Rational);
        assert_eq!((mu_f(&zero, 1000), sigma_f(&zero, 1000)), (0.0, 0.0));
        assert!((mu_tilde_f(&f, 10) - 0.875).abs() < 1e-12);
        assert_eq!(mu_tilde_f(&f, 2), 0.0);
    }

    #[test]
    fn mu_tilde_gap_is_bounded_and_settles() {
        let f = omega();
        let gap = |x| mu_f(&f, x) - mu_tilde_f(&f, x);
        let (g4, g6) = (gap(10_000), gap(1_000_000));
        assert!(g6 < 0.8 && g6 > 0.0);
        // Σ_{p ≥ 10⁴} 1/(p(p+1)) < Σ_{n ≥ 10⁴} 1/n².
        assert!(g6 - g4 < 1e-4 && g6 >= g4);
    }

    proptest! {
        #[test]
        fn mu_tilde_lies_just_below_mu(x in 2u64..5000, seed in 0u64..1000) {
            let f = AdditiveFunctionSpec::custom(BaseField::Rational, move |p| ((p.p() * 2654435761 + seed) % 1000) as f64 / 999.0, true);
            let gap = mu_tilde_f(&f, x) - mu_f(&f, x);
            prop_assert!(gap > -1.0 && gap <= 0.0);
        }
    }

    #[test]
    fn stated_centered_values() {
        let f = omega();
        let three = Prime::Rational(3);
        let chi = |d| QuadraticCharacter::rational(d).unwrap();
        assert_eq!(centered_g(&f, &three, &chi(15)), 0.75);
        assert_eq!(centered_g(&f, &three, &chi(7)), -0.25);
        let zero = AdditiveFunctionSpec::zero(BaseField::Rational);
        assert_eq!(centered_g(&zero, &three, &chi(15)), 0.0);
        assert_eq!(centered_g(&zero, &three, &chi(7)), 0.0);
    }

    #[test]
    fn divisibility_frequency_is_one_over_norm_plus_one() {
        let x = 1_000_000;
        let ds = sieve_squarefree(x).unwrap();
        let n = ds.len() as f64;
        for p in sieve_primes(72).unwrap().iter().take(20) {
            let hits = ds.iter().filter(|d| d.unsigned_abs() % p == 0).count() as f64;
            let prob = 1.0 / (p as f64 + 1.0);
            let se = libm::sqrt(prob * (1.0 - prob) / n);
            assert!((hits / n - prob).abs() < 3.0 * se, "p={p}: {} vs {prob} (se {se})", hits / n);
            // Hence Σ_χ g_π(χ) = |C|·(freq − 1/(p+1)) is small against |C|.
            let f = omega();
            let total: f64 = ds.iter().map(|d| centered_g(&f, &Prime::Rational(p), &QuadraticCharacter::rational(d.get()).unwrap())).sum();
            assert!(total.abs() / n < 3.0 * se);
        }
    }

    #[test]
    fn moment_constants() {
        assert_eq!(moment_constant(2).unwrap(), 1.0);
        assert_eq!(moment_constant(4).unwrap(), 3.0);
        assert_eq!(moment_constant(6).unwrap(), 15.0);
        assert_eq!(moment_constant(8).unwrap(), 105.0);
        assert_eq!(moment_constant(3), Err(Error::OddMomentOrder(3)));
        for k in [2u32, 4, 6, 8] {
            assert!((moment_constant_gamma(k) - moment_constant(k).unwrap()).abs() < 1e-9);
            // Gaussian moments by quadrature: ∫ z^k φ(z) dz.
            let h = 1e-3;
            let quad: f64 = (-12_000..=12_000).map(|i| (i as f64 * h).powi(k as i32) * gaussian_pdf(i as f64 * h) * h).sum();
            assert!((quad - moment_constant(k).unwrap()).abs() < 1e-6, "k={k}: {quad}");
        }
        assert!((moment_constant_gamma(1) - libm::sqrt(2.0 / PI)).abs() < 1e-12);
    }

    #[test]
    fn zero_function_has_zero_moments() {
        let zero = AdditiveFunctionSpec::zero(BaseField::Rational);
        let r = empirical_moment(&zero, 10_000, 2, None).unwrap();
        assert_eq!(r.empirical, 0.0);
    }

    #[test]
    fn moments_against_direct_evaluation() {
        let f = omega();
        let x = 3000;
        let z = 20.0;
        let primes: Vec<Prime> = sieve_primes(20).unwrap().iter().map(Prime::Rational).collect();
        let chis: Vec<QuadraticCharacter> = sieve_squarefree(x).unwrap().iter().map(|d| QuadraticCharacter::rational(d.get()).unwrap()).collect();
        for k in 1..=4u32 {
            let direct: f64 = chis
                .iter()
                .map(|chi| primes.iter().map(|p| centered_g(&f, p, chi)).sum::<f64>().powi(k as i32))
                .sum::<f64>()
                / chis.len() as f64;
            let r = empirical_moment(&f, x, k, Some(z)).unwrap();
            assert!((r.empirical - direct).abs() < 1e-9, "k={k}");
        }
        let k = BaseField::quadratic(-1).unwrap();
        let fk = AdditiveFunctionSpec::omega(k.clone());
        let primes = k.primes_up_to(14);
        let chis = enumerate_characters(&k, 2000).unwrap();
        let direct: f64 = chis.iter().map(|chi| primes.iter().map(|p| centered_g(&fk, p, chi)).sum::<f64>().powi(2)).sum::<f64>() / chis.len() as f64;
        let r = empirical_moment(&fk, 2000, 2, Some(14.0)).unwrap();
        assert!((r.empirical - direct).abs() < 1e-9);
    }

    #[test]
    fn odd_first_moment_within_bound() {
        let r = empirical_moment(&omega(), 1_000_000, 1, None).unwrap();
        assert!(r.empirical.abs() <= r.predicted, "{r:?}");
    }

    #[test]
    fn stated_g_values() {
        let f = omega();
        let three = Prime::Rational(3);
        assert_eq!(mainterm_g(&f, &[(three, 1)]), 0.0);
        let g = mainterm_g(&f, &[(three, 2)]);
        assert!((g - 3.0 / 16.0).abs() < 1e-15);
        assert!(g <= 1.0 / 3.0);
        assert_eq!(mainterm_g(&f, &[]), 1.0);
    }

    proptest! {
        #[test]
        fn g_vanishes_off_squarefull(exps in proptest::collection::vec(1u32..4, 1..5), which in 0usize..5, seed in 0u64..100) {
            let mut exps = exps;
            let i = which % exps.len();
            exps[i] = 1;
            let f = AdditiveFunctionSpec::custom(BaseField::Rational, move |p| ((p.p() + seed) % 7) as f64 / 6.0, true);
            let q: Vec<(Prime, u32)> = sieve_primes(30).unwrap().iter().zip(&exps).map(|(p, &e)| (Prime::Rational(p), e)).collect();
            prop_assert_eq!(mainterm_g(&f, &q), 0.0);
        }

        #[test]
        fn g_of_squares_is_bounded(pi in 0usize..20, alpha in 2u32..6) {
            let p = sieve_primes(80).unwrap().primes()[pi];
            let g = mainterm_g(&omega(), &[(Prime::Rational(p), alpha)]);
            prop_assert!(g >= 0.0 && g <= 1.0 / p as f64 + 1e-15);
        }
    }

    #[test]
    fn stated_gaussian_values() {
        assert_eq!(gaussian_cdf(0.0), 0.5);
        assert!((gaussian_cdf(1.96) - 0.9750021048517795).abs() < 1e-10);
        // Quadrature oracle by Simpson's rule on [0, z].
        for z in [0.3, 1.0, 1.96, 3.5] {
            let n = 20_000;
            let h = z / n as f64;
            let s: f64 = (0..=n)
                .map(|i| {
                    let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    w * gaussian_pdf(i as f64 * h)
                })
                .sum();
            assert!((0.5 + s * h / 3.0 - gaussian_cdf(z)).abs() < 1e-10, "z={z}");
            assert!((gaussian_cdf(-z) - (1.0 - gaussian_cdf(z))).abs() < 1e-15);
        }
    }

    #[test]
    fn normal_sample_is_close_to_gaussian() {
        let mut rng = StdRng::seed_from_u64(7);
        let values: Vec<f64> = (0..100_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let r = distribution_report(&values, 0.0, 1.0, Grid::Sample).unwrap();
        assert!(r.ks < 0.02, "{}", r.ks);
        assert!(r.empirical_cdf.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn constant_values_are_far_from_gaussian() {
        let r = distribution_report(&[3.0; 50], 3.0, 1.0, Grid::Sample).unwrap();
        assert!((r.ks - 0.5).abs() < 1e-12);
        let r = distribution_report(&[3.0; 50], 3.0, 1.0, Grid::INTEGER).unwrap();
        assert!(r.ks >= 0.3);
        assert!(distribution_report(&[1.0], 0.0, 0.0, Grid::Sample).is_err());
        assert!(distribution_report(&[1.5], 0.0, 1.0, Grid::INTEGER).is_err());
    }

    proptest! {
        #[test]
        fn ks_is_affine_invariant(values in proptest::collection::vec(-20i32..20, 1..200), a in 0.1f64..10.0, b in -50.0f64..50.0, center in -3.0f64..3.0, scale in 0.5f64..4.0) {
            let v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
            let w: Vec<f64> = v.iter().map(|x| a * x + b).collect();
            let r1 = distribution_report(&v, center, scale, Grid::INTEGER).unwrap();
            let r2 = distribution_report(&w, a * center + b, a * scale, Grid::Lattice { origin: b, step: a }).unwrap();
            prop_assert!((r1.ks - r2.ks).abs() < 1e-9);
            let s1 = distribution_report(&v, center, scale, Grid::Sample).unwrap();
            let s2 = distribution_report(&w, a * center + b, a * scale, Grid::Sample).unwrap();
            prop_assert!((s1.ks - s2.ks).abs() < 1e-9);
            prop_assert!(r1.empirical_cdf.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(r1.gaussian_cdf.windows(2).all(|w| w[0] <= w[1]));
            let max = r1.empirical_cdf.iter().zip(&r1.gaussian_cdf).map(|(e, g)| (e - g).abs()).fold(0.0, f64::max);
            prop_assert_eq!(r1.ks, max);
        }
    }

    #[test]
    fn stated_mertens_values() {
        let q = BaseField::Rational;
        assert!((mertens_char_sum(&q, FieldElement::new(5, 0), 10).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(mertens_char_sum(&q, FieldElement::new(5, 0), 1).unwrap(), 0.0);
        assert_eq!(mertens_char_sum(&q, FieldElement::new(9, 0), 100), Err(Error::SquareCharacter(9)));
        assert_eq!(mertens_char_sum(&q, FieldElement::new(1, 0), 100), Err(Error::SquareCharacter(1)));
    }

    #[test]
    fn mertens_sums_track_log_log() {
        for c in [5i128, -1, -6] {
            let grid = [1_000u64, 10_000, 100_000, 1_000_000];
            let sums: Vec<f64> = grid.iter().map(|&x| mertens_char_sum(&BaseField::Rational, FieldElement::new(c, 0), x).unwrap()).collect();
            for i in 1..grid.len() {
                let ll = |x: u64| libm::log(libm::log(x as f64));
                let diff = (sums[i] - sums[i - 1]) - (ll(grid[i]) - ll(grid[i - 1]));
                assert!(diff.abs() <= 0.5, "c={c}: {diff}");
            }
        }
    }

    #[test]
    fn mertens_over_a_quadratic_field() {
        let k = BaseField::quadratic(-1).unwrap();
        assert!(matches!(mertens_char_sum(&k, FieldElement::new(-1, 0), 100), Err(Error::SquareCharacter(_))));
        let ll = |x: f64| libm::log(libm::log(x));
        let a = mertens_char_sum(&k, FieldElement::new(3, 0), 1_000).unwrap();
        let b = mertens_char_sum(&k, FieldElement::new(3, 0), 100_000).unwrap();
        assert!(((b - a) - (ll(1e5) - ll(1e3))).abs() < 0.5);
    }

    #[test]
    fn stated_sigma_g_predictions() {
        assert!((sigma_g_predicted(1e6).unwrap() - 1.1458).abs() < 1e-4);
        let ee = libm::exp(core::f64::consts::E);
        assert!((sigma_g_predicted(ee).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(sigma_g_predicted(2.0).is_err());
    }

    #[test]
    fn sigma_g_matches_the_symbol_sum_and_prediction() {
        let pair = make_pair(1, -1).unwrap();
        let bb = pair.b() as i128 * pair.b_prime() as i128;
        let mut gaps = Vec::new();
        for x in [1_000u64, 10_000, 100_000, 1_000_000] {
            let direct: f64 = sieve_primes(x)
                .unwrap()
                .iter()
                .filter(|&p| p != 2 && pair.bad_primes().binary_search(&p).is_err())
                .map(|p| (1.0 - kronecker_i128(bb, p as i128) as f64) / p as f64)
                .sum();
            let exact = sigma_g(&pair, x);
            assert!((exact - libm::sqrt(0.5 * direct)).abs() < 1e-12);
            gaps.push(exact - sigma_g_predicted(x as f64).unwrap());
        }
        assert!(gaps.iter().all(|g| g.abs() < 1.0), "{gaps:?}");
    }

    #[test]
    fn stated_tail_fractions() {
        let v = vec![0, 1, 2, 3];
        assert_eq!(tail_fraction_of(&v, -100).unwrap(), 1.0);
        assert_eq!(tail_fraction_of(&v, 100).unwrap(), 0.0);
        assert_eq!(tail_fraction_of(&v, 2).unwrap(), 0.5);
        assert!(tail_fraction_of(&[], 0).is_err());
    }

    #[test]
    fn additive_values_match_characters() {
        let f = AdditiveFunctionSpec::curve_g(BaseField::Rational, make_pair(1, -1).unwrap());
        let fast = additive_values(&f, 3000).unwrap();
        let slow: Vec<f64> = enumerate_characters(&BaseField::Rational, 3000)
            .unwrap()
            .iter()
            .map(|chi| crate::characters::eval_additive(&f, chi))
            .collect();
        assert_eq!(fast, slow);
        assert_eq!(additive_values(&omega(), 31).unwrap().len(), 2 * 19);
    }

    #[test]
    #[should_panic(expected = "outside [0, 1]")]
    fn bounded_flag_is_enforced() {
        let f = AdditiveFunctionSpec::custom(BaseField::Rational, |_| 2.0, true);
        f.at(&Prime::Rational(3));
    }
}
