//! Local solubility of the 2-covering quartics `δw² = δ² − 2aδz² + (a² − 4b)z⁴`.
//!
//! A point over `Q_v` exists iff `δ·G(x, s)` is a square (or zero) for some
//! `(x : s) ∈ P¹(Q_v)`, where `G(x, s) = δ²s⁴ − 2aδx²s² + (a² − 4b)x⁴`.
//! `P¹(Q_p)` is covered by the two charts `x ∈ Z_p, s = 1` and `x = 1, s ∈ pZ_p`;
//! the second contains the point at infinity of the affine model.
//!
//! Each chart is searched as a tree of residue discs. A disc carries the
//! polynomial `h(t)` with `g(x₀ + pⁿt) = p^k h(t)` and `h` primitive. At odd `p`
//! the reduction `h̄ ∈ F_p[t]` decides everything except the discs around its
//! roots; at `p = 2` a disc is closed once its square class is constant.

use alloc::vec::Vec;

use num_bigint::BigInt;

use super::fp_poly;
use super::primes::pow_mod;
use super::square_class::{Place, SquareClassLocal};
use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 512;

/// Whether `δw² = δ² − 2aδz² + (a² − 4b)z⁴` has a point over the completion at `place`.
pub fn torsor_locally_solvable(a: i64, b: i64, delta: &SquareClassLocal, place: Place) -> Result<bool> {
    if delta.place() != place {
        return Err(Error::PlaceMismatch);
    }
    quartic_solvable(a as i128, b as i128, delta.representative() as i128, place)
}

pub(crate) fn quartic_solvable(a: i128, b: i128, delta: i128, place: Place) -> Result<bool> {
    if b == 0 || a * a - 4 * b == 0 {
        return Err(Error::SingularCurve { a: a as i64, b: b as i64 });
    }
    if delta == 0 {
        return Err(Error::Zero);
    }
    match place {
        Place::Real => Ok(real_solvable(a, b, delta)),
        Place::Finite(p) => match padic_solvable::<i128>(a, b, delta, p) {
            Ok(found) => Ok(found),
            Err(Fail::Overflow) => match padic_solvable::<BigInt>(a, b, delta, p) {
                Ok(found) => Ok(found),
                Err(_) => Err(Error::SearchDepthExceeded { p }),
            },
            Err(Fail::Depth) => Err(Error::SearchDepthExceeded { p }),
        },
    }
}

/// Sign analysis of `δ·G` on `R²`; with `t = x²` this is a quadratic on `t ≥ 0`.
fn real_solvable(a: i128, b: i128, delta: i128) -> bool {
    if delta > 0 {
        // (x, s) = (0, 1) gives δ³ > 0.
        return true;
    }
    let bp = a * a - 4 * b;
    if bp < 0 {
        // The point at infinity: δ·(a² − 4b) > 0.
        return true;
    }
    // δ² − 2aδt + b't² must reach ≤ 0 for some t ≥ 0: its vertex aδ/b' must be
    // positive and its discriminant 16δ²b nonnegative.
    a < 0 && b > 0
}

#[derive(Debug)]
enum Fail {
    Overflow,
    Depth,
}

type Step<T> = core::result::Result<T, Fail>;

trait Coeff: Clone {
    fn from_i128(v: i128) -> Self;
    fn add(&self, o: &Self) -> Step<Self>;
    fn mul(&self, o: &Self) -> Step<Self>;
    fn is_zero(&self) -> bool;
    /// `(v_p(self), self / p^v)` for nonzero `self`.
    fn split(&self, p: u64) -> (u32, Self);
    fn div_pow(&self, p: u64, k: u32) -> Self;
    fn residue(&self, m: u64) -> u64;
}

impl Coeff for i128 {
    fn from_i128(v: i128) -> Self {
        v
    }
    fn add(&self, o: &Self) -> Step<Self> {
        self.checked_add(*o).ok_or(Fail::Overflow)
    }
    fn mul(&self, o: &Self) -> Step<Self> {
        self.checked_mul(*o).ok_or(Fail::Overflow)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn split(&self, p: u64) -> (u32, Self) {
        let p = p as i128;
        let (mut v, mut n) = (0, *self);
        while n % p == 0 {
            n /= p;
            v += 1;
        }
        (v, n)
    }
    fn div_pow(&self, p: u64, k: u32) -> Self {
        *self / (p as i128).pow(k)
    }
    fn residue(&self, m: u64) -> u64 {
        self.rem_euclid(m as i128) as u64
    }
}

impl Coeff for BigInt {
    fn from_i128(v: i128) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Step<Self> {
        Ok(self + o)
    }
    fn mul(&self, o: &Self) -> Step<Self> {
        Ok(self * o)
    }
    fn is_zero(&self) -> bool {
        *self == BigInt::ZERO
    }
    fn split(&self, p: u64) -> (u32, Self) {
        let pb = BigInt::from(p);
        let (mut v, mut n) = (0, self.clone());
        loop {
            let r = &n % &pb;
            if r != BigInt::ZERO {
                break;
            }
            n /= &pb;
            v += 1;
        }
        (v, n)
    }
    fn div_pow(&self, p: u64, k: u32) -> Self {
        self / BigInt::from(p).pow(k)
    }
    fn residue(&self, m: u64) -> u64 {
        let mb = BigInt::from(m);
        let r = ((self % &mb) + &mb) % &mb;
        u64::try_from(r).expect("residue fits")
    }
}

type Quartic<C> = [C; 5];

fn padic_solvable<C: Coeff>(a: i128, b: i128, delta: i128, p: u64) -> Step<bool> {
    let c = C::from_i128;
    let (a, b, d) = (c(a), c(b), c(delta));
    let bp = a.mul(&a)?.add(&c(-4).mul(&b)?)?;
    let d2 = d.mul(&d)?;
    let d3 = d2.mul(&d)?;
    let two_a_d2 = c(-2).mul(&a)?.mul(&d2)?;
    // Chart x ∈ Z_p:  δ³ − 2aδ²x² + δb'x⁴.
    let chart_x: Quartic<C> = [d3.clone(), c(0), two_a_d2.clone(), c(0), d.mul(&bp)?];
    // Chart s = p·t:  δb' − 2aδ²p²t² + δ³p⁴t⁴.
    let pp = c(p as i128).mul(&c(p as i128))?;
    let chart_s: Quartic<C> = [d.mul(&bp)?, c(0), two_a_d2.mul(&pp)?, c(0), d3.mul(&pp)?.mul(&pp)?];
    for chart in [chart_x, chart_s] {
        let (k, h) = primitive(chart, p);
        if disc_solvable(&h, k, p, 0)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Splits off the `p`-content: `f = p^k h`.
fn primitive<C: Coeff>(f: Quartic<C>, p: u64) -> (u32, Quartic<C>) {
    let k = f.iter().filter(|c| !c.is_zero()).map(|c| c.split(p).0).min().expect("nonzero quartic");
    (k, f.map(|c| if c.is_zero() { c } else { c.div_pow(p, k) }))
}

/// `h(t0 + m·s)` as a polynomial in `s`.
fn shift<C: Coeff>(h: &Quartic<C>, t0: u64, m: u64) -> Step<Quartic<C>> {
    let mut q = h.clone();
    let t = C::from_i128(t0 as i128);
    if t0 != 0 {
        // Repeated synthetic division by (x − t0) gives the Taylor coefficients at t0.
        for i in 0..4 {
            for j in (i..4).rev() {
                q[j] = q[j].add(&q[j + 1].mul(&t)?)?;
            }
        }
    }
    let m = C::from_i128(m as i128);
    let mut scale = C::from_i128(1);
    for coeff in q.iter_mut().skip(1) {
        scale = scale.mul(&m)?;
        *coeff = coeff.mul(&scale)?;
    }
    Ok(q)
}

/// Is `p^k h(t)` a square or zero for some `t ∈ Z_p`? `h` is primitive.
fn disc_solvable<C: Coeff>(h: &Quartic<C>, k: u32, p: u64, depth: u32) -> Step<bool> {
    if depth > MAX_DEPTH {
        return Err(Fail::Depth);
    }
    if p == 2 {
        return two_adic_disc(h, k, depth);
    }
    let hbar: Vec<u64> = h.iter().map(|c| c.residue(p)).collect();
    if k % 2 == 0 && has_nonzero_square_value(&hbar, p) {
        return Ok(true);
    }
    // Only discs over roots of h̄ can still hold squares.
    for t0 in fp_poly::roots(&hbar, p) {
        let child = shift(h, t0, p)?;
        if has_root(&child, p) {
            return Ok(true);
        }
        let (c, hc) = primitive(child, p);
        if disc_solvable(&hc, k + c, p, depth + 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Hensel: `H` has a root in `Z_p` if `v(H(0)) > 2 v(H'(0))`. A root is a point with `w = 0`.
fn has_root<C: Coeff>(child: &Quartic<C>, p: u64) -> bool {
    if child[0].is_zero() {
        return true;
    }
    if child[1].is_zero() {
        return false;
    }
    child[0].split(p).0 > 2 * child[1].split(p).0
}

fn is_residue(v: u64, p: u64) -> bool {
    pow_mod(v, (p - 1) / 2, p) == 1
}

/// Does `h̄` take a nonzero square value on `F_p`?
fn has_nonzero_square_value(hbar: &[u64], p: u64) -> bool {
    if let Some(c) = fp_poly::square_times_constant(hbar, p) {
        // h̄ = c·s², and s (degree ≤ 2 < p) has a non-root.
        return is_residue(c, p);
    }
    // Not of that shape: for p ≥ 17 the Weil bound guarantees a hit early on.
    (0..p).any(|t| {
        let v = fp_poly::eval(hbar, t, p);
        v != 0 && is_residue(v, p)
    })
}

fn two_adic_disc<C: Coeff>(h: &Quartic<C>, k: u32, depth: u32) -> Step<bool> {
    for t0 in 0..2u64 {
        let child = shift(h, t0, 2)?;
        if has_root(&child, 2) {
            return Ok(true);
        }
        let (lambda, unit) = child[0].split(2);
        let nu = child[1..].iter().filter(|c| !c.is_zero()).map(|c| c.split(2).0).min().unwrap_or(u32::MAX);
        if nu >= lambda.saturating_add(3) {
            // Constant square class on the disc: value·(1 + 8Z_2).
            if (k + lambda) % 2 == 0 && unit.residue(8) == 1 {
                return Ok(true);
            }
            continue;
        }
        let c = lambda.min(nu);
        let hc = child.map(|x| if x.is_zero() { x } else { x.div_pow(2, c) });
        if disc_solvable(&hc, k + c, 2, depth + 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Brute-force point search for small odd `p`, used as an oracle in tests.
#[cfg(test)]
pub(crate) fn brute_force_solvable(a: i128, b: i128, delta: i128, p: u64, precision: u32) -> bool {
    // A Q_p-point on the smooth model lifts from a point modulo p^precision that is
    // "deep enough"; for the small cases in tests we accept any (x : s) with
    // δ·G(x, s) a nonzero square up to valuation precision - 3, or exactly zero.
    let modulus = (p as i128).pow(precision);
    let bp = a * a - 4 * b;
    let g = |x: i128, s: i128| -> i128 {
        let s2 = s * s;
        let x2 = x * x;
        delta * (delta * delta * s2 * s2 - 2 * a * delta * x2 * s2 + bp * x2 * x2)
    };
    use super::kronecker::legendre;
    let is_square = |v: i128| -> bool {
        if v == 0 {
            return true;
        }
        let mut val = 0;
        let mut u = v;
        while u % p as i128 == 0 {
            u /= p as i128;
            val += 1;
        }
        if val > 2 * precision as i32 / 3 {
            return false;
        }
        val % 2 == 0 && if p == 2 { u.rem_euclid(8) == 1 } else { legendre(u, p) == 1 }
    };
    let range = modulus.min(2000);
    (0..range).any(|x| is_square(g(x, 1))) || (0..range).any(|t| is_square(g(1, p as i128 * t)))
}
