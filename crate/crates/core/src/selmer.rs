//! 2-isogeny descent over `Q` for `E: y² = x³ + ax² + bx` and its quadratic twists.
//!
//! The local image of `E'(Q_v) / φ(E(Q_v))` in `Q_v^*/(Q_v^*)²` is read off
//! from torsor solubility, one square class at a time. It depends on the twist
//! `d` only through the class of `d` at `v`, so [`DescentEngine`] caches images
//! by that class. Selmer groups are then kernels of `F_2`-linear maps on the
//! span of `-1` and the primes of `2·b·(a² − 4b)·d`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::arith::{
    class_index, factor_trial, is_perfect_square, kronecker_i128, local_square_classes, quartic_solvable, squarefree_part,
    FactorSieve, Place, SquarefreeInt,
};
use crate::error::{Error, Result};

/// `E: y² = x³ + ax² + bx` with its 2-isogenous partner `E': y² = x³ − 2ax² + (a² − 4b)x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsogenyPair {
    a: i64,
    b: i64,
    b_prime: i64,
    delta_class_e: SquarefreeInt,
    delta_class_eprime: SquarefreeInt,
    bad_primes: Vec<u64>,
    eligible: bool,
}

impl IsogenyPair {
    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `a' = −2a`, the `x²` coefficient of `E'`.
    pub fn a_prime(&self) -> i64 {
        -2 * self.a
    }

    /// `b' = a² − 4b`.
    pub fn b_prime(&self) -> i64 {
        self.b_prime
    }

    /// Square class of `Δ = 16b²(a² − 4b)`.
    pub fn delta_class_e(&self) -> SquarefreeInt {
        self.delta_class_e
    }

    /// Square class of `Δ' = 256·b·(a² − 4b)²`.
    pub fn delta_class_eprime(&self) -> SquarefreeInt {
        self.delta_class_eprime
    }

    /// Primes dividing `2·b·(a² − 4b)`, ascending.
    pub fn bad_primes(&self) -> &[u64] {
        &self.bad_primes
    }

    /// `a² − 4b` and `b(a² − 4b)` are both nonsquares.
    pub fn eligible(&self) -> bool {
        self.eligible
    }

    /// `a² − 4b` is a nonzero square: `E[2]` is fully rational.
    pub fn full_two_torsion(&self) -> bool {
        is_perfect_square(self.b_prime as i128)
    }

    /// `ΔΔ'` is a square, so the σ_g growth law does not apply.
    pub fn square_delta_product(&self) -> bool {
        is_perfect_square(self.b as i128 * self.b_prime as i128)
    }
}

/// Builds the pair, rejecting `b(a² − 4b) = 0`.
pub fn make_pair(a: i64, b: i64) -> Result<IsogenyPair> {
    let bp = a as i128 * a as i128 - 4 * b as i128;
    if b == 0 || bp == 0 {
        return Err(Error::SingularCurve { a, b });
    }
    let b_prime = i64::try_from(bp).map_err(|_| Error::OutOfRange(format!("a² − 4b overflows for ({a}, {b})")))?;
    let mut bad: Vec<u64> = factor_trial(b.unsigned_abs())
        .into_iter()
        .chain(factor_trial(b_prime.unsigned_abs()))
        .map(|(p, _)| p)
        .chain(core::iter::once(2))
        .collect();
    bad.sort_unstable();
    bad.dedup();
    let eligible = !is_perfect_square(bp) && !is_perfect_square(b as i128 * bp);
    Ok(IsogenyPair {
        a,
        b,
        b_prime,
        delta_class_e: squarefree_part(b_prime)?,
        delta_class_eprime: squarefree_part(b)?,
        bad_primes: bad,
        eligible,
    })
}

/// The pair for `(E', φ̂)`: coefficients `(−2a, a² − 4b)`.
pub fn dual_pair(pair: &IsogenyPair) -> Result<IsogenyPair> {
    make_pair(-2 * pair.a, pair.b_prime)
}

/// Local condition dimension at a good odd prime ramified in the twist, from
/// the Legendre symbols `s = (a² − 4b / p)` and `s' = (b / p)`: `1 + (s' − s)/2`.
pub fn local_dim_good_ramified(pair: &IsogenyPair, p: u64) -> Result<u8> {
    if p == 2 || pair.bad_primes.binary_search(&p).is_ok() {
        return Err(Error::OutOfRange(format!("{p} divides 2Δ")));
    }
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(lemma_table(pair, p))
}

fn lemma_table(pair: &IsogenyPair, p: u64) -> u8 {
    let s = kronecker_i128(pair.b_prime as i128, p as i128);
    let s_prime = kronecker_i128(pair.b as i128, p as i128);
    (1 + (s_prime - s) / 2) as u8
}

/// `dim H¹_φ(Q_v, C^χ)` for the twist by `d`: log₂ of the number of solvable classes.
pub fn local_dim(pair: &IsogenyPair, d: i64, place: Place) -> Result<u8> {
    let d = squarefree_part(d)?;
    let mask = local_image(pair, d.get() as i128, place)?;
    Ok(mask.count_ones().trailing_zeros() as u8)
}

/// `dim Sel_φ(E^d/Q)`, by enumerating every candidate class.
pub fn selmer_phi_dim(pair: &IsogenyPair, d: i64) -> Result<u32> {
    Ok(selmer_elements(pair, d)?.len().trailing_zeros())
}

/// `dim Sel_φ̂(E'^d/Q)`.
pub fn selmer_phihat_dim(pair: &IsogenyPair, d: i64) -> Result<u32> {
    selmer_phi_dim(&dual_pair(pair)?, d)
}

/// Every `δ` in `Sel_φ(E^d/Q)`, as signed squarefree integers in ascending order.
pub fn selmer_elements(pair: &IsogenyPair, d: i64) -> Result<Vec<i64>> {
    let d = squarefree_part(d)?;
    let gens = generators(pair, d.unsigned_abs());
    let places = support_places(pair, d.unsigned_abs());
    let masks = places
        .iter()
        .map(|&v| Ok((v, local_image(pair, d.get() as i128, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for bits in 0u64..(1 << gens.len()) {
        let delta: i64 = gens.iter().enumerate().filter(|(j, _)| bits >> j & 1 == 1).map(|(_, &g)| g).product();
        if masks.iter().all(|&(v, m)| m >> class_index(delta as i128, v) & 1 == 1) {
            out.push(delta);
        }
    }
    if !out.len().is_power_of_two() {
        return Err(Error::Inconsistent(format!("Selmer set of size {} is not a group: {out:?}", out.len())));
    }
    out.sort_unstable();
    Ok(out)
}

/// `g(χ_d)`: the sum of `((b/p) − (a² − 4b/p))/2` over odd `p | d` with `p ∤ Δ`.
pub fn g_chi(pair: &IsogenyPair, d: SquarefreeInt) -> i32 {
    factor_trial(d.unsigned_abs())
        .into_iter()
        .map(|(p, _)| p)
        .filter(|&p| p != 2 && pair.bad_primes.binary_search(&p).is_err())
        .map(|p| lemma_table(pair, p) as i32 - 1)
        .sum()
}

/// Descent data for one twist.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelmerDescentResult {
    pub d: SquarefreeInt,
    /// `dim H¹_φ(Q_v, C^χ)` at every place of `2·b·(a² − 4b)·d·∞`, sorted by place.
    /// Every other place has dimension 1.
    pub local_dims: Vec<(Place, u8)>,
    pub dim_selphi: u32,
    pub dim_selphihat: u32,
    /// `Σ_v (dim − 1)`.
    pub ord2t_product: i32,
    /// `dim Sel_φ − dim Sel_φ̂`.
    pub ord2t_ratio: i32,
    pub g_chi: i32,
    /// `Σ_{v | 2Δ∞} (dim − 1)`.
    pub correction: i32,
}

impl SelmerDescentResult {
    /// `ord₂ T(E^d / E'^d)`.
    pub fn ord2t(&self) -> i32 {
        self.ord2t_product
    }

    pub fn local_dim(&self, place: Place) -> u8 {
        self.local_dims
            .binary_search_by(|(v, _)| v.cmp(&place))
            .map(|i| self.local_dims[i].1)
            .unwrap_or(1)
    }
}

/// `ord₂T − 2`, a lower bound for `d₂(E^d/Q)`; vacuous when negative.
pub fn selmer2_lower_bound(result: &SelmerDescentResult) -> i32 {
    result.ord2t() - 2
}

/// Descent for the twist of `pair` by the squarefree part of `d`.
pub fn descend(pair: &IsogenyPair, d: i64) -> Result<SelmerDescentResult> {
    let d = squarefree_part(d)?;
    DescentEngine::new(pair.clone())?.descend(d)
}

/// Descent with local images cached by `(place, class of d at place)`.
///
/// One engine per worker; results do not depend on what is cached.
#[derive(Debug, Clone)]
pub struct DescentEngine {
    pair: IsogenyPair,
    dual: IsogenyPair,
    cache: BTreeMap<(Place, u8), (u8, u8)>,
    corrupt_table: bool,
    scratch: Vec<u64>,
}

impl DescentEngine {
    pub fn new(pair: IsogenyPair) -> Result<Self> {
        let dual = dual_pair(&pair)?;
        Ok(DescentEngine { pair, dual, cache: BTreeMap::new(), corrupt_table: false, scratch: Vec::new() })
    }

    pub fn pair(&self) -> &IsogenyPair {
        &self.pair
    }

    /// Test hook: flips the Legendre table at primes `≡ 3 mod 4` so that the
    /// exact identities fail.
    #[doc(hidden)]
    pub fn corrupt_legendre_table(&mut self) {
        self.corrupt_table = true;
    }

    pub fn descend(&mut self, d: SquarefreeInt) -> Result<SelmerDescentResult> {
        let mut primes = core::mem::take(&mut self.scratch);
        primes.clear();
        primes.extend(factor_trial(d.unsigned_abs()).into_iter().map(|(p, _)| p));
        let out = self.descend_with_primes(d, &primes);
        self.scratch = primes;
        out
    }

    /// As [`descend`](Self::descend), taking the primes of `|d|` from a sieve.
    pub fn descend_sieved(&mut self, d: SquarefreeInt, sieve: &FactorSieve) -> Result<SelmerDescentResult> {
        let mut primes = core::mem::take(&mut self.scratch);
        primes.clear();
        sieve.distinct_primes_into(d.unsigned_abs(), &mut primes);
        let out = self.descend_with_primes(d, &primes);
        self.scratch = primes;
        out
    }

    /// Local images for `φ` and `φ̂` at `place`, as masks over class indices.
    pub fn local_images(&mut self, d: SquarefreeInt, place: Place) -> Result<(u8, u8)> {
        let class = class_index(d.get() as i128, place);
        if let Some(&m) = self.cache.get(&(place, class)) {
            return Ok(m);
        }
        let rep = crate::arith::SquareClassLocal::from_index(place, class)?.representative() as i128;
        let phi = local_image(&self.pair, rep, place)?;
        let phihat = local_image(&self.dual, rep, place)?;
        let expected = place.square_class_rank();
        if phi.count_ones().trailing_zeros() + phihat.count_ones().trailing_zeros() != expected {
            return Err(Error::Inconsistent(format!(
                "local images at {place} for class {class}: |im φ| = {}, |im φ̂| = {}, expected dimensions summing to {expected}",
                phi.count_ones(),
                phihat.count_ones()
            )));
        }
        self.cache.insert((place, class), (phi, phihat));
        Ok((phi, phihat))
    }

    fn descend_with_primes(&mut self, d: SquarefreeInt, d_primes: &[u64]) -> Result<SelmerDescentResult> {
        let mut places: Vec<Place> = self.pair.bad_primes.iter().chain(d_primes).map(|&p| Place::Finite(p)).collect();
        places.sort_unstable();
        places.dedup();
        places.push(Place::Real);

        let mut gens: Vec<i64> = Vec::with_capacity(places.len());
        gens.push(-1);
        gens.extend(places.iter().filter_map(|v| match v {
            Place::Finite(p) => Some(*p as i64),
            Place::Real => None,
        }));

        let mut local_dims = Vec::with_capacity(places.len());
        let mut rows_phi: Vec<u64> = Vec::new();
        let mut rows_phihat: Vec<u64> = Vec::new();
        let (mut product, mut correction, mut g) = (0i32, 0i32, 0i32);
        for &v in &places {
            let (phi, phihat) = self.local_images(d, v)?;
            let dim = phi.count_ones().trailing_zeros() as u8;
            local_dims.push((v, dim));
            product += dim as i32 - 1;
            let good_ramified = match v {
                Place::Finite(p) => p != 2 && self.pair.bad_primes.binary_search(&p).is_err(),
                Place::Real => false,
            };
            if good_ramified {
                let Place::Finite(p) = v else { unreachable!() };
                let mut table = lemma_table(&self.pair, p) as i32;
                if self.corrupt_table && p % 4 == 3 {
                    table = 2 - table;
                }
                g += table - 1;
            } else {
                correction += dim as i32 - 1;
            }
            let classes: Vec<u8> = gens.iter().map(|&x| class_index(x as i128, v)).collect();
            push_constraints(&mut rows_phi, phi, &classes, v);
            push_constraints(&mut rows_phihat, phihat, &classes, v);
        }
        #[cfg(debug_assertions)]
        self.check_outside_support(d, &places)?;

        let n = gens.len() as u32;
        let dim_selphi = n - rank(&mut rows_phi);
        let dim_selphihat = n - rank(&mut rows_phihat);
        let result = SelmerDescentResult {
            d,
            local_dims,
            dim_selphi,
            dim_selphihat,
            ord2t_product: product,
            ord2t_ratio: dim_selphi as i32 - dim_selphihat as i32,
            g_chi: g,
            correction,
        };
        if result.ord2t_product != result.ord2t_ratio || result.ord2t_product != result.g_chi + result.correction {
            return Err(Error::Inconsistent(self.dump(&result)));
        }
        Ok(result)
    }

    /// The search space omits classes ramified outside the support; at the
    /// first odd prime outside it the local image must be the unit classes.
    #[cfg(debug_assertions)]
    fn check_outside_support(&mut self, d: SquarefreeInt, places: &[Place]) -> Result<()> {
        let q = (3u64..)
            .step_by(2)
            .filter(|&q| crate::arith::is_prime(q))
            .find(|q| !places.contains(&Place::Finite(*q)))
            .expect("primes are infinite");
        let (phi, phihat) = self.local_images(d, Place::Finite(q))?;
        if phi != 0b0011 || phihat != 0b0011 {
            return Err(Error::Inconsistent(format!(
                "good prime {q} outside the support has local images {phi:#06b}, {phihat:#06b}"
            )));
        }
        Ok(())
    }

    fn dump(&self, r: &SelmerDescentResult) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "curve (a, b) = ({}, {}), twist d = {}", self.pair.a, self.pair.b, r.d);
        for (v, dim) in &r.local_dims {
            let _ = writeln!(s, "  place {v}: dim {dim}");
        }
        let _ = write!(
            s,
            "  dim Sel_phi = {}, dim Sel_phihat = {}, ord2T product = {}, ratio = {}, g = {}, correction = {}",
            r.dim_selphi, r.dim_selphihat, r.ord2t_product, r.ord2t_ratio, r.g_chi, r.correction
        );
        s
    }
}

/// Solvable classes at `place` for the twist of `pair` by `d`, as a mask over class indices.
fn local_image(pair: &IsogenyPair, d: i128, place: Place) -> Result<u8> {
    let (a, b) = (pair.a as i128 * d, pair.b as i128 * d * d);
    let mut mask = 0u8;
    for class in local_square_classes(place) {
        if quartic_solvable(a, b, class.representative() as i128, place)? {
            mask |= 1 << class.index();
        }
    }
    // The image of a homomorphism: contains 1 and is closed under products.
    let closed = (0..8u8).all(|i| mask >> i & 1 == 0 || (0..8u8).all(|j| mask >> j & 1 == 0 || mask >> (i ^ j) & 1 == 1));
    if mask & 1 == 0 || !closed {
        return Err(Error::Inconsistent(format!("local image {mask:#010b} at {place} for twist {d} is not a subgroup")));
    }
    Ok(mask)
}

/// Adds the functionals `f` with `f·w = 0` on the image as rows over the generators.
fn push_constraints(rows: &mut Vec<u64>, image: u8, gen_classes: &[u8], place: Place) {
    let size = place.num_square_classes() as u8;
    for f in 1..size {
        let annihilates = (0..size).filter(|w| image >> w & 1 == 1).all(|w| (f & w).count_ones() % 2 == 0);
        if !annihilates {
            continue;
        }
        let row = gen_classes
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &c)| acc | (((f & c).count_ones() as u64 & 1) << j));
        if row != 0 {
            rows.push(row);
        }
    }
}

/// Rank over `F_2` of bit-packed rows (destroys the rows).
fn rank(rows: &mut [u64]) -> u32 {
    let mut r = 0;
    for bit in 0..64 {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else { continue };
        rows.swap(r, pivot);
        let pr = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row >> bit & 1 == 1 {
                *row ^= pr;
            }
        }
        r += 1;
    }
    r as u32
}

fn generators(pair: &IsogenyPair, d_abs: u64) -> Vec<i64> {
    let mut gens = Vec::new();
    gens.push(-1);
    gens.extend(support_places(pair, d_abs).into_iter().filter_map(|v| match v {
        Place::Finite(p) => Some(p as i64),
        Place::Real => None,
    }));
    gens
}

fn support_places(pair: &IsogenyPair, d_abs: u64) -> Vec<Place> {
    let mut ps: Vec<u64> = pair.bad_primes.clone();
    ps.extend(factor_trial(d_abs).into_iter().map(|(p, _)| p));
    ps.sort_unstable();
    ps.dedup();
    let mut out: Vec<Place> = ps.into_iter().map(Place::Finite).collect();
    out.push(Place::Real);
    out
}

/// Descent results for every squarefree `0 < |d| < x`, ordered by `|d|` then `d` before `−d`.
pub fn scan_twists(pair: &IsogenyPair, x: u64) -> Result<ScanTwists> {
    if !pair.eligible {
        return Err(Error::OutOfRange(format!(
            "curve ({}, {}) is not eligible: a² − 4b or b(a² − 4b) is a square",
            pair.a, pair.b
        )));
    }
    ScanTwists::new(pair.clone(), 1, x)
}

/// Sequential twist scan over `lo ≤ |d| < hi`; see [`scan_twists`].
pub struct ScanTwists {
    engine: DescentEngine,
    sieve: FactorSieve,
    flags: Vec<bool>,
    next: u64,
    hi: u64,
    pending_negative: Option<SquarefreeInt>,
}

impl ScanTwists {
    /// Scans the range `lo ≤ |d| < hi` for any pair, eligible or not.
    pub fn new(pair: IsogenyPair, lo: u64, hi: u64) -> Result<Self> {
        if hi < 2 {
            return Err(Error::BoundTooSmall { bound: hi, min: 2 });
        }
        Ok(ScanTwists {
            engine: DescentEngine::new(pair)?,
            sieve: FactorSieve::new(hi),
            flags: crate::arith::squarefree_flags(hi),
            next: lo.max(1),
            hi,
            pending_negative: None,
        })
    }

    pub fn engine_mut(&mut self) -> &mut DescentEngine {
        &mut self.engine
    }
}

impl Iterator for ScanTwists {
    type Item = Result<SelmerDescentResult>;

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(d) = self.pending_negative.take() {
            return Some(self.engine.descend_sieved(d, &self.sieve));
        }
        while self.next < self.hi {
            let n = self.next;
            self.next += 1;
            if self.flags[n as usize] {
                self.pending_negative = Some(SquarefreeInt::new_unchecked(-(n as i64)));
                return Some(self.engine.descend_sieved(SquarefreeInt::new_unchecked(n as i64), &self.sieve));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::hilbert_symbol;
    use alloc::vec;
    use proptest::prelude::*;

    fn pair(a: i64, b: i64) -> IsogenyPair {
        make_pair(a, b).unwrap()
    }

    const CURVES: [(i64, i64); 20] = [
        (1, -1),
        (0, 4),
        (-1, 3),
        (0, -2),
        (2, -3),
        (3, 1),
        (-2, 5),
        (1, 6),
        (0, 3),
        (5, -7),
        (-3, -11),
        (4, 7),
        (0, -17),
        (7, 2),
        (-5, 13),
        (1, 1),
        (2, 17),
        (-1, -6),
        (6, -10),
        (11, 19),
    ];

    #[test]
    fn stated_pairs() {
        let p = pair(1, -1);
        assert_eq!((p.a_prime(), p.b_prime()), (-2, 5));
        assert_eq!((p.delta_class_e().get(), p.delta_class_eprime().get()), (5, -1));
        assert!(p.eligible());
        let p = pair(0, 4);
        assert_eq!(p.b_prime(), -16);
        assert!(p.eligible());
        let p = pair(6, 5);
        assert!(!p.eligible());
        assert!(p.full_two_torsion());
        assert!(!pair(3, 2).eligible());
        assert!(matches!(make_pair(0, 0), Err(Error::SingularCurve { .. })));
        assert!(matches!(make_pair(2, 1), Err(Error::SingularCurve { .. })));
    }

    #[test]
    fn delta_classes_match_discriminants() {
        for (a, b) in CURVES {
            let p = pair(a, b);
            let (a, b) = (a as i128, b as i128);
            let disc = 16 * b * b * (a * a - 4 * b);
            let disc_prime = 256 * b * (a * a - 4 * b) * (a * a - 4 * b);
            let q = disc / p.delta_class_e().get() as i128;
            assert!(disc % p.delta_class_e().get() as i128 == 0 && is_perfect_square(q));
            let q = disc_prime / p.delta_class_eprime().get() as i128;
            assert!(disc_prime % p.delta_class_eprime().get() as i128 == 0 && is_perfect_square(q));
        }
    }

    #[test]
    fn dual_of_dual_is_twist_by_four() {
        let p = pair(1, -1);
        let dd = dual_pair(&dual_pair(&p).unwrap()).unwrap();
        assert_eq!((dd.a(), dd.b()), (4, -16));
        assert_eq!(dd.delta_class_e(), p.delta_class_e());
        assert_eq!(dd.delta_class_eprime(), p.delta_class_eprime());
        for (a, b) in CURVES {
            let p = pair(a, b);
            let dual = dual_pair(&p).unwrap();
            assert_eq!(dual.delta_class_eprime(), p.delta_class_e());
        }
    }

    #[test]
    fn stated_local_dims() {
        let p = pair(1, -1);
        assert_eq!(local_dim(&p, 1, Place::Real).unwrap(), 0);
        assert_eq!(local_dim(&p, 1, Place::Finite(7)).unwrap(), 1);
        assert_eq!(local_dim(&p, 11, Place::Finite(11)).unwrap(), 0);
        assert_eq!(local_dim_good_ramified(&p, 11).unwrap(), 0);
        assert_eq!(local_dim_good_ramified(&p, 13).unwrap(), 2);
        assert!(local_dim_good_ramified(&p, 5).is_err());
        assert!(local_dim_good_ramified(&p, 2).is_err());
    }

    #[test]
    fn stated_g_values() {
        let p = pair(1, -1);
        let sf = |d| SquarefreeInt::new(d).unwrap();
        assert_eq!(g_chi(&p, sf(11)), -1);
        assert_eq!(g_chi(&p, sf(1)), 0);
        assert_eq!(g_chi(&p, sf(143)), 0);
    }

    #[test]
    fn stated_descents() {
        let p = pair(1, -1);
        let r = descend(&p, 1).unwrap();
        assert_eq!(r.g_chi, 0);
        assert_eq!(r.correction, r.ord2t_product);
        let r = descend(&p, 11).unwrap();
        assert_eq!(r.g_chi, -1);
        let places: Vec<Place> = r.local_dims.iter().map(|x| x.0).collect();
        assert_eq!(places, [Place::Finite(2), Place::Finite(5), Place::Finite(11), Place::Real]);
        let corr: i32 = [Place::Finite(2), Place::Finite(5), Place::Real].iter().map(|&v| r.local_dim(v) as i32 - 1).sum();
        assert_eq!(r.correction, corr);
        assert_eq!(r.ord2t(), -1 + corr);
    }

    #[test]
    fn lower_bound() {
        let mut r = descend(&pair(1, -1), 1).unwrap();
        for (t, want) in [(5, 3), (0, -2), (2, 0)] {
            r.ord2t_product = t;
            assert_eq!(selmer2_lower_bound(&r), want);
        }
    }

    #[test]
    fn local_images_are_subgroups_at_bad_places() {
        for (a, b) in CURVES {
            let p = pair(a, b);
            let dual = dual_pair(&p).unwrap();
            let mut places: Vec<Place> = p.bad_primes().iter().map(|&q| Place::Finite(q)).collect();
            places.push(Place::Real);
            for v in places {
                // local_image itself rejects masks that are not subgroups.
                let m = local_image(&p, 1, v).unwrap();
                let md = local_image(&dual, 1, v).unwrap();
                // Local Tate duality: the two images are exact annihilators under the Hilbert symbol.
                let dim = m.count_ones().trailing_zeros() + md.count_ones().trailing_zeros();
                assert_eq!(dim, v.square_class_rank(), "({a}, {b}) at {v}");
                for x in local_square_classes(v).iter().filter(|c| m >> c.index() & 1 == 1) {
                    for y in local_square_classes(v).iter().filter(|c| md >> c.index() & 1 == 1) {
                        let h = hilbert_symbol(x.representative() as i128, y.representative() as i128, v);
                        assert_eq!(h, 1, "({a}, {b}) at {v}: {} vs {}", x.representative(), y.representative());
                    }
                }
            }
        }
    }

    #[test]
    fn unramified_good_primes_have_the_unit_classes() {
        for (a, b) in CURVES {
            let p = pair(a, b);
            for q in [3u64, 5, 7, 11, 13, 101, 4099, 65_537] {
                if p.bad_primes().contains(&q) {
                    continue;
                }
                for d in [1i128, -1, 2, -3] {
                    if d % q as i128 == 0 {
                        continue;
                    }
                    assert_eq!(local_image(&p, d, Place::Finite(q)).unwrap(), 0b0011, "({a}, {b}) d={d} at {q}");
                }
            }
        }
    }

    #[test]
    fn torsor_agrees_with_legendre_table_at_good_ramified_primes() {
        for (a, b) in CURVES {
            let p = pair(a, b);
            for q in crate::arith::sieve_primes(400).unwrap().iter().skip(1) {
                if p.bad_primes().contains(&q) {
                    continue;
                }
                for d in [q as i64, -(q as i64), 2 * q as i64, 3 * q as i64] {
                    if SquarefreeInt::new(d).is_err() {
                        continue;
                    }
                    assert_eq!(local_dim(&p, d, Place::Finite(q)).unwrap(), lemma_table(&p, q), "({a}, {b}) d={d}");
                }
            }
        }
    }

    #[test]
    fn engine_matches_enumeration_oracle() {
        for (a, b) in CURVES.iter().take(8) {
            let p = pair(*a, *b);
            let mut engine = DescentEngine::new(p.clone()).unwrap();
            for d in -60i64..=60 {
                let Ok(sf) = SquarefreeInt::new(d) else { continue };
                let r = engine.descend(sf).unwrap();
                assert_eq!(r.dim_selphi, selmer_phi_dim(&p, d).unwrap(), "({a}, {b}) d={d}");
                assert_eq!(r.dim_selphihat, selmer_phihat_dim(&p, d).unwrap(), "({a}, {b}) d={d}");
            }
        }
    }

    #[test]
    fn selmer_sets_are_groups_containing_the_image_of_torsion() {
        for (a, b) in CURVES.iter().take(10) {
            let p = pair(*a, *b);
            for d in [1i64, -1, 3, -5, 7, 15, -21] {
                let els = selmer_elements(&p, d).unwrap();
                assert!(els.contains(&1));
                for &x in &els {
                    for &y in &els {
                        let xy = SquarefreeInt::new(x).unwrap().mul_mod_squares(SquarefreeInt::new(y).unwrap());
                        assert!(els.contains(&xy.get()));
                    }
                }
                // (0, 0) on E'^d maps to the class of b'·d² ≡ b'.
                assert!(els.contains(&p.delta_class_e().get()), "({a}, {b}) d={d}");
            }
        }
    }

    #[test]
    fn dual_descent_negates_ord2t() {
        for (a, b) in CURVES.iter().take(10) {
            let p = pair(*a, *b);
            let dual = dual_pair(&p).unwrap();
            for d in [1i64, -1, 2, 3, -7, 11, 13, -30] {
                let r = descend(&p, d).unwrap();
                let rd = descend(&dual, d).unwrap();
                assert_eq!(rd.ord2t(), -r.ord2t(), "({a}, {b}) d={d}");
                assert_eq!((rd.dim_selphi, rd.dim_selphihat), (r.dim_selphihat, r.dim_selphi));
            }
        }
    }

    #[test]
    fn scan_order_and_count() {
        let got: Vec<i64> = scan_twists(&pair(1, -1), 10).unwrap().map(|r| r.unwrap().d.get()).collect();
        assert_eq!(got, [1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7]);
        assert!(scan_twists(&pair(3, 2), 10).is_err());
    }

    #[test]
    fn corrupted_table_is_detected() {
        let mut engine = DescentEngine::new(pair(1, -1)).unwrap();
        engine.corrupt_legendre_table();
        let err = engine.descend(SquarefreeInt::new(11).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
    }

    #[test]
    fn large_twists_use_exact_arithmetic() {
        let p = pair(1, -1);
        for d in [999_983i64, -999_983, 999_979 * 2, 1_999_993] {
            let r = descend(&p, d).unwrap();
            assert_eq!(r.ord2t_product, r.ord2t_ratio);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn twist_class_invariance(i in 0usize..20, d in -3000i64..3000, k in prop::sample::select(vec![2i64, 3, 5])) {
            prop_assume!(d != 0);
            let p = pair(CURVES[i].0, CURVES[i].1);
            prop_assert_eq!(descend(&p, d).unwrap(), descend(&p, d * k * k).unwrap());
        }

        #[test]
        fn g_is_additive_on_coprime_twists(i in 0usize..20, d1 in 1i64..2000, d2 in 1i64..2000) {
            let p = pair(CURVES[i].0, CURVES[i].1);
            let ok = |d: i64| SquarefreeInt::new(d).ok().filter(|_| p.bad_primes().iter().all(|&q| d % q as i64 != 0));
            let (Some(s1), Some(s2)) = (ok(d1), ok(d2)) else { return Ok(()) };
            prop_assume!(crate::arith::gcd(d1 as u64, d2 as u64) == 1);
            let s12 = SquarefreeInt::new(d1 * d2).unwrap();
            prop_assert_eq!(g_chi(&p, s12), g_chi(&p, s1) + g_chi(&p, s2));
        }
    }
}
