//! Prime ideals, factored ideals, principality and the class group.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::{FieldElement, QuadraticField};
use crate::arith::{factor_trial, is_prime, kronecker_i128, sieve_primes, sqrt_mod, valuation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal `𝔭` above the rational prime `p`.
///
/// For split and ramified `p`, `𝔭 = (p, ω − r)` where `r` is a root of the minimal
/// polynomial of `ω` modulo `p`; the two primes above a split `p` are ordered
/// by their root in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeIdealK {
    p: u64,
    splitting: Splitting,
    conjugate_index: u8,
    root: u64,
}

impl PrimeIdealK {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn splitting(&self) -> Splitting {
        self.splitting
    }

    pub fn conjugate_index(&self) -> u8 {
        self.conjugate_index
    }

    /// The residue of `ω` modulo this prime (split and ramified primes only).
    pub(crate) fn root(&self) -> u64 {
        self.root
    }

    pub fn norm(&self) -> u64 {
        match self.splitting {
            Splitting::Inert => self.p * self.p,
            _ => self.p,
        }
    }

    /// The Galois conjugate prime.
    pub fn conjugate(&self, field: &QuadraticField) -> PrimeIdealK {
        if self.splitting != Splitting::Split {
            return *self;
        }
        split_prime(field, self.p).expect("prime")[1 - self.conjugate_index as usize]
    }

    /// `v_𝔭(α)` for nonzero `α`.
    pub fn valuation(&self, field: &QuadraticField, a: FieldElement) -> u32 {
        debug_assert!(!a.is_zero());
        let vn = valuation(field.norm(a), self.p);
        match self.splitting {
            Splitting::Inert => vn / 2,
            Splitting::Ramified => vn,
            Splitting::Split => {
                // Once the content is removed, at most one of 𝔭, 𝔭̄ divides α.
                let c = match (a.x, a.y) {
                    (0, y) => valuation(y, self.p),
                    (x, 0) => valuation(x, self.p),
                    (x, y) => valuation(x, self.p).min(valuation(y, self.p)),
                };
                let q = (self.p as i128).pow(c);
                let (x, y) = (a.x / q, a.y / q);
                let in_p = (x + y * self.root as i128).rem_euclid(self.p as i128) == 0;
                c + if in_p { vn - 2 * c } else { 0 }
            }
        }
    }
}

impl PartialOrd for PrimeIdealK {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeIdealK {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.conjugate_index).cmp(&(other.p, other.conjugate_index))
    }
}

impl fmt::Display for PrimeIdealK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.p, self.conjugate_index)
    }
}

/// The prime ideals above `p`: one if inert or ramified, two if split.
pub fn split_prime(field: &QuadraticField, p: u64) -> Result<Vec<PrimeIdealK>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let s = kronecker_i128(field.disc as i128, p as i128);
    let splitting = match s {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    };
    if splitting == Splitting::Inert {
        return Ok(vec![PrimeIdealK { p, splitting, conjugate_index: 0, root: 0 }]);
    }
    let mut roots = minpoly_roots(field, p);
    roots.sort_unstable();
    roots.dedup();
    debug_assert_eq!(roots.len(), if splitting == Splitting::Split { 2 } else { 1 });
    Ok(roots
        .into_iter()
        .enumerate()
        .map(|(i, root)| PrimeIdealK { p, splitting, conjugate_index: i as u8, root })
        .collect())
}

/// Roots in `F_p` of `X² − m` or `X² − X − (m − 1)/4`.
fn minpoly_roots(field: &QuadraticField, p: u64) -> Vec<u64> {
    let (c1, c0) = field.omega_square();
    let pi = p as i128;
    if p == 2 {
        return (0..2u64)
            .filter(|&r| {
                let r = r as i128;
                (r * r - c1 * r - c0).rem_euclid(2) == 0
            })
            .collect();
    }
    // r = (c1 ± √(c1² + 4c0)) / 2.
    let disc = (c1 * c1 + 4 * c0).rem_euclid(pi) as u64;
    let s = sqrt_mod(disc, p).expect("split or ramified prime") as i128;
    let half = (pi + 1) / 2;
    let r1 = ((c1 + s) * half).rem_euclid(pi) as u64;
    let r2 = ((c1 - s) * half).rem_euclid(pi) as u64;
    vec![r1, r2]
}

/// Prime ideals of norm `< x`, ordered by norm, then `p`, then conjugate index.
pub fn primes_up_to(field: &QuadraticField, x: u64) -> Vec<PrimeIdealK> {
    if x <= 2 {
        return Vec::new();
    }
    let mut out: Vec<PrimeIdealK> = Vec::new();
    for p in sieve_primes(x).expect("x > 2").iter() {
        for q in split_prime(field, p).expect("prime") {
            if q.norm() < x {
                out.push(q);
            }
        }
    }
    out.sort_by_key(|q| (q.norm(), q.p, q.conjugate_index));
    out
}

/// An integral ideal as a product of prime ideals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealK {
    factors: Vec<(PrimeIdealK, u32)>,
    norm: u128,
}

impl IdealK {
    /// The unit ideal `(1)`.
    pub fn one() -> Self {
        IdealK { factors: Vec::new(), norm: 1 }
    }

    /// Product of the listed primes, repeated entries raising the exponent.
    pub fn from_primes(primes: &[PrimeIdealK]) -> Self {
        let mut out = IdealK::one();
        for &q in primes {
            out = out.mul(&IdealK::prime(q));
        }
        out
    }

    pub fn prime(q: PrimeIdealK) -> Self {
        IdealK { factors: vec![(q, 1)], norm: q.norm() as u128 }
    }

    /// Builds the ideal from `(p, conjugate_index)` pairs.
    pub fn from_spec(field: &QuadraticField, spec: &[(u64, u8)]) -> Result<Self> {
        let mut primes = Vec::with_capacity(spec.len());
        for &(p, index) in spec {
            let above = split_prime(field, p)?;
            let q = above.get(index as usize).copied().ok_or(Error::NoSuchPrimeIdeal { p, index })?;
            primes.push(q);
        }
        Ok(IdealK::from_primes(&primes))
    }

    /// The ideal `(α)` for nonzero `α`.
    pub fn principal(field: &QuadraticField, a: FieldElement) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Zero);
        }
        let n = field.norm(a).unsigned_abs();
        let mut factors = Vec::new();
        for (p, _) in factor_trial(u64::try_from(n).map_err(|_| Error::OutOfRange(format!("norm {n} too large to factor")))?) {
            for q in split_prime(field, p)? {
                let v = q.valuation(field, a);
                if v > 0 {
                    factors.push((q, v));
                }
            }
        }
        Ok(IdealK::from_factors(factors))
    }

    fn from_factors(mut factors: Vec<(PrimeIdealK, u32)>) -> Self {
        factors.sort_by_key(|f| f.0);
        let norm = factors.iter().map(|(q, e)| (q.norm() as u128).pow(*e)).product();
        IdealK { factors, norm }
    }

    pub fn factors(&self) -> &[(PrimeIdealK, u32)] {
        &self.factors
    }

    pub fn norm(&self) -> u128 {
        self.norm
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn exponent(&self, q: &PrimeIdealK) -> u32 {
        self.factors.iter().find(|(r, _)| r == q).map_or(0, |&(_, e)| e)
    }

    pub fn divides(&self, other: &IdealK) -> bool {
        self.factors.iter().all(|(q, e)| other.exponent(q) >= *e)
    }

    pub fn mul(&self, other: &IdealK) -> IdealK {
        let mut factors = self.factors.clone();
        for &(q, e) in &other.factors {
            match factors.iter_mut().find(|(r, _)| *r == q) {
                Some(f) => f.1 += e,
                None => factors.push((q, e)),
            }
        }
        IdealK::from_factors(factors)
    }

    pub fn pow(&self, k: u32) -> IdealK {
        IdealK::from_factors(self.factors.iter().map(|&(q, e)| (q, e * k)).collect())
    }

    pub fn conjugate(&self, field: &QuadraticField) -> IdealK {
        IdealK::from_factors(self.factors.iter().map(|&(q, e)| (q.conjugate(field), e)).collect())
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Removes principal factors `(p) = 𝔭𝔭̄`, `𝔭²` (ramified) and inert primes;
    /// the result lies in the same class.
    fn reduced(&self, field: &QuadraticField) -> IdealK {
        let mut factors: Vec<(PrimeIdealK, u32)> = Vec::new();
        for &(q, e) in &self.factors {
            match q.splitting {
                Splitting::Inert => {}
                Splitting::Ramified => {
                    if e % 2 == 1 {
                        factors.push((q, 1));
                    }
                }
                Splitting::Split => {
                    let e_conj = self.exponent(&q.conjugate(field));
                    if e > e_conj {
                        factors.push((q, e - e_conj));
                    }
                }
            }
        }
        IdealK::from_factors(factors)
    }

    /// A generator if the ideal is principal.
    pub fn generator(&self, field: &QuadraticField) -> Option<FieldElement> {
        if self.is_one() {
            return Some(FieldElement::ONE);
        }
        field
            .elements_of_norm(self.norm)
            .into_iter()
            .find(|&a| self.factors.iter().all(|(q, e)| q.valuation(field, a) >= *e))
    }

    pub fn is_principal(&self, field: &QuadraticField) -> bool {
        field.class_number() == 1 || self.reduced(field).generator(field).is_some()
    }
}

impl PartialOrd for IdealK {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Norm first, then the sorted factor lists.
impl Ord for IdealK {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |i: &IdealK| -> Vec<(u64, u8, u32)> { i.factors.iter().map(|(q, e)| (q.p, q.conjugate_index, *e)).collect() };
        self.norm.cmp(&other.norm).then_with(|| key(self).cmp(&key(other)))
    }
}

impl fmt::Display for IdealK {
    /// Comma-separated `p:idx` tokens, one per prime factor counted with
    /// multiplicity; `1` for the unit ideal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (q, e) in &self.factors {
            for _ in 0..*e {
                if !first {
                    f.write_str(",")?;
                }
                write!(f, "{q}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// The class group: a minimal-norm representative per class and the group law.
#[derive(Debug, Clone)]
pub struct IdealClassData {
    representatives: Vec<IdealK>,
    /// `table[i][j]` = class of `R_i R_j`.
    table: Vec<Vec<u8>>,
}

impl IdealClassData {
    pub(crate) fn trivial() -> Self {
        IdealClassData { representatives: vec![IdealK::one()], table: vec![vec![0]] }
    }

    /// One ideal per class, of minimal norm, ties broken by the factor list.
    /// Index 0 is the principal class.
    pub fn representatives(&self) -> &[IdealK] {
        &self.representatives
    }

    pub fn class_number(&self) -> usize {
        self.representatives.len()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j] as usize
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.class_number()).find(|&j| self.mul(i, j) == 0).expect("group")
    }

    pub fn pow(&self, i: usize, k: u32) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, i))
    }

    /// Index of the class of `ideal`.
    pub fn class_of(&self, field: &QuadraticField, ideal: &IdealK) -> usize {
        if self.class_number() == 1 {
            return 0;
        }
        let reduced = ideal.reduced(field);
        self.representatives
            .iter()
            .position(|r| reduced.mul(&r.conjugate(field)).reduced(field).generator(field).is_some())
            .expect("every ideal lies in some class")
    }
}

/// Classes from all ideals of norm at most the Minkowski bound, in (norm, factor) order.
pub(super) fn compute_classes(field: &QuadraticField) -> Result<IdealClassData> {
    let d = (field.disc as f64).abs();
    let bound = if field.is_real() { libm::sqrt(d) / 2.0 } else { 2.0 * libm::sqrt(d) / core::f64::consts::PI };
    let bound = bound as u64;
    let primes = primes_up_to(field, bound + 1);
    let mut ideals = vec![IdealK::one()];
    extend_ideals(&primes, 0, IdealK::one(), bound as u128, &mut ideals);
    ideals.sort();
    let mut reps: Vec<IdealK> = Vec::new();
    for ideal in ideals {
        let known = reps.iter().any(|r| ideal.mul(&r.conjugate(field)).reduced(field).generator(field).is_some());
        if !known {
            reps.push(ideal);
        }
    }
    if reps.len() > u8::MAX as usize {
        return Err(Error::FieldTooLarge(format!("class number {} exceeds 255", reps.len())));
    }
    let provisional = IdealClassData { representatives: reps.clone(), table: Vec::new() };
    let h = reps.len();
    let mut table = vec![vec![0u8; h]; h];
    for i in 0..h {
        for j in 0..h {
            table[i][j] = provisional.class_of(field, &reps[i].mul(&reps[j])) as u8;
        }
    }
    let data = IdealClassData { representatives: reps, table };
    check_group(&data)?;
    Ok(data)
}

fn check_group(data: &IdealClassData) -> Result<()> {
    let h = data.class_number();
    for i in 0..h {
        let row: Vec<u8> = data.table[i].clone();
        let mut seen = vec![false; h];
        for &c in &row {
            seen[c as usize] = true;
        }
        if data.table[0][i] as usize != i || seen.iter().any(|s| !s) {
            let msg: String = format!("class multiplication table is not a group: {:?}", data.table);
            return Err(Error::Inconsistent(msg));
        }
        for j in 0..h {
            if data.table[i][j] != data.table[j][i] {
                return Err(Error::Inconsistent(format!("class group is not abelian: {:?}", data.table)));
            }
        }
    }
    Ok(())
}

/// Appends every ideal of norm `≤ bound` built from `primes[start..]` times `base`.
fn extend_ideals(primes: &[PrimeIdealK], start: usize, base: IdealK, bound: u128, out: &mut Vec<IdealK>) {
    for (i, &q) in primes.iter().enumerate().skip(start) {
        let mut ideal = base.clone();
        loop {
            ideal = ideal.mul(&IdealK::prime(q));
            if ideal.norm > bound {
                break;
            }
            out.push(ideal.clone());
            extend_ideals(primes, i + 1, ideal.clone(), bound, out);
        }
    }
}
