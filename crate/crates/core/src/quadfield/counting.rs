//! Squarefree ideals by norm, class and gcd with a fixed modulus.

use alloc::vec::Vec;
use core::fmt;

use super::ideal::{primes_up_to, IdealK, PrimeIdealK};
use super::QuadraticField;
use crate::arith::gcd;
use crate::error::{Error, Result};

/// A nonnegative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u128,
    den: u128,
}

impl Rational {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd_u128(num, den);
        Rational { num: num / g, den: den / g }
    }

    pub fn num(&self) -> u128 {
        self.num
    }

    pub fn den(&self) -> u128 {
        self.den
    }

    pub fn mul(self, other: Rational) -> Rational {
        let g1 = gcd_u128(self.num, other.den);
        let g2 = gcd_u128(other.num, self.den);
        Rational::new((self.num / g1) * (other.num / g2), (self.den / g2) * (other.den / g1))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a < u64::MAX as u128 && b < u64::MAX as u128 {
        return gcd(a as u64, b as u64).max(1) as u128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// `∏_{π|𝔡} 1/(Nπ+1) · ∏_{π|𝔮, π∤𝔡} Nπ/(Nπ+1)` from the prime norms on each side.
pub fn phi_from_norms(dividing_d: &[u64], only_q: &[u64]) -> Rational {
    let one = Rational::new(1, 1);
    let a = dividing_d.iter().fold(one, |acc, &n| acc.mul(Rational::new(1, n as u128 + 1)));
    only_q.iter().fold(a, |acc, &n| acc.mul(Rational::new(n as u128, n as u128 + 1)))
}

fn check_divisor(q: &IdealK, d: &IdealK) -> Result<()> {
    if !d.is_squarefree() || !d.divides(q) {
        return Err(Error::InvalidDivisor);
    }
    Ok(())
}

/// `φ(𝔮, 𝔡)`; requires `𝔡` squarefree and `𝔡 | 𝔮`.
pub fn phi_qd(_field: &QuadraticField, q: &IdealK, d: &IdealK) -> Result<Rational> {
    check_divisor(q, d)?;
    let (in_d, only_q): (Vec<_>, Vec<_>) = q.factors().iter().map(|(p, _)| *p).partition(|p| d.exponent(p) > 0);
    let norms = |v: Vec<PrimeIdealK>| -> Vec<u64> { v.iter().map(|p| p.norm()).collect() };
    Ok(phi_from_norms(&norms(in_d), &norms(only_q)))
}

/// The prime ideals of norm below a cutoff together with their classes, for
/// repeated squarefree counts in one field.
#[derive(Debug, Clone)]
pub struct SquarefreeCensus<'a> {
    field: &'a QuadraticField,
    limit: u64,
    primes: Vec<PrimeIdealK>,
    classes: Vec<u8>,
}

impl<'a> SquarefreeCensus<'a> {
    /// Prepares counts for norms `< limit`.
    pub fn new(field: &'a QuadraticField, limit: u64) -> Self {
        let primes = primes_up_to(field, limit);
        let data = field.class_data();
        let classes = primes.iter().map(|p| data.class_of(field, &IdealK::prime(*p)) as u8).collect();
        SquarefreeCensus { field, limit, primes, classes }
    }

    pub fn field(&self) -> &QuadraticField {
        self.field
    }

    /// Class index of every prime ideal of norm below the limit, in norm order.
    pub fn primes(&self) -> impl Iterator<Item = (PrimeIdealK, usize)> + '_ {
        self.primes.iter().copied().zip(self.classes.iter().map(|&c| c as usize))
    }

    /// `N^sf(x; 𝔠, 𝔮, 𝔡)` with `class` the index of the class of `𝔠`.
    pub fn count(&self, x: u64, class: usize, q: &IdealK, d: &IdealK) -> Result<u64> {
        check_divisor(q, d)?;
        if x > self.limit {
            return Err(Error::OutOfRange("count beyond the census limit".into()));
        }
        let q_primes: Vec<PrimeIdealK> = q.factors().iter().map(|(p, _)| *p).collect();
        let bit_of = |p: &PrimeIdealK| q_primes.iter().position(|r| r == p).map_or(0u64, |i| 1 << i);
        let bits: Vec<u64> = self.primes.iter().map(bit_of).collect();
        let want: u64 = d.factors().iter().map(|(p, _)| bit_of(p)).fold(0, |a, b| a | b);
        let mut n = 0u64;
        self.walk(x, 0, 1, 0, 0, &bits, &mut |cls, mask, _| {
            if cls == class && mask == want {
                n += 1;
            }
        });
        Ok(n)
    }

    /// Squarefree ideals of norm `< x`, in the order of a depth-first walk over
    /// norm-sorted primes, with the class of each.
    pub fn ideals(&self, x: u64) -> Vec<(IdealK, usize)> {
        let mut out = Vec::new();
        let mut stack: Vec<PrimeIdealK> = Vec::new();
        self.walk_ideals(x, 0, 1, 0, &mut stack, &mut out);
        out
    }

    fn walk_ideals(&self, x: u64, start: usize, norm: u64, cls: usize, stack: &mut Vec<PrimeIdealK>, out: &mut Vec<(IdealK, usize)>) {
        if norm >= x {
            return;
        }
        out.push((IdealK::from_primes(stack), cls));
        let data = self.field.class_data();
        for i in start..self.primes.len() {
            let n = norm.saturating_mul(self.primes[i].norm());
            if n >= x {
                break;
            }
            stack.push(self.primes[i]);
            self.walk_ideals(x, i + 1, n, data.mul(cls, self.classes[i] as usize), stack, out);
            stack.pop();
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(&self, x: u64, start: usize, norm: u64, cls: usize, mask: u64, bits: &[u64], visit: &mut impl FnMut(usize, u64, u64)) {
        if norm >= x {
            return;
        }
        visit(cls, mask, norm);
        let data = self.field.class_data();
        for i in start..self.primes.len() {
            let n = norm.saturating_mul(self.primes[i].norm());
            if n >= x {
                break;
            }
            self.walk(x, i + 1, n, data.mul(cls, self.classes[i] as usize), mask | bits[i], bits, visit);
        }
    }
}

/// Squarefree ideals of norm `< x`, sorted by norm then factors. With
/// `constraint = Some(𝔟)`, only those `𝔞` with `𝔞𝔟²` principal.
pub fn squarefree_ideals_up_to(field: &QuadraticField, x: u64, constraint: Option<&IdealK>) -> Vec<IdealK> {
    let census = SquarefreeCensus::new(field, x.max(1));
    let data = field.class_data();
    let target = constraint.map(|b| data.inverse(data.pow(data.class_of(field, b), 2)));
    let mut out: Vec<IdealK> = census
        .ideals(x)
        .into_iter()
        .filter(|(_, c)| target.map_or(true, |t| *c == t))
        .map(|(i, _)| i)
        .collect();
    out.sort();
    out
}

/// `N^sf(x; 𝔠, 𝔮, 𝔡)`: squarefree `𝔞` with `N𝔞 < x`, `𝔞 ~ 𝔠` and `(𝔞, 𝔮) = 𝔡`.
pub fn count_sf(field: &QuadraticField, x: u64, c: &IdealK, q: &IdealK, d: &IdealK) -> Result<u64> {
    check_divisor(q, d)?;
    let census = SquarefreeCensus::new(field, x.max(1));
    census.count(x, field.class_data().class_of(field, c), q, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{make_field, split_prime};

    #[test]
    fn stated_phi_values() {
        let k = make_field(-1).unwrap();
        assert_eq!(phi_qd(&k, &IdealK::one(), &IdealK::one()).unwrap(), Rational::new(1, 1));
        assert_eq!(phi_from_norms(&[], &[3]), Rational::new(3, 4));
        assert_eq!(phi_from_norms(&[3], &[]), Rational::new(1, 4));
        // Over Q(√−2) the prime 3 splits, so a prime above it has norm 3.
        let k2 = make_field(-2).unwrap();
        let p3 = IdealK::prime(split_prime(&k2, 3).unwrap()[0]);
        assert_eq!(phi_qd(&k2, &p3, &IdealK::one()).unwrap(), Rational::new(3, 4));
        assert_eq!(phi_qd(&k2, &p3, &p3).unwrap(), Rational::new(1, 4));
        assert_eq!(phi_qd(&k2, &IdealK::one(), &p3), Err(Error::InvalidDivisor));
        assert_eq!(phi_qd(&k2, &p3.pow(2), &p3.pow(2)), Err(Error::InvalidDivisor));
    }

    #[test]
    fn stated_ideal_lists() {
        let k = make_field(-1).unwrap();
        let got = squarefree_ideals_up_to(&k, 3, None);
        assert_eq!(got.len(), 2);
        assert!(got[0].is_one());
        assert_eq!(got[1].norm(), 2);
        assert!(squarefree_ideals_up_to(&k, 1, None).is_empty());
    }

    /// Squarefree ideals of norm < x by brute force over all products of primes.
    fn brute_squarefree(k: &QuadraticField, x: u64) -> Vec<IdealK> {
        let primes = primes_up_to(k, x);
        let mut out = Vec::new();
        for mask in 0u64..(1 << primes.len().min(20)) {
            let chosen: Vec<PrimeIdealK> = (0..primes.len()).filter(|i| mask >> i & 1 == 1).map(|i| primes[i]).collect();
            let ideal = IdealK::from_primes(&chosen);
            if ideal.norm() < x as u128 {
                out.push(ideal);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for m in [-1i64, -5, 2] {
            let k = make_field(m).unwrap();
            assert_eq!(squarefree_ideals_up_to(&k, 40, None), brute_squarefree(&k, 40));
        }
    }

    #[test]
    fn class_constraint_matches_principality_search() {
        let k = make_field(-5).unwrap();
        let b = k.class_data().representatives()[1].clone();
        let got = squarefree_ideals_up_to(&k, 10, Some(&b));
        let want: Vec<IdealK> = brute_squarefree(&k, 10)
            .into_iter()
            .filter(|a| a.mul(&b.pow(2)).generator(&k).is_some())
            .collect();
        assert_eq!(got, want);
        assert!(!got.is_empty());
    }

    #[test]
    fn counts_partition_over_classes_and_divisors() {
        for m in [-1i64, -5, -23, 2] {
            let k = make_field(m).unwrap();
            let x = 3000;
            let census = SquarefreeCensus::new(&k, x);
            let all = census.ideals(x).len() as u64;
            let one = IdealK::one();
            let by_class: u64 = (0..k.class_number()).map(|c| census.count(x, c, &one, &one).unwrap()).sum();
            assert_eq!(by_class, all, "m={m}");
            let primes: Vec<PrimeIdealK> = primes_up_to(&k, 30).into_iter().take(2).collect();
            let q = IdealK::from_primes(&primes);
            let mut total = 0;
            for sub in 0..4u32 {
                let d: Vec<PrimeIdealK> = (0..2).filter(|i| sub >> i & 1 == 1).map(|i| primes[i]).collect();
                let d = IdealK::from_primes(&d);
                for c in 0..k.class_number() {
                    total += census.count(x, c, &q, &d).unwrap();
                }
            }
            assert_eq!(total, all, "m={m}");
        }
    }

    #[test]
    fn count_divisible_by_the_prime_above_two() {
        let k = make_field(-1).unwrap();
        let p2 = IdealK::prime(split_prime(&k, 2).unwrap()[0]);
        let n = count_sf(&k, 100, &IdealK::one(), &p2, &p2).unwrap();
        let brute = brute_squarefree(&k, 100).iter().filter(|a| p2.divides(a)).count() as u64;
        assert_eq!(n, brute);
        let all = count_sf(&k, 100, &IdealK::one(), &IdealK::one(), &IdealK::one()).unwrap();
        assert_eq!(all, squarefree_ideals_up_to(&k, 100, None).len() as u64);
    }
}
