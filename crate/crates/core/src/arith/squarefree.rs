use core::fmt;

use alloc::vec;
use alloc::vec::Vec;

use super::primes::factor_trial;
use crate::error::{Error, Result};

/// A nonzero squarefree integer, sign included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquarefreeInt(i64);

impl SquarefreeInt {
    pub fn new(value: i64) -> Result<Self> {
        if value == 0 {
            return Err(Error::Zero);
        }
        if factor_trial(value.unsigned_abs()).iter().any(|&(_, e)| e > 1) {
            return Err(Error::NotSquarefree(value));
        }
        Ok(SquarefreeInt(value))
    }

    pub(crate) const fn new_unchecked(value: i64) -> Self {
        SquarefreeInt(value)
    }

    pub const ONE: SquarefreeInt = SquarefreeInt(1);

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn unsigned_abs(self) -> u64 {
        self.0.unsigned_abs()
    }

    /// Squarefree part of the product, i.e. the class of `self * other` mod squares.
    pub fn mul_mod_squares(self, other: SquarefreeInt) -> SquarefreeInt {
        let g = gcd(self.unsigned_abs(), other.unsigned_abs()) as i64;
        SquarefreeInt((self.0 / g) * (other.0 / g))
    }
}

impl fmt::Display for SquarefreeInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The squarefree `s` with `d / s` a positive perfect square.
pub fn squarefree_part(d: i64) -> Result<SquarefreeInt> {
    if d == 0 {
        return Err(Error::Zero);
    }
    let core: u64 = factor_trial(d.unsigned_abs())
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    Ok(SquarefreeInt(d.signum() * core as i64))
}

/// Every squarefree `d` with `0 < |d| < bound`, ordered by `|d|` and then `d` before `-d`.
pub fn sieve_squarefree(bound: u64) -> Result<Vec<SquarefreeInt>> {
    if bound < 2 {
        return Err(Error::BoundTooSmall { bound, min: 2 });
    }
    let flags = squarefree_flags(bound);
    let mut out = Vec::with_capacity(2 * bound as usize * 61 / 100 + 4);
    for (n, &sf) in flags.iter().enumerate().skip(1) {
        if sf {
            out.push(SquarefreeInt(n as i64));
            out.push(SquarefreeInt(-(n as i64)));
        }
    }
    Ok(out)
}

/// `flags[n]` is true iff `n` is squarefree, for `0 <= n < bound` (`flags[0]` is false).
pub fn squarefree_flags(bound: u64) -> Vec<bool> {
    let n = bound as usize;
    let mut flags = vec![true; n.max(1)];
    flags[0] = false;
    let mut p = 2usize;
    while p * p < n {
        let sq = p * p;
        let mut j = sq;
        while j < n {
            flags[j] = false;
            j += sq;
        }
        p += 1;
    }
    flags
}
