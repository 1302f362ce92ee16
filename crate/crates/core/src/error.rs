use core::fmt;

use alloc::string::String;

/// Errors raised by the arithmetic, field and descent routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A sieve or enumeration bound below its minimum.
    BoundTooSmall { bound: u64, min: u64 },
    /// Zero where a nonzero integer or field element is required.
    Zero,
    /// An integer that was required to be squarefree is not.
    NotSquarefree(i64),
    /// An integer that was required to be prime is not.
    NotPrime(u64),
    /// `b(a^2 - 4b) = 0`: the curve or its isogenous partner is singular.
    SingularCurve { a: i64, b: i64 },
    /// A square class was used at a place it does not belong to.
    PlaceMismatch,
    /// `m` does not define a quadratic field (`m` in `{0, 1}` or not squarefree).
    InvalidField(i64),
    /// Field exceeds the desk-scale caps on discriminant or fundamental unit size.
    FieldTooLarge(String),
    /// `d` does not divide `q`, or `d` is not squarefree.
    InvalidDivisor,
    /// Prime index not present above the given rational prime.
    NoSuchPrimeIdeal { p: u64, index: u8 },
    /// Odd moment order where an even one is required.
    OddMomentOrder(u32),
    /// The element is a square, so the Mertens-type sum is outside its range.
    SquareCharacter(i64),
    /// A scale or cutoff outside its valid range.
    OutOfRange(String),
    /// A p-adic search exceeded its depth guard.
    SearchDepthExceeded { p: u64 },
    /// An exact identity of the descent failed; carries a dump of the local data.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BoundTooSmall { bound, min } => {
                write!(f, "bound {bound} is below the minimum {min}")
            }
            Error::Zero => f.write_str("zero is not allowed here"),
            Error::NotSquarefree(n) => write!(f, "{n} is not squarefree"),
            Error::NotPrime(n) => write!(f, "{n} is not prime"),
            Error::SingularCurve { a, b } => {
                write!(f, "curve y^2 = x^3 + {a}x^2 + {b}x is singular: b(a^2-4b) = 0")
            }
            Error::PlaceMismatch => f.write_str("square class belongs to a different place"),
            Error::InvalidField(m) => write!(f, "m = {m} does not define a quadratic field"),
            Error::FieldTooLarge(why) => write!(f, "field too large: {why}"),
            Error::InvalidDivisor => f.write_str("d must be squarefree and divide q"),
            Error::NoSuchPrimeIdeal { p, index } => {
                write!(f, "no prime ideal with index {index} above {p}")
            }
            Error::OddMomentOrder(k) => write!(f, "moment order {k} is odd"),
            Error::SquareCharacter(c) => write!(f, "{c} is a square"),
            Error::OutOfRange(why) => f.write_str(why),
            Error::SearchDepthExceeded { p } => {
                write!(f, "p-adic solubility search at p = {p} exceeded its depth guard")
            }
            Error::Inconsistent(dump) => write!(f, "descent identity violated:\n{dump}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
