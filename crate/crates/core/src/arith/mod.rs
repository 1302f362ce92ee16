//! Rational-prime arithmetic: sieves, quadratic symbols, squarefree parts,
//! local square classes and local solubility of the descent quartics.

pub(crate) mod fp_poly;
mod kronecker;
mod primes;
mod square_class;
mod squarefree;
mod torsor;

pub use kronecker::kronecker;
pub(crate) use kronecker::{kronecker_i128, legendre};
pub use primes::{factor_trial, is_perfect_square, is_prime, isqrt, sieve_primes, valuation, FactorSieve, PrimeTable};
pub(crate) use primes::sqrt_mod;
pub use square_class::{class_index, hilbert_symbol, local_square_classes, smallest_nonresidue, Place, SquareClassLocal};
pub(crate) use squarefree::gcd;
pub use squarefree::{sieve_squarefree, squarefree_flags, squarefree_part, SquarefreeInt};
pub use torsor::torsor_locally_solvable;
pub(crate) use torsor::quartic_solvable;
