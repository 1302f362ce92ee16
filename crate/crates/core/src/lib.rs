//! 2-isogeny Selmer data, Tamagawa ratios and Erdős–Kac statistics for
//! quadratic twist families of elliptic curves `y² = x³ + ax² + bx` over `Q`,
//! together with the squarefree-ideal counting in quadratic fields that the
//! statistics rest on.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod characters;
pub mod ekstats;
mod error;
pub mod quadfield;
pub mod selmer;

pub use error::{Error, Result};
