use core::fmt;

use alloc::vec::Vec;

use super::kronecker::legendre;
use super::primes::{is_prime, valuation};
use crate::error::{Error, Result};

/// A place of `Q`: a finite prime or the real place.
///
/// Finite places sort before the real place, ascending by prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Real,
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Place::Finite(p))
    }

    /// Number of square classes of the completion: 4 at odd `p`, 8 at 2, 2 at the real place.
    pub fn num_square_classes(self) -> usize {
        match self {
            Place::Real => 2,
            Place::Finite(2) => 8,
            Place::Finite(_) => 4,
        }
    }

    /// `F_2`-dimension of `Q_v^* / (Q_v^*)^2`.
    pub fn square_class_rank(self) -> u32 {
        self.num_square_classes().trailing_zeros()
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Real => f.write_str("inf"),
        }
    }
}

/// An element of `Q_v^* / (Q_v^*)^2` with a squarefree integer representative.
///
/// The class index is the coordinate vector in `F_2^r`:
/// odd `p`: bit 0 = unit part is a nonresidue, bit 1 = odd valuation;
/// `p = 2`: bit 0 = unit in `5 (Z_2^*)^2`-coset, bit 1 = unit is `-1 mod 4`, bit 2 = odd valuation;
/// real: bit 0 = negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SquareClassLocal {
    place: Place,
    index: u8,
    representative: i64,
}

impl SquareClassLocal {
    pub fn place(&self) -> Place {
        self.place
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn representative(&self) -> i64 {
        self.representative
    }

    /// The class with the given index at `place`.
    pub fn from_index(place: Place, index: u8) -> Result<Self> {
        if (index as usize) >= place.num_square_classes() {
            return Err(Error::OutOfRange("square class index out of range".into()));
        }
        let representative = match place {
            Place::Real => {
                if index == 0 {
                    1
                } else {
                    -1
                }
            }
            Place::Finite(2) => [1, 5, -1, -5, 2, 10, -2, -10][index as usize],
            Place::Finite(p) => {
                let u = if index & 1 == 1 { smallest_nonresidue(p) as i64 } else { 1 };
                let v = if index & 2 == 2 { p as i64 } else { 1 };
                u * v
            }
        };
        Ok(SquareClassLocal { place, index, representative })
    }

    /// The class of the nonzero integer `n` at `place`.
    pub fn of_integer(n: i128, place: Place) -> Result<Self> {
        if n == 0 {
            return Err(Error::Zero);
        }
        Self::from_index(place, class_index(n, place))
    }

    pub fn mul(self, other: SquareClassLocal) -> Result<Self> {
        if self.place != other.place {
            return Err(Error::PlaceMismatch);
        }
        Self::from_index(self.place, self.index ^ other.index)
    }
}

/// All square classes of `Q_v`, in index order.
pub fn local_square_classes(place: Place) -> Vec<SquareClassLocal> {
    (0..place.num_square_classes() as u8)
        .map(|i| SquareClassLocal::from_index(place, i).expect("index in range"))
        .collect()
}

/// Index (see [`SquareClassLocal`]) of the class of a nonzero integer.
pub fn class_index(n: i128, place: Place) -> u8 {
    debug_assert!(n != 0);
    match place {
        Place::Real => (n < 0) as u8,
        Place::Finite(p) => {
            let v = valuation(n, p);
            let unit = n / (p as i128).pow(v);
            let vbit = ((v & 1) as u8) << if p == 2 { 2 } else { 1 };
            if p == 2 {
                vbit | two_adic_unit_bits(unit)
            } else {
                vbit | (legendre(unit, p) == -1) as u8
            }
        }
    }
}

fn two_adic_unit_bits(u: i128) -> u8 {
    match u.rem_euclid(8) {
        1 => 0,
        5 => 1,
        7 => 2,
        3 => 3,
        _ => unreachable!("even 2-adic unit"),
    }
}

/// Least quadratic nonresidue modulo the odd prime `p`.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&u| legendre(u as i128, p) == -1).expect("odd prime has a nonresidue")
}

/// Hilbert symbol `(x, y)_v` for nonzero integers.
pub fn hilbert_symbol(x: i128, y: i128, place: Place) -> i8 {
    debug_assert!(x != 0 && y != 0);
    match place {
        Place::Real => {
            if x < 0 && y < 0 {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) => {
            let (a, b) = (valuation(x, p), valuation(y, p));
            let u = x / (p as i128).pow(a);
            let v = y / (p as i128).pow(b);
            if p == 2 {
                let eps = |t: i128| ((t.rem_euclid(8) - 1) / 2) & 1;
                let omega = |t: i128| {
                    let r = t.rem_euclid(8);
                    ((r * r - 1) / 8) & 1
                };
                let e = eps(u) * eps(v) + a as i128 * omega(v) + b as i128 * omega(u);
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let mut s: i8 = if (a as u64 * b as u64 * ((p - 1) / 2)) % 2 == 0 { 1 } else { -1 };
                if b % 2 == 1 {
                    s *= legendre(u, p);
                }
                if a % 2 == 1 {
                    s *= legendre(v, p);
                }
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reps(place: Place) -> Vec<i64> {
        local_square_classes(place).iter().map(|c| c.representative()).collect()
    }

    #[test]
    fn class_lists() {
        assert_eq!(reps(Place::Real), [1, -1]);
        assert_eq!(reps(Place::Finite(5)), [1, 2, 5, 10]);
        assert_eq!(reps(Place::Finite(2)), [1, 5, -1, -5, 2, 10, -2, -10]);
        assert_eq!(reps(Place::Finite(7)), [1, 3, 7, 21]);
    }

    #[test]
    fn representatives_lie_in_their_class() {
        for place in [Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(13), Place::Finite(101)] {
            for c in local_square_classes(place) {
                assert_eq!(class_index(c.representative() as i128, place), c.index());
                let r = c.representative();
                assert!(crate::arith::squarefree::SquarefreeInt::new(r).is_ok());
            }
        }
    }

    #[test]
    fn two_adic_classes_by_enumeration() {
        // Q_2^*/(Q_2^*)^2 is determined by valuation parity and the odd part mod 8.
        let mut seen = [false; 8];
        for n in 1..=64i128 {
            for s in [1, -1] {
                let idx = class_index(s * n, Place::Finite(2));
                seen[idx as usize] = true;
                let v = valuation(n, 2);
                let odd = s * n / (1 << v);
                let rep = SquareClassLocal::from_index(Place::Finite(2), idx).unwrap().representative() as i128;
                let rv = valuation(rep, 2);
                assert_eq!(v % 2, rv % 2);
                assert_eq!(odd.rem_euclid(8), (rep / (1 << rv)).rem_euclid(8));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn class_index_is_a_homomorphism() {
        for place in [Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(11)] {
            for x in -60i128..60 {
                for y in -60i128..60 {
                    if x == 0 || y == 0 {
                        continue;
                    }
                    assert_eq!(class_index(x * y, place), class_index(x, place) ^ class_index(y, place));
                }
            }
        }
    }

    #[test]
    fn hilbert_symbol_is_nondegenerate_and_bilinear() {
        for place in [Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7)] {
            let classes = local_square_classes(place);
            for x in &classes {
                let row: Vec<i8> = classes
                    .iter()
                    .map(|y| hilbert_symbol(x.representative() as i128, y.representative() as i128, place))
                    .collect();
                if x.index() != 0 {
                    assert!(row.contains(&-1), "degenerate at {place} for {}", x.representative());
                }
                for y in &classes {
                    for z in &classes {
                        let yz = y.mul(*z).unwrap();
                        let (xr, yr, zr, yzr) =
                            (x.representative() as i128, y.representative() as i128, z.representative() as i128, yz.representative() as i128);
                        assert_eq!(
                            hilbert_symbol(xr, yzr, place),
                            hilbert_symbol(xr, yr, place) * hilbert_symbol(xr, zr, place)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hilbert_product_formula() {
        let places = [Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7), Place::Finite(11), Place::Finite(13)];
        for x in [-1i128, 2, 3, -5, 6, 7, -11, 13, 10, -26] {
            for y in [-1i128, 2, -3, 5, 7, 11, -13, 15, 22] {
                let prod: i8 = places.iter().map(|&v| hilbert_symbol(x, y, v)).product();
                assert_eq!(prod, 1, "x={x} y={y}");
            }
        }
    }
}
