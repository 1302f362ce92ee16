//! Quadratic fields `K = Q(√m)` at desk scale: integral elements, prime and
//! squarefree ideals in factored form, the class group, units modulo squares,
//! and the analytic constants behind the squarefree-ideal count.

mod analytic;
mod counting;
mod ideal;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{isqrt, SquarefreeInt};
use crate::error::{Error, Result};

pub use analytic::{density_constant, mainterm_sf, zeta_at_2, zeta_at_2_euler, zeta_residue, EulerProduct};
pub use counting::{count_sf, phi_from_norms, phi_qd, squarefree_ideals_up_to, Rational, SquarefreeCensus};
pub use ideal::{primes_up_to, split_prime, IdealClassData, IdealK, PrimeIdealK, Splitting};

/// Largest `|d_K|` accepted by [`make_field`].
pub const MAX_ABS_DISCRIMINANT: i64 = 10_000;
/// Largest coordinate searched for the fundamental unit of a real field.
pub const UNIT_SEARCH_BOUND: i128 = 10_000_000;

/// `x + yω` on the integral basis `{1, ω}`, `ω = √m` or `(1 + √m)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub x: i128,
    pub y: i128,
}

impl FieldElement {
    pub const ONE: FieldElement = FieldElement { x: 1, y: 0 };

    pub const fn new(x: i128, y: i128) -> Self {
        FieldElement { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn neg(self) -> Self {
        FieldElement { x: -self.x, y: -self.y }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ω", self.x, self.y)
    }
}

/// A quadratic field with its class group and units.
#[derive(Debug, Clone)]
pub struct QuadraticField {
    m: i64,
    disc: i64,
    num_roots_of_unity: u32,
    fundamental_unit: Option<FieldElement>,
    regulator: f64,
    classes: IdealClassData,
}

impl QuadraticField {
    pub fn m(&self) -> i64 {
        self.m
    }

    /// The field discriminant `d_K`.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// `(r1, r2)`.
    pub fn signature(&self) -> (u32, u32) {
        if self.m > 0 {
            (2, 0)
        } else {
            (0, 1)
        }
    }

    pub fn is_real(&self) -> bool {
        self.m > 0
    }

    pub fn num_roots_of_unity(&self) -> u32 {
        self.num_roots_of_unity
    }

    /// The unit `ε > 1` generating the units modulo torsion (real fields only).
    pub fn fundamental_unit(&self) -> Option<FieldElement> {
        self.fundamental_unit
    }

    /// `log ε`, or 0 for imaginary fields.
    pub fn regulator(&self) -> f64 {
        self.regulator
    }

    pub fn class_number(&self) -> usize {
        self.classes.representatives().len()
    }

    pub fn class_data(&self) -> &IdealClassData {
        &self.classes
    }

    /// `ω² = c1·ω + c0`.
    pub(crate) fn omega_square(&self) -> (i128, i128) {
        if self.m.rem_euclid(4) == 1 {
            (1, (self.m as i128 - 1) / 4)
        } else {
            (0, self.m as i128)
        }
    }

    fn mod4_is_1(&self) -> bool {
        self.m.rem_euclid(4) == 1
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (c1, c0) = self.omega_square();
        let yy = a.y * b.y;
        FieldElement { x: a.x * b.x + c0 * yy, y: a.x * b.y + a.y * b.x + c1 * yy }
    }

    /// Galois conjugate.
    pub fn conj(&self, a: FieldElement) -> FieldElement {
        if self.mod4_is_1() {
            FieldElement { x: a.x + a.y, y: -a.y }
        } else {
            FieldElement { x: a.x, y: -a.y }
        }
    }

    pub fn norm(&self, a: FieldElement) -> i128 {
        let (c1, c0) = self.omega_square();
        a.x * a.x + c1 * a.x * a.y - c0 * a.y * a.y
    }

    /// `a / b` if it is integral.
    pub fn div_exact(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        let n = self.norm(b);
        if n == 0 {
            return None;
        }
        let t = self.mul(a, self.conj(b));
        (t.x % n == 0 && t.y % n == 0).then(|| FieldElement { x: t.x / n, y: t.y / n })
    }

    /// Both real embeddings `(σ1(a), σ2(a))` with `σ1(√m) = +√m` (real fields).
    pub fn embeddings(&self, a: FieldElement) -> (f64, f64) {
        let s = libm::sqrt(self.m as f64);
        let (w1, w2) = if self.mod4_is_1() { ((1.0 + s) / 2.0, (1.0 - s) / 2.0) } else { (s, -s) };
        (a.x as f64 + a.y as f64 * w1, a.x as f64 + a.y as f64 * w2)
    }

    /// Representatives of `O_K^× / (O_K^×)²`.
    pub fn units_mod_squares(&self) -> Vec<FieldElement> {
        units_mod_squares(self)
    }

    /// The roots of unity of `K`.
    pub fn roots_of_unity(&self) -> Vec<FieldElement> {
        match self.m {
            -1 => vec![FieldElement::new(1, 0), FieldElement::new(0, 1), FieldElement::new(-1, 0), FieldElement::new(0, -1)],
            // ω = (1 + √−3)/2 is a primitive sixth root of unity.
            -3 => {
                let mut out = vec![FieldElement::ONE];
                let w = FieldElement::new(0, 1);
                for _ in 0..5 {
                    out.push(self.mul(*out.last().unwrap(), w));
                }
                out
            }
            _ => vec![FieldElement::ONE, FieldElement::new(-1, 0)],
        }
    }

    /// Elements of norm `±n` (exactly `n` for imaginary fields), one per associate
    /// class up to sign, bounded so that every principal ideal of norm `n` has a
    /// generator in the list.
    pub(crate) fn elements_of_norm(&self, n: u128) -> Vec<FieldElement> {
        let mut out = Vec::new();
        let (c1, _) = self.omega_square();
        let m = self.m as i128;
        let n = n as i128;
        let y_max: i128 = if self.m < 0 {
            // 4n = (2x + c1·y)² + |m|y².
            isqrt((4 * n / -m) as u128) as i128
        } else {
            let eps = self.embeddings(self.fundamental_unit.expect("real field has a unit")).0;
            // A generator with √n ≤ α < √n·ε has |α − α'| = |y|√m ≤ √n(ε + 1).
            (libm::sqrt(n as f64) * (eps + 1.0) / libm::sqrt(self.m as f64)) as i128 + 1
        };
        let targets: &[i128] = if self.m < 0 { &[1] } else { &[1, -1] };
        let y_min = if self.m < 0 { 0 } else { -y_max };
        for y in y_min..=y_max {
            for &sgn in targets {
                // 4N = (2x + y)² − m·y² when m ≡ 1 (4), N = x² − m·y² otherwise.
                let rhs = if c1 == 1 { 4 * sgn * n + m * y * y } else { sgn * n + m * y * y };
                if rhs < 0 {
                    continue;
                }
                let u = isqrt(rhs as u128) as i128;
                if u * u != rhs {
                    continue;
                }
                let roots: &[i128] = if u == 0 { &[0] } else { &[u, -u] };
                for &u in roots {
                    if c1 == 1 && (u - y) % 2 != 0 {
                        continue;
                    }
                    let x = if c1 == 1 { (u - y) / 2 } else { u };
                    out.push(FieldElement { x, y });
                }
            }
        }
        out
    }
}

/// Builds `Q(√m)`, including its class group and, for real fields, its fundamental unit.
pub fn make_field(m: i64) -> Result<QuadraticField> {
    if m == 0 || m == 1 || SquarefreeInt::new(m).is_err() {
        return Err(Error::InvalidField(m));
    }
    let disc = if m.rem_euclid(4) == 1 { m } else { 4 * m };
    if disc.abs() > MAX_ABS_DISCRIMINANT {
        return Err(Error::FieldTooLarge(format!("|d_K| = {} exceeds {MAX_ABS_DISCRIMINANT}", disc.abs())));
    }
    let num_roots_of_unity = match m {
        -1 => 4,
        -3 => 6,
        _ => 2,
    };
    let mut field = QuadraticField {
        m,
        disc,
        num_roots_of_unity,
        fundamental_unit: None,
        regulator: 0.0,
        classes: IdealClassData::trivial(),
    };
    if m > 0 {
        let unit = fundamental_unit(m)?;
        field.fundamental_unit = Some(unit);
        field.regulator = libm::log(field.embeddings(unit).0);
    }
    field.classes = ideal::compute_classes(&field)?;
    Ok(field)
}

/// Smallest `y ≥ 1` solving the norm-form equation `N(x + yω) = ±1` with `x + yω > 1`.
fn fundamental_unit(m: i64) -> Result<FieldElement> {
    let m = m as i128;
    let b_case = m.rem_euclid(4) == 1;
    for y in 1..=UNIT_SEARCH_BOUND {
        for target in [-1i128, 1] {
            // Case m ≡ 1 (4): u = 2x + y with u² − my² = 4·target.
            let rhs = if b_case { m * y * y + 4 * target } else { m * y * y + target };
            if rhs <= 0 {
                continue;
            }
            let u = isqrt(rhs as u128) as i128;
            if u * u != rhs {
                continue;
            }
            let x = if b_case {
                if (u - y) % 2 != 0 {
                    continue;
                }
                (u - y) / 2
            } else {
                u
            };
            return Ok(FieldElement { x, y });
        }
    }
    Err(Error::FieldTooLarge(format!("fundamental unit of Q(√{m}) has coordinates beyond {UNIT_SEARCH_BOUND}")))
}

fn units_mod_squares(field: &QuadraticField) -> Vec<FieldElement> {
    match field.fundamental_unit {
        Some(eps) => vec![FieldElement::ONE, FieldElement::new(-1, 0), eps, eps.neg()],
        None if field.m == -1 => vec![FieldElement::ONE, FieldElement::new(0, 1)],
        None => vec![FieldElement::ONE, FieldElement::new(-1, 0)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_fields() {
        let k = make_field(-1).unwrap();
        assert_eq!((k.disc(), k.class_number(), k.num_roots_of_unity()), (-4, 1, 4));
        let k = make_field(-5).unwrap();
        assert_eq!((k.disc(), k.class_number()), (-20, 2));
        let k = make_field(2).unwrap();
        assert_eq!((k.disc(), k.class_number()), (8, 1));
        assert_eq!(k.fundamental_unit(), Some(FieldElement::new(1, 1)));
        assert_eq!(k.signature(), (2, 0));
        assert!(matches!(make_field(12), Err(Error::InvalidField(12))));
        assert!(matches!(make_field(1), Err(Error::InvalidField(1))));
        assert!(matches!(make_field(-10_007), Err(Error::FieldTooLarge(_))));
    }

    /// Class numbers of imaginary fields by counting reduced binary quadratic forms.
    fn form_class_number(d: i64) -> usize {
        let mut h = 0;
        let mut a = 1i64;
        while 3 * a * a <= -d {
            for b in -a + 1..=a {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (b < 0 && a == c) {
                    continue;
                }
                if gcd3(a, b, c) == 1 {
                    h += 1;
                }
            }
            a += 1;
        }
        h
    }

    fn gcd3(a: i64, b: i64, c: i64) -> u64 {
        let g = crate::arith::gcd(a.unsigned_abs(), b.unsigned_abs());
        crate::arith::gcd(g, c.unsigned_abs())
    }

    #[test]
    fn imaginary_class_numbers_match_reduced_forms() {
        for m in [-1i64, -2, -3, -5, -6, -10, -13, -14, -15, -17, -21, -23, -26, -29, -30, -47, -71, -89, -101, -163, -199, -311, -479] {
            let k = make_field(m).unwrap();
            assert_eq!(k.class_number(), form_class_number(k.disc()), "m = {m}");
        }
    }

    #[test]
    fn real_class_numbers() {
        // Known small class numbers of real quadratic fields.
        for (m, h) in [(2, 1), (3, 1), (5, 1), (6, 1), (7, 1), (10, 2), (15, 2), (26, 2), (30, 2), (34, 2), (79, 3), (82, 4), (229, 3)] {
            assert_eq!(make_field(m).unwrap().class_number(), h, "m = {m}");
        }
    }

    #[test]
    fn fundamental_units_solve_pell() {
        for m in [2i64, 3, 5, 6, 7, 13, 19, 29, 46, 94, 97] {
            let k = make_field(m).unwrap();
            let e = k.fundamental_unit().unwrap();
            assert_eq!(k.norm(e).abs(), 1, "m = {m}");
            let (s1, _) = k.embeddings(e);
            assert!(s1 > 1.0);
        }
        let k = make_field(5).unwrap();
        assert_eq!(k.fundamental_unit(), Some(FieldElement::new(0, 1)));
        let k = make_field(94).unwrap();
        assert_eq!(k.fundamental_unit(), Some(FieldElement::new(2_143_295, 221_064)));
    }

    #[test]
    fn units_mod_squares_sizes() {
        assert_eq!(make_field(-5).unwrap().units_mod_squares().len(), 2);
        assert_eq!(make_field(2).unwrap().units_mod_squares().len(), 4);
        assert_eq!(make_field(-1).unwrap().units_mod_squares().len(), 2);
        assert_eq!(make_field(-3).unwrap().units_mod_squares().len(), 2);
    }

    #[test]
    fn roots_of_unity_have_norm_one() {
        for m in [-1, -3, -7] {
            let k = make_field(m).unwrap();
            let mu = k.roots_of_unity();
            assert_eq!(mu.len() as u32, k.num_roots_of_unity());
            for z in mu {
                assert_eq!(k.norm(z), 1);
            }
        }
    }

    #[test]
    fn element_arithmetic() {
        for m in [-1i64, -3, -5, 2, 5, 13] {
            let k = make_field(m).unwrap();
            for x1 in -4..=4 {
                for y1 in -4..=4 {
                    let a = FieldElement::new(x1, y1);
                    assert_eq!(k.norm(a), k.mul(a, k.conj(a)).x);
                    assert_eq!(k.mul(a, k.conj(a)).y, 0);
                    for (x2, y2) in [(1, 2), (-3, 1), (0, 5)] {
                        let b = FieldElement::new(x2, y2);
                        assert_eq!(k.norm(k.mul(a, b)), k.norm(a) * k.norm(b));
                        assert_eq!(k.div_exact(k.mul(a, b), b), Some(a));
                    }
                }
            }
        }
    }

    #[test]
    fn norm_search_finds_every_small_element() {
        for m in [-1i64, -5, -3, 2, 5] {
            let k = make_field(m).unwrap();
            for n in 1..60u128 {
                let found = k.elements_of_norm(n);
                for z in &found {
                    assert_eq!(k.norm(*z).unsigned_abs(), n);
                }
                // Every element with small coordinates and norm ±n is an associate of a listed one.
                for x in -12i128..=12 {
                    for y in -12i128..=12 {
                        let a = FieldElement::new(x, y);
                        if k.norm(a).unsigned_abs() != n || (m < 0 && k.norm(a) < 0) {
                            continue;
                        }
                        let assoc = found.iter().any(|b| {
                            k.div_exact(a, *b).is_some_and(|u| k.norm(u).abs() == 1)
                        });
                        assert!(assoc, "m={m} n={n} element {a}");
                    }
                }
            }
        }
    }
}
