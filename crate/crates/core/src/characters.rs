//! Quadratic characters of `Q` and of quadratic fields.
//!
//! Over `Q` a character is the signed squarefree `d` of `Q(√d)`. Over a
//! quadratic field `K` it is the triple `(𝔟, 𝔞, ε)`: `𝔟` the minimal-norm
//! representative of its class, `𝔞` squarefree with `𝔞𝔟²` principal, and `ε` a
//! unit modulo squares. The character is `χ_d` for `d = ε·α` where `α` is the
//! canonical generator of `𝔞𝔟²`, and its conductor ideal `D_χ` is `𝔞`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::arith::{factor_trial, kronecker_i128, legendre, sieve_primes, sieve_squarefree, valuation, SquarefreeInt};
use crate::ekstats::AdditiveFunctionSpec;
use crate::error::{Error, Result};
use crate::quadfield::{self, make_field, FieldElement, IdealK, PrimeIdealK, QuadraticField, Splitting};

/// `Q` or a quadratic field.
#[derive(Debug, Clone)]
pub enum BaseField {
    Rational,
    Quadratic(Arc<QuadraticField>),
}

impl BaseField {
    /// `Q(√m)`.
    pub fn quadratic(m: i64) -> Result<Self> {
        Ok(BaseField::Quadratic(Arc::new(make_field(m)?)))
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticField> {
        match self {
            BaseField::Rational => None,
            BaseField::Quadratic(k) => Some(k),
        }
    }

    /// `m` for `Q(√m)`, and 1 for `Q`.
    pub fn m(&self) -> i64 {
        self.as_quadratic().map_or(1, |k| k.m())
    }

    /// `|O^× / (O^×)²|`.
    pub fn units_mod_squares_count(&self) -> usize {
        self.as_quadratic().map_or(2, |k| k.units_mod_squares().len())
    }

    /// Primes of norm `< x`, ordered by norm.
    pub fn primes_up_to(&self, x: u64) -> Vec<Prime> {
        match self {
            BaseField::Rational if x <= 2 => Vec::new(),
            BaseField::Rational => sieve_primes(x).expect("x > 2").iter().map(Prime::Rational).collect(),
            BaseField::Quadratic(k) => quadfield::primes_up_to(k, x).into_iter().map(Prime::Ideal).collect(),
        }
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m()
    }
}

impl Eq for BaseField {}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rational => f.write_str("Q"),
            BaseField::Quadratic(k) => write!(f, "Q(sqrt({}))", k.m()),
        }
    }
}

/// A prime of `Q` or a prime ideal of a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prime {
    Rational(u64),
    Ideal(PrimeIdealK),
}

impl Prime {
    pub fn norm(&self) -> u64 {
        match self {
            Prime::Rational(p) => *p,
            Prime::Ideal(q) => q.norm(),
        }
    }

    /// The rational prime below.
    pub fn p(&self) -> u64 {
        match self {
            Prime::Rational(p) => *p,
            Prime::Ideal(q) => q.p(),
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Rational(p) => write!(f, "{p}"),
            Prime::Ideal(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Data {
    Rational(SquarefreeInt),
    Quadratic { class: usize, conductor: IdealK, unit: u8 },
}

/// A quadratic character `χ_d`.
#[derive(Debug, Clone)]
pub struct QuadraticCharacter {
    base: BaseField,
    data: Data,
}

impl QuadraticCharacter {
    /// `χ_d` over `Q`, for the squarefree part of `d`.
    pub fn rational(d: i64) -> Result<Self> {
        let d = crate::arith::squarefree_part(d)?;
        Ok(QuadraticCharacter { base: BaseField::Rational, data: Data::Rational(d) })
    }

    fn from_triple(field: &Arc<QuadraticField>, class: usize, conductor: IdealK, unit: u8) -> Self {
        QuadraticCharacter { base: BaseField::Quadratic(field.clone()), data: Data::Quadratic { class, conductor, unit } }
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn is_trivial(&self) -> bool {
        match &self.data {
            Data::Rational(d) => d.get() == 1,
            Data::Quadratic { class, conductor, unit } => *class == 0 && conductor.is_one() && *unit == 0,
        }
    }

    /// `d` over `Q`.
    pub fn rational_d(&self) -> Option<SquarefreeInt> {
        match self.data {
            Data::Rational(d) => Some(d),
            Data::Quadratic { .. } => None,
        }
    }

    /// `D_χ = 𝔞` over a quadratic field.
    pub fn conductor_ideal(&self) -> Option<&IdealK> {
        match &self.data {
            Data::Rational(_) => None,
            Data::Quadratic { conductor, .. } => Some(conductor),
        }
    }

    /// Index of the class of `𝔟` in the field's class data.
    pub fn class_index(&self) -> Option<usize> {
        match self.data {
            Data::Rational(_) => None,
            Data::Quadratic { class, .. } => Some(class),
        }
    }

    /// `𝔟`.
    pub fn class_representative(&self) -> Option<&IdealK> {
        let k = self.base.as_quadratic()?;
        Some(&k.class_data().representatives()[self.class_index()?])
    }

    /// Index of `ε` in [`QuadraticField::units_mod_squares`]; over `Q`, 0 or 1 for the sign.
    pub fn unit_class(&self) -> u8 {
        match self.data {
            Data::Rational(d) => (d.get() < 0) as u8,
            Data::Quadratic { unit, .. } => unit,
        }
    }

    /// Every prime dividing `D_χ`, 2 included, ordered by norm.
    pub fn conductor_primes(&self) -> Vec<Prime> {
        match &self.data {
            Data::Rational(d) => factor_trial(d.unsigned_abs()).into_iter().map(|(p, _)| Prime::Rational(p)).collect(),
            Data::Quadratic { conductor, .. } => {
                let mut out: Vec<Prime> = conductor.factors().iter().map(|(q, _)| Prime::Ideal(*q)).collect();
                out.sort_by_key(|q| (q.norm(), *q));
                out
            }
        }
    }

    /// Whether `π` divides `D_χ`.
    pub fn divides_conductor(&self, prime: &Prime) -> bool {
        match (&self.data, prime) {
            (Data::Rational(d), Prime::Rational(p)) => d.unsigned_abs() % p == 0,
            (Data::Quadratic { conductor, .. }, Prime::Ideal(q)) => conductor.exponent(q) > 0,
            _ => false,
        }
    }

    /// `ε·α` with `α` the canonical generator of `𝔞𝔟²`; `d` itself over `Q`.
    pub fn defining_element(&self) -> FieldElement {
        match (&self.data, &self.base) {
            (Data::Rational(d), _) => FieldElement::new(d.get() as i128, 0),
            (Data::Quadratic { class, conductor, unit }, BaseField::Quadratic(k)) => {
                let b = &k.class_data().representatives()[*class];
                let alpha = conductor.mul(&b.pow(2)).generator(k).expect("𝔞𝔟² is principal");
                k.mul(k.units_mod_squares()[*unit as usize], alpha)
            }
            _ => unreachable!("data matches the base field"),
        }
    }

    /// `χ(π)` at a prime of odd norm; `None` above 2.
    pub fn value_at(&self, prime: &Prime) -> Option<i8> {
        if prime.p() == 2 {
            return None;
        }
        match (&self.data, prime, &self.base) {
            (Data::Rational(d), Prime::Rational(p), _) => Some(kronecker_i128(d.get() as i128, *p as i128)),
            (Data::Quadratic { conductor, .. }, Prime::Ideal(q), BaseField::Quadratic(k)) => {
                if conductor.exponent(q) > 0 {
                    return Some(0);
                }
                Some(residue_symbol(k, self.defining_element(), q))
            }
            _ => None,
        }
    }
}

/// Whether `δ` is a square in the residue field at `𝔭`, for `δ` with even
/// `v_𝔭(δ)` and `𝔭` above an odd prime.
fn residue_symbol(k: &QuadraticField, delta: FieldElement, q: &PrimeIdealK) -> i8 {
    let p = q.p();
    let pi = p as i128;
    match q.splitting() {
        Splitting::Inert => {
            // An element of F_{p²} is a square iff its norm to F_p is.
            let c = content_valuation(delta, p);
            let unit = FieldElement::new(delta.x / pi.pow(c), delta.y / pi.pow(c));
            legendre(k.norm(unit), p)
        }
        Splitting::Ramified => {
            // δ = u + y(ω − r) with v_𝔭(u) = 2v_p(u) and v_𝔭(y(ω − r)) odd.
            let u = delta.x + delta.y * q.root() as i128;
            let e = valuation(u, p);
            legendre(u / pi.pow(e), p)
        }
        Splitting::Split => {
            // In Q_p = K_𝔭, ω is a root R ≡ r of its minimal polynomial.
            let v = q.valuation(k, delta);
            let modulus = pi.checked_pow(v + 1).expect("valuation fits i128");
            let r = hensel_root(k, q.root() as i128, pi, modulus);
            let t = (delta.x + delta.y * r).rem_euclid(modulus);
            legendre(t / pi.pow(v), p)
        }
    }
}

fn content_valuation(a: FieldElement, p: u64) -> u32 {
    match (a.x, a.y) {
        (0, y) => valuation(y, p),
        (x, 0) => valuation(x, p),
        (x, y) => valuation(x, p).min(valuation(y, p)),
    }
}

/// Lifts a simple root of `X² − c1·X − c0` modulo `p` to one modulo `modulus`.
fn hensel_root(k: &QuadraticField, r: i128, p: i128, modulus: i128) -> i128 {
    let (c1, c0) = k.omega_square();
    let mut r = r;
    let mut m = p;
    while m < modulus {
        m = (m * m).min(modulus);
        let f = (r * r - c1 * r - c0).rem_euclid(m);
        let df = (2 * r - c1).rem_euclid(m);
        r = (r - f * inverse_mod(df, m)).rem_euclid(m);
    }
    r
}

fn inverse_mod(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1, mut s0, mut s1) = (a, m, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not invertible");
    s0.rem_euclid(m)
}

impl PartialEq for QuadraticCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.data == other.data
    }
}

impl Eq for QuadraticCharacter {}

impl PartialOrd for QuadraticCharacter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Over `Q`: by `|d|`, then positive first. Over `K`: by class, `𝔞`, unit.
impl Ord for QuadraticCharacter {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |c: &QuadraticCharacter| match c.data {
            Data::Rational(d) => (d.unsigned_abs(), d.get() < 0),
            Data::Quadratic { .. } => (0, false),
        };
        self.base
            .m()
            .cmp(&other.base.m())
            .then_with(|| key(self).cmp(&key(other)))
            .then_with(|| self.data.cmp(&other.data))
    }
}

impl core::hash::Hash for QuadraticCharacter {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.base.m().hash(state);
        self.data.hash(state);
    }
}

impl fmt::Display for QuadraticCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.data {
            Data::Rational(d) => write!(f, "{d}"),
            Data::Quadratic { class, conductor, unit } => write!(f, "(b={class}; a={conductor}; e={unit})"),
        }
    }
}

/// `χ_d`, the character cutting out `K(√d)`.
pub fn char_from_element(field: &BaseField, d: FieldElement) -> Result<QuadraticCharacter> {
    if d.is_zero() {
        return Err(Error::Zero);
    }
    let k = match field {
        BaseField::Rational => {
            if d.y != 0 {
                return Err(Error::OutOfRange(format!("{d} is not rational")));
            }
            let d = i64::try_from(d.x).map_err(|_| Error::OutOfRange(format!("{} exceeds i64", d.x)))?;
            return QuadraticCharacter::rational(d);
        }
        BaseField::Quadratic(k) => k,
    };
    // (d) = 𝔞𝔠² with 𝔞 squarefree; 𝔟 is the minimal representative of [𝔠].
    let ideal = IdealK::principal(k, d)?;
    let pick = |f: fn(u32) -> u32| -> IdealK {
        let mut primes = Vec::new();
        for &(q, e) in ideal.factors() {
            for _ in 0..f(e) {
                primes.push(q);
            }
        }
        IdealK::from_primes(&primes)
    };
    let a = pick(|e| e % 2);
    let c = pick(|e| e / 2);
    let data = k.class_data();
    let class = data.class_of(k, &c);
    let b = &data.representatives()[class];
    let inconsistent = |what: &str| Error::Inconsistent(format!("{what} for d = {d} in Q(sqrt({}))", k.m()));
    let alpha = a.mul(&b.pow(2)).generator(k).ok_or_else(|| inconsistent("𝔞𝔟² not principal"))?;
    // dα generates (𝔞𝔟𝔠)², and 𝔞𝔟𝔠 is principal; the unit left over is ε.
    let beta = a.mul(b).mul(&c).generator(k).ok_or_else(|| inconsistent("𝔞𝔟𝔠 not principal"))?;
    let eta = k.div_exact(k.mul(d, alpha), k.mul(beta, beta)).ok_or_else(|| inconsistent("dα/β² not integral"))?;
    let unit = unit_class(k, eta)?;
    Ok(QuadraticCharacter::from_triple(k, class, a, unit))
}

/// Index in `units_mod_squares` of the class of the unit `eta`.
fn unit_class(k: &QuadraticField, eta: FieldElement) -> Result<u8> {
    if k.norm(eta).abs() != 1 {
        return Err(Error::Inconsistent(format!("{eta} is not a unit")));
    }
    if !k.is_real() {
        // Roots of unity come as successive powers of a generator.
        let pos = k.roots_of_unity().iter().position(|&z| z == eta).expect("unit of an imaginary field");
        return Ok((pos % 2) as u8);
    }
    let e1 = k.embeddings(eta).0;
    let j = libm::round(libm::log(libm::fabs(e1)) / k.regulator()) as i64;
    Ok((e1 < 0.0) as u8 + 2 * (j.rem_euclid(2) as u8))
}

/// `C(K, X)`: over `Q` one character per squarefree `0 < |d| < X`; over `K`
/// one per triple `(𝔟, 𝔞, ε)` with `N𝔞·N𝔟² < X`.
pub fn enumerate_characters(field: &BaseField, x: u64) -> Result<Vec<QuadraticCharacter>> {
    if x < 2 {
        return Err(Error::BoundTooSmall { bound: x, min: 2 });
    }
    let k = match field {
        BaseField::Rational => {
            return Ok(sieve_squarefree(x)?
                .into_iter()
                .map(|d| QuadraticCharacter { base: BaseField::Rational, data: Data::Rational(d) })
                .collect());
        }
        BaseField::Quadratic(k) => k,
    };
    let data = k.class_data();
    let units = k.units_mod_squares().len() as u8;
    let census = quadfield::SquarefreeCensus::new(k, x);
    let mut ideals = census.ideals(x);
    ideals.sort();
    let mut out = Vec::new();
    for (class, b) in data.representatives().iter().enumerate() {
        let nb2 = b.norm() * b.norm();
        let want = data.inverse(data.pow(class, 2));
        for (a, _) in ideals.iter().filter(|(a, c)| *c == want && a.norm() * nb2 < x as u128) {
            for unit in 0..units {
                out.push(QuadraticCharacter::from_triple(k, class, a.clone(), unit));
            }
        }
    }
    Ok(out)
}

/// Primes ramified in the twist that the descent consumes: odd primes
/// dividing `d` over `Q`, every prime dividing `D_χ` over `K`.
pub fn ramified_primes(chi: &QuadraticCharacter) -> Vec<Prime> {
    let mut out = chi.conductor_primes();
    if chi.base == BaseField::Rational {
        out.retain(|p| p.p() != 2);
    }
    out
}

/// `f(χ) = Σ_{π | D_χ} f(π)`.
pub fn eval_additive(f: &AdditiveFunctionSpec, chi: &QuadraticCharacter) -> f64 {
    chi.conductor_primes().iter().map(|p| f.at(p)).sum()
}
