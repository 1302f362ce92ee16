//! Small dense polynomials over `F_p`, enough to find the roots of a quartic.

use alloc::vec;
use alloc::vec::Vec;

use super::primes::{mul_mod, pow_mod, sqrt_mod};

type Poly = Vec<u64>;

fn trim(mut f: Poly) -> Poly {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
    if f.is_empty() {
        f.push(0);
    }
    f
}

fn deg(f: &Poly) -> usize {
    f.len() - 1
}

fn is_zero(f: &Poly) -> bool {
    f.len() == 1 && f[0] == 0
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn monic(f: Poly, p: u64) -> Poly {
    let lc = *f.last().unwrap();
    let i = inv(lc, p);
    f.into_iter().map(|c| mul_mod(c, i, p)).collect()
}

fn sub(f: &Poly, g: &Poly, p: u64) -> Poly {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            (a + p - b) % p
        })
        .collect();
    trim(out)
}

/// Remainder and quotient of `f` by `g` (g nonzero).
fn divrem(f: &Poly, g: &Poly, p: u64) -> (Poly, Poly) {
    let mut r = f.clone();
    if deg(f) < deg(g) {
        return (vec![0], trim(r));
    }
    let dg = deg(g);
    let ilc = inv(g[dg], p);
    let mut q = vec![0u64; deg(f) - dg + 1];
    for i in (dg..r.len()).rev() {
        let c = mul_mod(r[i], ilc, p);
        if c == 0 {
            continue;
        }
        q[i - dg] = c;
        for j in 0..=dg {
            let t = mul_mod(c, g[j], p);
            r[i - dg + j] = (r[i - dg + j] + p - t) % p;
        }
    }
    r.truncate(dg.max(1));
    (trim(q), trim(r))
}

fn mulmod_poly(f: &Poly, g: &Poly, m: &Poly, p: u64) -> Poly {
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
        }
    }
    divrem(&trim(out), m, p).1
}

fn powmod_poly(base: &Poly, mut e: u64, m: &Poly, p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_poly(&acc, &b, m, p);
        }
        b = mulmod_poly(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn gcd(mut a: Poly, mut b: Poly, p: u64) -> Poly {
    while !is_zero(&b) {
        let r = divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if is_zero(&a) {
        a
    } else {
        monic(a, p)
    }
}

pub(crate) fn eval(f: &[u64], t: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, t, p) + c) % p)
}

/// Distinct roots in `F_p` of a nonzero polynomial, ascending. `p` odd.
pub(crate) fn roots(f: &[u64], p: u64) -> Vec<u64> {
    let f = trim(f.to_vec());
    if deg(&f) == 0 {
        return Vec::new();
    }
    if p < 4096 {
        return (0..p).filter(|&t| eval(&f, t, p) == 0).collect();
    }
    let f = monic(f, p);
    let xp = powmod_poly(&vec![0, 1], p, &f, p);
    let split = gcd(f, sub(&xp, &vec![0, 1], p), p);
    let mut out = Vec::new();
    split_roots(split, p, &mut out);
    out.sort_unstable();
    out
}

/// Splits a monic product of distinct linear factors.
fn split_roots(g: Poly, p: u64, out: &mut Vec<u64>) {
    match deg(&g) {
        0 => {}
        1 => out.push((p - g[0]) % p),
        2 => {
            let (c0, c1) = (g[0], g[1]);
            let disc = (mul_mod(c1, c1, p) + p - mul_mod(4, c0, p)) % p;
            let s = sqrt_mod(disc, p).expect("split quadratic has a square discriminant");
            let half = inv(2, p);
            let neg_c1 = (p - c1) % p;
            out.push(mul_mod((neg_c1 + s) % p, half, p));
            if s != 0 {
                out.push(mul_mod((neg_c1 + p - s) % p, half, p));
            }
        }
        _ => {
            for a in 0..p {
                let h = sub(&powmod_poly(&vec![a, 1], (p - 1) / 2, &g, p), &vec![1], p);
                let d = gcd(g.clone(), h, p);
                if deg(&d) > 0 && deg(&d) < deg(&g) {
                    let (q, _) = divrem(&g, &d, p);
                    split_roots(d, p, out);
                    split_roots(monic(q, p), p, out);
                    return;
                }
            }
            unreachable!("equal-degree splitting failed over F_{p}");
        }
    }
}

/// `f = c * s^2` for a constant `c` and a polynomial `s`? Returns `c` if so.
pub(crate) fn square_times_constant(f: &[u64], p: u64) -> Option<u64> {
    let f = trim(f.to_vec());
    let d = deg(&f);
    let lc = f[d];
    if d == 0 {
        return Some(lc);
    }
    if d % 2 == 1 {
        return None;
    }
    let m = monic(f, p);
    let half = inv(2, p);
    let ok = match d {
        2 => {
            let a = mul_mod(m[1], half, p);
            m[0] == mul_mod(a, a, p)
        }
        4 => {
            let a = mul_mod(m[3], half, p);
            let b = mul_mod((m[2] + p - mul_mod(a, a, p)) % p, half, p);
            m[1] == mul_mod(2, mul_mod(a, b, p), p) && m[0] == mul_mod(b, b, p)
        }
        _ => unreachable!("degree at most four"),
    };
    ok.then_some(lc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(f: &[u64], p: u64) -> Vec<u64> {
        (0..p).filter(|&t| eval(f, t, p) == 0).collect()
    }

    #[test]
    fn large_prime_roots_match_enumeration() {
        let p = 10_007u64;
        let cases: [&[u64]; 6] = [
            &[6, p - 5, 1],
            &[p - 1, 0, 0, 0, 1],
            &[1, 0, 1],
            &[24, p - 50, 35, p - 10, 1],
            &[0, 0, 3],
            &[5, 0, 7, 0, 11],
        ];
        for f in cases {
            assert_eq!(roots(f, p), brute(f, p), "f = {f:?}");
        }
    }

    #[test]
    fn repeated_roots_reported_once() {
        let p = 65_537u64;
        // (x - 3)^2 (x - 7)
        let f = [p - 63, 51, p - 13, 1];
        assert_eq!(roots(&f, p), [3, 7]);
    }

    #[test]
    fn detects_constant_times_square() {
        let p = 13u64;
        // 5 (x^2 + 3x + 1)^2 = 5x^4 + 30x^3 + 55x^2 + 30x + 5
        let f = [5, 30 % p, 55 % p, 30 % p, 5];
        assert_eq!(square_times_constant(&f, p), Some(5));
        assert_eq!(square_times_constant(&[1, 0, 1], p), None);
        assert_eq!(square_times_constant(&[4], p), Some(4));
        assert_eq!(square_times_constant(&[1, 1], p), None);
    }
}
