use crate::error::{Error, Result};

/// Kronecker symbol `(a / n)`, extending the Jacobi symbol to even and negative `n`.
pub fn kronecker(a: i64, n: i64) -> Result<i8> {
    if n == 0 {
        return Err(Error::Zero);
    }
    Ok(kronecker_i128(a as i128, n as i128))
}

pub(crate) fn kronecker_i128(mut a: i128, mut n: i128) -> i8 {
    debug_assert!(n != 0);
    let mut t = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            t = -t;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        n >>= v;
    }
    // Jacobi symbol, n odd and positive.
    a = a.rem_euclid(n);
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 {
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        core::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol of `a` modulo the odd prime `p`.
pub(crate) fn legendre(a: i128, p: u64) -> i8 {
    kronecker_i128(a, p as i128)
}
