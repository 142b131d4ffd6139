//! Small integer helpers: primes, roots, logarithms and arithmetic over GF(q).

use smallvec::SmallVec;

pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x < 4 {
        return true;
    }
    if x.is_multiple_of(2) || x.is_multiple_of(3) {
        return false;
    }
    let mut i = 5u64;
    while i.saturating_mul(i) <= x {
        if x.is_multiple_of(i) || x.is_multiple_of(i + 2) {
            return false;
        }
        i += 6;
    }
    true
}

/// Smallest prime `>= x`.
pub fn next_prime(x: u64) -> u64 {
    let mut q = x.max(2);
    while !is_prime(q) {
        q += 1;
    }
    q
}

/// True when `q^e >= m`, without overflow.
pub fn pow_at_least(q: u64, e: u32, m: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc *= q as u128;
        if acc >= m as u128 {
            return true;
        }
    }
    acc >= m as u128
}

/// Smallest `q >= 1` with `q^e >= m`.
pub fn iroot_ceil(m: u64, e: u32) -> u64 {
    if m <= 1 || e == 0 {
        return 1;
    }
    let guess = (m as f64).powf(1.0 / e as f64).floor().max(1.0) as u64;
    let mut q = guess.saturating_sub(2).max(1);
    while !pow_at_least(q, e, m) {
        q += 1;
    }
    q
}

/// `ceil(log2(x))` for `x >= 1`; 0 for `x <= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Iterated base-2 logarithm: the number of applications needed to reach a value `<= 2`.
pub fn log_star(x: f64) -> u32 {
    let mut v = x;
    let mut i = 0;
    while v > 2.0 {
        v = v.log2();
        i += 1;
    }
    i
}

/// `ceil(x)` that ignores floating-point noise just above an integer.
pub fn ceil_tol(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r.max(0.0) as u64
    } else {
        x.ceil().max(0.0) as u64
    }
}

pub fn mod_pow(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1u64 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, q);
        }
        b = mul_mod(b, b, q);
        e >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// Inverse modulo a prime `q`; `a` must be non-zero mod `q`.
pub fn mod_inv(a: u64, q: u64) -> u64 {
    mod_pow(a, q - 2, q)
}

/// A square root of `a` modulo an odd prime `q`, if one exists (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, q: u64) -> Option<u64> {
    let a = a % q;
    if a == 0 {
        return Some(0);
    }
    if mod_pow(a, (q - 1) / 2, q) != 1 {
        return None;
    }
    if q % 4 == 3 {
        return Some(mod_pow(a, (q + 1) / 4, q));
    }
    let mut s = 0;
    let mut d = q - 1;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (q - 1) / 2, q) != q - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, d, q);
    let mut t = mod_pow(a, d, q);
    let mut r = mod_pow(a, d.div_ceil(2), q);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, q);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), q);
        m = i;
        c = mul_mod(b, b, q);
        t = mul_mod(t, c, q);
        r = mul_mod(r, b, q);
    }
    Some(r)
}

/// Roots in GF(q) of `c0 + c1 x + c2 x^2` (coefficients already reduced mod `q`).
/// Returns `None` for the zero polynomial.
pub fn roots_deg2(c0: u64, c1: u64, c2: u64, q: u64) -> Option<SmallVec<[u64; 2]>> {
    let mut out = SmallVec::new();
    if c0 == 0 && c1 == 0 && c2 == 0 {
        return None;
    }
    if q == 2 {
        for x in 0..2 {
            if (c0 + c1 * x + c2 * x).is_multiple_of(2) {
                out.push(x);
            }
        }
        return Some(out);
    }
    if c2 == 0 {
        if c1 != 0 {
            out.push(mul_mod(q - c0 % q, mod_inv(c1, q), q) % q);
        }
        return Some(out);
    }
    // x = (-c1 +- sqrt(c1^2 - 4 c2 c0)) / (2 c2)
    let disc = (mul_mod(c1, c1, q) + q - mul_mod(4 % q, mul_mod(c2, c0, q), q)) % q;
    if let Some(s) = sqrt_mod(disc, q) {
        let inv = mod_inv(mul_mod(2, c2, q), q);
        let r1 = mul_mod((q - c1 + s) % q, inv, q);
        let r2 = mul_mod((2 * q - c1 - s) % q, inv, q);
        out.push(r1);
        if r2 != r1 {
            out.push(r2);
        }
    }
    Some(out)
}

/// Base-`q` digits of `value`, lowest first, exactly `len` of them.
pub fn digits(mut value: u64, q: u64, len: usize) -> SmallVec<[u64; 8]> {
    let mut out = SmallVec::with_capacity(len);
    for _ in 0..len {
        out.push(value % q);
        value /= q;
    }
    out
}

/// Evaluates the polynomial with coefficients `coef` (lowest first) at `x` over GF(q).
#[inline]
pub fn eval_poly(coef: &[u64], x: u64, q: u64) -> u64 {
    let mut acc = 0u64;
    for &a in coef.iter().rev() {
        acc = (mul_mod(acc, x, q) + a) % q;
    }
    acc
}
