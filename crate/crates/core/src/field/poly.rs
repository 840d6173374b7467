//! Dense univariate polynomial helpers over 𝔽_p and ℚ.
//!
//! Coefficients are stored constant term first. All functions return trimmed
//! vectors (no trailing zeros); the zero polynomial is the empty vector.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::Rational;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    // extended Euclid on signed values; p < 2^63 by construction
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

// ---------------------------------------------------------------------------
// 𝔽_p[x]
// ---------------------------------------------------------------------------

pub(crate) fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(out)
}

pub(crate) fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    fp_trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p).expect("leading coefficient is a unit");
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, p);
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, mi, p)) % p;
        }
        r = fp_trim(r);
    }
    r
}

pub(crate) fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = fp_trim(a.to_vec());
    let mut y = fp_trim(b.to_vec());
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn fp_pow_mod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_rem(&fp_mul(&acc, &b, p), m, p);
        }
        b = fp_rem(&fp_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test for a monic `f` of degree ≥ 1 over 𝔽_p.
pub(crate) fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let f = fp_trim(f.to_vec());
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=deg / 2 {
        h = fp_pow_mod_poly(&h, p, &f, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// ℚ[x]
// ---------------------------------------------------------------------------

pub(crate) fn q_trim(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub(crate) fn q_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let zero = Rational::zero();
    let out = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect();
    q_trim(out)
}

pub(crate) fn q_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    q_trim(out)
}

/// Quotient and remainder of `a` by a nonzero `m`.
pub(crate) fn q_divrem(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = q_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead = &m[dm];
    let mut quot = vec![Rational::zero(); r.len().saturating_sub(dm)];
    while r.len() > dm {
        let top = r.len() - 1;
        let c = &r[top] / lead;
        let shift = top - dm;
        for (i, mi) in m.iter().enumerate() {
            r[shift + i] -= &c * mi;
        }
        quot[shift] = c;
        r = q_trim(r);
    }
    (q_trim(quot), r)
}

pub(crate) fn q_rem(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    q_divrem(a, m).1
}

pub(crate) fn q_derivative(a: &[Rational]) -> Vec<Rational> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer((i as u64).into()))
        .collect();
    q_trim(out)
}

pub(crate) fn q_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = q_trim(a.to_vec());
    let mut y = q_trim(b.to_vec());
    while !y.is_empty() {
        let r = q_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm, or `None`
/// when `gcd(a, m)` is not a unit.
pub(crate) fn q_inverse_mod(a: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
    let (mut r0, mut r1) = (q_trim(m.to_vec()), q_rem(a, m));
    let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = q_divrem(&r0, &r1);
        let s = q_sub(&s0, &q_mul(&q, &s1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    Some(q_rem(&s0.iter().map(|x| x * &c).collect::<Vec<_>>(), m))
}
