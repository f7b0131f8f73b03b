//! Integer helpers shared by both scalar backends.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

/// `p^n` as a big unsigned integer.
pub(crate) fn p_pow(p: u32, n: u32) -> BigUint {
    BigUint::from(p).pow(n)
}

/// Largest `(p^k, k)` with `p^k < 2^32`; used to strip factors of `p` in chunks.
fn chunk(p: u32) -> (u32, u32) {
    let mut q = p as u64;
    let mut k = 1;
    while q * (p as u64) <= u32::MAX as u64 {
        q *= p as u64;
        k += 1;
    }
    (q as u32, k)
}

/// Splits a nonzero `n` as `p^v * m` with `p ∤ m`. Returns `(v, m)`.
pub(crate) fn split_p_uint(n: &BigUint, p: u32) -> (u64, BigUint) {
    debug_assert!(!n.is_zero());
    if p == 2 {
        let tz = n.trailing_zeros().unwrap_or(0);
        return (tz, n >> tz);
    }
    let mut v = 0u64;
    let mut m = n.clone();
    let (q, k) = chunk(p);
    let big_q = BigUint::from(q);
    loop {
        let (d, r) = m.div_rem(&big_q);
        if !r.is_zero() {
            break;
        }
        m = d;
        v += k as u64;
    }
    let big_p = BigUint::from(p);
    loop {
        let (d, r) = m.div_rem(&big_p);
        if !r.is_zero() {
            break;
        }
        m = d;
        v += 1;
    }
    (v, m)
}

/// Signed variant of [`split_p_uint`]; the sign stays on the cofactor.
pub(crate) fn split_p(n: &BigInt, p: u32) -> (u64, BigInt) {
    let (v, m) = split_p_uint(n.magnitude(), p);
    let sign = if n.sign() == Sign::Minus { Sign::Minus } else { Sign::Plus };
    (v, BigInt::from_biguint(sign, m))
}

/// p-adic valuation of a nonzero integer.
pub(crate) fn valuation_int(n: &BigInt, p: u32) -> u64 {
    split_p_uint(n.magnitude(), p).0
}

/// Reduces a signed integer into `[0, modulus)`.
pub(crate) fn reduce(n: &BigInt, modulus: &BigUint) -> BigUint {
    let m = BigInt::from(modulus.clone());
    n.mod_floor(&m).magnitude().clone()
}

/// Inverse of a p-adic unit modulo `p^prec`.
///
/// Starts from the inverse mod p (Fermat) and doubles the number of correct
/// digits with each Newton step `x <- x (2 - u x)`.
pub(crate) fn unit_inverse(u: &BigUint, p: u32, prec: u32) -> BigUint {
    let small_p = BigUint::from(p);
    let u0 = u % &small_p;
    debug_assert!(!u0.is_zero(), "not a unit");
    let mut x = u0.modpow(&BigUint::from(p - 2), &small_p);
    if p == 2 {
        x = BigUint::one();
    }
    let mut known = 1u32;
    let two = BigInt::from(2);
    while known < prec {
        known = (known * 2).min(prec);
        let modulus = p_pow(p, known);
        let ux = BigInt::from(u * &x % &modulus);
        let step = (&two - ux).mod_floor(&BigInt::from(modulus.clone()));
        x = (&x * step.magnitude()) % &modulus;
    }
    x % p_pow(p, prec)
}

/// Base-p digits of `n`, least significant first, padded to `len`.
pub(crate) fn digits(n: &BigUint, p: u32, len: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(len as usize);
    let mut m = n.clone();
    let big_p = BigUint::from(p);
    for _ in 0..len {
        let (d, r) = m.div_rem(&big_p);
        out.push(r.iter_u32_digits().next().unwrap_or(0));
        m = d;
    }
    out
}
