//! p-adic valuations of binomial coefficients.

use num_bigint::BigInt;
use num_traits::One;

use super::Prime;
use crate::error::{PadicError, Result};

/// `v_p(C(k, n))`, counted as the number of carries when adding `n` and
/// `k - n` in base `p` (Kummer). Always `>= 0`, so `|C(k, n)|_p <= 1`.
pub fn binom_valuation(k: u64, n: u64, p: Prime) -> Result<u32> {
    if n > k {
        return Err(PadicError::InvalidInput(format!(
            "binomial C({k}, {n}) needs n <= k"
        )));
    }
    let p = p.get() as u64;
    let (mut a, mut b) = (n, k - n);
    let mut carry = 0u64;
    let mut carries = 0u32;
    while a > 0 || b > 0 || carry > 0 {
        let digit = a % p + b % p + carry;
        carry = u64::from(digit >= p);
        carries += carry as u32;
        a /= p;
        b /= p;
    }
    Ok(carries)
}

/// Legendre's formula `v_p(n!) = sum_i floor(n / p^i)`.
pub fn factorial_valuation(n: u64, p: Prime) -> u64 {
    let p = p.get() as u64;
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Exact `C(k, n)`; zero when `n > k`.
pub fn binomial(k: u64, n: u64) -> BigInt {
    if n > k {
        return BigInt::from(0);
    }
    let n = n.min(k - n);
    let mut acc = BigInt::one();
    for i in 0..n {
        acc = acc * BigInt::from(k - i) / BigInt::from(i + 1);
    }
    acc
}

/// Falling factorial `k (k-1) ... (k-j+1)`.
pub fn falling_factorial(k: u64, j: u64) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, i| acc * BigInt::from(k - i))
}
