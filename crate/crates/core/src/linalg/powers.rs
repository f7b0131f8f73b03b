//! Norm exponents of long power sequences `A^0, A^1, ..., A^K`.
//!
//! Write `A = M / (p^a * D)` with `M` integral and `p ∤ D`. Then
//! `v_p((A^k)_ij) = v_p((M^k)_ij) - a k`, and the unit `D^k` never needs to be
//! formed. The running product is kept as `p^c * N` with the p-part of `N`
//! stripped at each step, so only plain big-integer products remain.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::PadicMatrix;
use crate::scalar::int::split_p;
use crate::scalar::Exponent;

/// `[normExponent(A^k) for k in 0..=k_max]` on exact values (capped inputs
/// are lifted first).
pub fn power_norm_exponents(a: &PadicMatrix, k_max: usize) -> Vec<Exponent> {
    let p = a.prime().get();
    let d = a.dim();
    let rows = a.lift().to_rationals();
    let lcm = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let (den_val, _) = split_p(&lcm, p);
    let m: Vec<BigInt> = rows
        .iter()
        .flatten()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect();

    let mut out = Vec::with_capacity(k_max + 1);
    out.push(Some(0));
    // running product M^k = p^shift * n
    let mut n: Vec<BigInt> = (0..d * d).map(|k| BigInt::from(u8::from(k / d == k % d))).collect();
    let mut shift: i64 = 0;
    let mut dead = false;
    for k in 1..=k_max {
        if dead {
            out.push(None);
            continue;
        }
        let mut next = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for t in 0..d {
                let x = &n[i * d + t];
                if x.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let y = &m[t * d + j];
                    if !y.is_zero() {
                        next[i * d + j] += x * y;
                    }
                }
            }
        }
        let min_val = next
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| split_p(x, p).0)
            .min();
        match min_val {
            None => {
                dead = true;
                out.push(None);
            }
            Some(v) => {
                if v > 0 {
                    let pv = BigInt::from(p).pow(v as u32);
                    for x in next.iter_mut() {
                        *x = &*x / &pv;
                    }
                }
                shift += v as i64;
                n = next;
                // |A^k| = p^(a k - shift)
                out.push(Some(den_val as i64 * k as i64 - shift));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Backend, PadicScalar, Prime};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn matches_worked_examples() {
        let p2 = Prime::new(2).unwrap();
        let half = PadicMatrix::diagonal(&[PadicScalar::from_rational(1, 2, p2, Backend::Exact).unwrap()]).unwrap();
        let seq = power_norm_exponents(&half, 10);
        assert_eq!(seq, (0..=10).map(Some).collect::<Vec<_>>());

        let nil = PadicMatrix::from_ints(&[&[0, 1], &[0, 0]], p2, Backend::Exact).unwrap();
        assert_eq!(power_norm_exponents(&nil, 4), vec![Some(0), Some(0), None, None, None]);

        let p5 = Prime::new(5).unwrap();
        let j = PadicMatrix::from_ints(&[&[1, 1], &[0, 1]], p5, Backend::Exact).unwrap();
        assert!(power_norm_exponents(&j, 30).iter().all(|e| *e == Some(0)));
    }

    proptest! {
        #[test]
        fn agrees_with_direct_powers(
            entries in proptest::collection::vec((-6i64..=6, 1i64..=12), 9),
            pi in 0usize..3,
        ) {
            let prime = Prime::new([2, 3, 5][pi]).unwrap();
            let rows: Vec<Vec<BigRational>> = entries.chunks(3).map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect();
            let a = PadicMatrix::from_rationals(&rows, prime, Backend::Exact).unwrap();
            let fast = power_norm_exponents(&a, 12);
            let mut acc = PadicMatrix::identity(3, prime, Backend::Exact);
            for (k, e) in fast.iter().enumerate() {
                prop_assert_eq!(*e, acc.norm_exponent(), "k = {}", k);
                acc = acc.matmul(&a);
            }
        }
    }
}
