//! Capped relative-precision p-adic numbers.
//!
//! A nonzero value is `p^val * unit + O(p^(val + prec))` with `unit` a p-adic
//! unit known modulo `p^prec`. Cancellation in a sum shrinks `prec` by the
//! valuation jump; a sum that cancels completely becomes zero-to-precision,
//! which is a different state from the exact zero.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::int::{p_pow, reduce, split_p, split_p_uint, unit_inverse};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum CappedState {
    Zero,
    ZeroTo { abs: i64 },
    Unit { val: i64, unit: BigUint, prec: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Capped {
    pub cap: u32,
    pub state: CappedState,
}

impl Capped {
    pub fn zero(cap: u32) -> Self {
        Capped { cap, state: CappedState::Zero }
    }

    pub fn from_rational(q: &BigRational, p: u32, cap: u32) -> Self {
        if q.is_zero() {
            return Self::zero(cap);
        }
        let (vn, n) = split_p(q.numer(), p);
        let (vd, d) = split_p(q.denom(), p);
        let modulus = p_pow(p, cap);
        let n = reduce(&n, &modulus);
        let d = reduce(&d, &modulus);
        let unit = n * unit_inverse(&d, p, cap) % &modulus;
        Capped {
            cap,
            state: CappedState::Unit { val: vn as i64 - vd as i64, unit, prec: cap },
        }
    }

    /// The rational `p^val * unit` (zero for both zero states).
    pub fn representative(&self, p: u32) -> BigRational {
        match &self.state {
            CappedState::Unit { val, unit, .. } => {
                let u = BigInt::from(unit.clone());
                let pv = BigInt::from(p_pow(p, val.unsigned_abs() as u32));
                if *val >= 0 {
                    BigRational::from_integer(u * pv)
                } else {
                    BigRational::new(u, pv)
                }
            }
            _ => BigRational::zero(),
        }
    }

    pub fn valuation(&self) -> Option<i64> {
        match &self.state {
            CappedState::Unit { val, .. } => Some(*val),
            _ => None,
        }
    }

    /// Absolute precision: the value is known modulo `p^abs`. `None` for exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.state {
            CappedState::Zero => None,
            CappedState::ZeroTo { abs } => Some(*abs),
            CappedState::Unit { val, prec, .. } => Some(val + *prec as i64),
        }
    }

    pub fn add(&self, other: &Self, p: u32) -> Self {
        let cap = self.cap.min(other.cap);
        use CappedState::*;
        let state = match (&self.state, &other.state) {
            (Zero, _) => other.state.clone(),
            (_, Zero) => self.state.clone(),
            (ZeroTo { abs: a }, ZeroTo { abs: b }) => ZeroTo { abs: (*a).min(*b) },
            (ZeroTo { abs }, Unit { val, unit, prec }) | (Unit { val, unit, prec }, ZeroTo { abs }) => {
                truncate(*val, unit, *prec, *abs, p)
            }
            (
                Unit { val: v1, unit: u1, prec: r1 },
                Unit { val: v2, unit: u2, prec: r2 },
            ) => {
                let vmin = (*v1).min(*v2);
                let abs = (v1 + *r1 as i64).min(v2 + *r2 as i64);
                let width = (abs - vmin) as u32;
                let modulus = p_pow(p, width);
                let shifted = |v: i64, u: &BigUint| -> BigUint {
                    let s = (v - vmin) as u32;
                    if s >= width {
                        BigUint::zero()
                    } else {
                        u * p_pow(p, s)
                    }
                };
                let s = (shifted(*v1, u1) + shifted(*v2, u2)) % &modulus;
                if s.is_zero() {
                    ZeroTo { abs }
                } else {
                    let (t, unit) = split_p_uint(&s, p);
                    Unit { val: vmin + t as i64, unit, prec: width - t as u32 }
                }
            }
        };
        Capped { cap, state }
    }

    pub fn neg(&self, p: u32) -> Self {
        let state = match &self.state {
            CappedState::Unit { val, unit, prec } => {
                let modulus = p_pow(p, *prec);
                CappedState::Unit { val: *val, unit: (&modulus - unit) % &modulus, prec: *prec }
            }
            s => s.clone(),
        };
        Capped { cap: self.cap, state }
    }

    pub fn mul(&self, other: &Self, p: u32) -> Self {
        let cap = self.cap.min(other.cap);
        use CappedState::*;
        let state = match (&self.state, &other.state) {
            (Zero, _) | (_, Zero) => Zero,
            (ZeroTo { abs: a }, ZeroTo { abs: b }) => ZeroTo { abs: a + b },
            (ZeroTo { abs }, Unit { val, .. }) | (Unit { val, .. }, ZeroTo { abs }) => {
                ZeroTo { abs: abs + val }
            }
            (
                Unit { val: v1, unit: u1, prec: r1 },
                Unit { val: v2, unit: u2, prec: r2 },
            ) => {
                let prec = (*r1).min(*r2);
                Unit { val: v1 + v2, unit: u1 * u2 % p_pow(p, prec), prec }
            }
        };
        Capped { cap, state }
    }

    /// Forgets everything below `p^abs`.
    pub fn limit(&self, abs: i64, p: u32) -> Self {
        let state = match &self.state {
            CappedState::Zero => CappedState::ZeroTo { abs },
            CappedState::ZeroTo { abs: a } => CappedState::ZeroTo { abs: (*a).min(abs) },
            CappedState::Unit { val, unit, prec } => truncate(*val, unit, *prec, abs, p),
        };
        Capped { cap: self.cap, state }
    }

    /// `None` when the value is zero (exactly or to precision).
    pub fn inv(&self, p: u32) -> Option<Self> {
        match &self.state {
            CappedState::Unit { val, unit, prec } => Some(Capped {
                cap: self.cap,
                state: CappedState::Unit { val: -val, unit: unit_inverse(unit, p, *prec), prec: *prec },
            }),
            _ => None,
        }
    }
}

/// Restricts a unit value to absolute precision `abs`.
fn truncate(val: i64, unit: &BigUint, prec: u32, abs: i64, p: u32) -> CappedState {
    if val >= abs {
        return CappedState::ZeroTo { abs };
    }
    let new_prec = ((abs - val) as u32).min(prec);
    CappedState::Unit { val, unit: unit % p_pow(p, new_prec), prec: new_prec }
}
