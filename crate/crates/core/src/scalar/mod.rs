//! Scalars in `Q_p` under two backends.
//!
//! [`Backend::Exact`] stores a reduced rational and is the ground truth.
//! [`Backend::Capped`] stores `p^v * u + O(p^(v + prec))` with at most `digits`
//! base-p digits of the unit `u`, tracking precision loss through every
//! operation. Absolute values are reported as integer exponents: `|x| = p^e`.

mod binom;
mod capped;
pub(crate) mod int;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use binom::{binom_valuation, binomial, factorial_valuation, falling_factorial};
use capped::{Capped, CappedState};

use crate::error::{PadicError, Result};

/// An absolute-value exponent `e` meaning `p^e`; `None` stands for `-inf`
/// (the absolute value of zero). `Option`'s ordering puts `None` first, so
/// `max` over exponents behaves like `max` over absolute values.
pub type Exponent = Option<i64>;

/// Adds exponents, i.e. multiplies absolute values.
pub fn exp_add(a: Exponent, b: Exponent) -> Exponent {
    Some(a? + b?)
}

/// Renders an exponent for reports: integer or `"-inf"`.
pub fn exp_display(e: Exponent) -> String {
    match e {
        Some(v) => v.to_string(),
        None => "-inf".to_string(),
    }
}

/// A rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if is_prime {
            Ok(Prime(p))
        } else {
            Err(PadicError::InvalidInput(format!("{p} is not a prime")))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Capped { digits: u32 },
}

pub const DEFAULT_DIGITS: u32 = 64;
pub const DEFAULT_SLACK: u32 = 10;

/// Working precision and the tolerance derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionBudget {
    digits: u32,
    slack: u32,
}

impl PrecisionBudget {
    pub fn new(digits: u32, slack: u32) -> Result<Self> {
        if digits == 0 || slack >= digits {
            return Err(PadicError::InvalidInput(format!(
                "precision budget needs digits > slack >= 0 (got digits={digits}, slack={slack})"
            )));
        }
        Ok(PrecisionBudget { digits, slack })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn slack(&self) -> u32 {
        self.slack
    }

    /// Residuals with exponent at most this pass.
    pub fn tolerance_exponent(&self) -> i64 {
        -(self.digits as i64 - self.slack as i64)
    }

    pub fn capped(&self) -> Backend {
        Backend::Capped { digits: self.digits }
    }

    pub fn passes(&self, residual: Exponent) -> bool {
        residual <= Some(self.tolerance_exponent())
    }
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        PrecisionBudget { digits: DEFAULT_DIGITS, slack: DEFAULT_SLACK }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Exact(BigRational),
    Capped(Capped),
}

/// An element of `Q_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    prime: Prime,
    repr: Repr,
}

impl PadicScalar {
    pub fn from_rational(
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
        prime: Prime,
        backend: Backend,
    ) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(PadicError::InvalidInput("zero denominator".into()));
        }
        Ok(Self::from_ratio(&BigRational::new(num.into(), den), prime, backend))
    }

    pub fn from_ratio(q: &BigRational, prime: Prime, backend: Backend) -> Self {
        let repr = match backend {
            Backend::Exact => Repr::Exact(q.clone()),
            Backend::Capped { digits } => Repr::Capped(Capped::from_rational(q, prime.get(), digits)),
        };
        PadicScalar { prime, repr }
    }

    pub fn from_int(n: i64, prime: Prime, backend: Backend) -> Self {
        Self::from_ratio(&BigRational::from_integer(n.into()), prime, backend)
    }

    pub fn from_bigint(n: BigInt, prime: Prime, backend: Backend) -> Self {
        Self::from_ratio(&BigRational::from_integer(n), prime, backend)
    }

    pub fn zero(prime: Prime, backend: Backend) -> Self {
        Self::from_int(0, prime, backend)
    }

    pub fn one(prime: Prime, backend: Backend) -> Self {
        Self::from_int(1, prime, backend)
    }

    /// `p^e` for any integer `e`.
    pub fn prime_power(e: i64, prime: Prime, backend: Backend) -> Self {
        let pe = BigInt::from(prime.get()).pow(e.unsigned_abs() as u32);
        let q = if e >= 0 {
            BigRational::from_integer(pe)
        } else {
            BigRational::new(BigInt::one(), pe)
        };
        Self::from_ratio(&q, prime, backend)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn backend(&self) -> Backend {
        match &self.repr {
            Repr::Exact(_) => Backend::Exact,
            Repr::Capped(c) => Backend::Capped { digits: c.cap },
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    /// True for the exact zero and for zero-to-precision.
    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// True only for the exact zero.
    pub fn is_exact_zero(&self) -> bool {
        match &self.repr {
            Repr::Exact(q) => q.is_zero(),
            Repr::Capped(c) => c.state == CappedState::Zero,
        }
    }

    /// `v_p(x)`; `None` stands for `+inf`.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(q) => {
                if q.is_zero() {
                    None
                } else {
                    let p = self.prime.get();
                    Some(int::valuation_int(q.numer(), p) as i64 - int::valuation_int(q.denom(), p) as i64)
                }
            }
            Repr::Capped(c) => c.valuation(),
        }
    }

    /// `e` with `|x| = p^e`, i.e. `-v_p(x)`; `None` for zero.
    pub fn abs_exponent(&self) -> Exponent {
        self.valuation().map(|v| -v)
    }

    /// Certified upper bound on `|x|`: the absolute value for a known nonzero
    /// value, `p^(-abs precision)` for zero-to-precision, `-inf` for exact zero.
    pub fn bound_exponent(&self) -> Exponent {
        match &self.repr {
            Repr::Capped(Capped { state: CappedState::ZeroTo { abs }, .. }) => Some(-abs),
            _ => self.abs_exponent(),
        }
    }

    /// Digits of the unit part known for a capped nonzero value.
    pub fn relative_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Capped(Capped { state: CappedState::Unit { prec, .. }, .. }) => Some(*prec),
            _ => None,
        }
    }

    /// The value is known modulo `p^absolute_precision`; `None` means exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Capped(c) => c.absolute_precision(),
        }
    }

    /// Base-p digits of the unit part, least significant first.
    pub fn unit_digits(&self) -> Option<Vec<u32>> {
        let p = self.prime.get();
        match &self.repr {
            Repr::Capped(Capped { state: CappedState::Unit { unit, prec, .. }, .. }) => {
                Some(int::digits(unit, p, *prec))
            }
            Repr::Capped(_) => None,
            Repr::Exact(q) => {
                if q.is_zero() {
                    return None;
                }
                let c = Capped::from_rational(q, p, DEFAULT_DIGITS);
                match c.state {
                    CappedState::Unit { unit, prec, .. } => Some(int::digits(&unit, p, prec)),
                    _ => None,
                }
            }
        }
    }

    /// Exact value, or the rational representative of a capped value.
    pub fn to_rational(&self) -> BigRational {
        match &self.repr {
            Repr::Exact(q) => q.clone(),
            Repr::Capped(c) => c.representative(self.prime.get()),
        }
    }

    /// Lifts to the exact backend (capped values via their representative).
    pub fn lift(&self) -> Self {
        PadicScalar { prime: self.prime, repr: Repr::Exact(self.to_rational()) }
    }

    pub fn to_backend(&self, backend: Backend) -> Self {
        match (&self.repr, backend) {
            (Repr::Exact(_), Backend::Exact) => self.clone(),
            (Repr::Capped(c), Backend::Capped { digits }) if c.cap == digits => self.clone(),
            _ => Self::from_ratio(&self.to_rational(), self.prime, backend),
        }
    }

    /// Widens the error of a capped value to `O(p^abs)`; exact values are
    /// returned unchanged.
    pub fn with_absolute_precision(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Exact(_) => self.clone(),
            Repr::Capped(c) => PadicScalar { prime: self.prime, repr: Repr::Capped(c.limit(abs, self.prime.get())) },
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(PadicError::InvalidInput(format!(
                "prime mismatch: {} vs {}",
                self.prime, other.prime
            )));
        }
        if self.backend() != other.backend() {
            return Err(PadicError::InvalidInput(format!(
                "backend mismatch: {:?} vs {:?}",
                self.backend(),
                other.backend()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let p = self.prime.get();
        let repr = match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Repr::Exact(a + b),
            (Repr::Capped(a), Repr::Capped(b)) => Repr::Capped(a.add(b, p)),
            _ => unreachable!(),
        };
        Ok(PadicScalar { prime: self.prime, repr })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let p = self.prime.get();
        let repr = match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Repr::Exact(a * b),
            (Repr::Capped(a), Repr::Capped(b)) => Repr::Capped(a.mul(b, p)),
            _ => unreachable!(),
        };
        Ok(PadicScalar { prime: self.prime, repr })
    }

    pub fn inv(&self) -> Result<Self> {
        let repr = match &self.repr {
            Repr::Exact(q) => {
                if q.is_zero() {
                    return Err(PadicError::Singular("inverse of exact zero".into()));
                }
                Repr::Exact(q.recip())
            }
            Repr::Capped(c) => Repr::Capped(c.inv(self.prime.get()).ok_or_else(|| {
                PadicError::Singular("inverse of an element that is zero to precision".into())
            })?),
        };
        Ok(PadicScalar { prime: self.prime, repr })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    fn neg_ref(&self) -> Self {
        let repr = match &self.repr {
            Repr::Exact(q) => Repr::Exact(-q),
            Repr::Capped(c) => Repr::Capped(c.neg(self.prime.get())),
        };
        PadicScalar { prime: self.prime, repr }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.prime, self.backend());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Integer powers; negative exponents invert first.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Ok(self.inv()?.pow(n.unsigned_abs() as u32))
        }
    }

    /// Renders the exact value as `num/den` (or `num`); capped values render
    /// their representative.
    pub fn rational_string(&self) -> String {
        ratio_string(&self.to_rational())
    }
}

pub fn ratio_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| PadicError::InvalidInput(format!("bad numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| PadicError::InvalidInput(format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(PadicError::InvalidInput(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(q) => write!(f, "{}", ratio_string(q)),
            Repr::Capped(c) => match &c.state {
                CappedState::Zero => write!(f, "0"),
                CappedState::ZeroTo { abs } => write!(f, "O({}^{})", self.prime, abs),
                CappedState::Unit { val, unit, prec } => {
                    write!(f, "{}*{}^{} + O({}^{})", unit, self.prime, val, self.prime, val + *prec as i64)
                }
            },
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&PadicScalar> for &PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: &PadicScalar) -> PadicScalar {
                self.$checked(rhs).expect("incompatible p-adic operands")
            }
        }
        impl $tr<PadicScalar> for PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: PadicScalar) -> PadicScalar {
                (&self).$checked(&rhs).expect("incompatible p-adic operands")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

/// `true` when the rational is a p-adic unit.
pub fn is_unit(q: &BigRational, prime: Prime) -> bool {
    !q.is_zero()
        && int::valuation_int(q.numer(), prime.get()) == 0
        && int::valuation_int(q.denom(), prime.get()) == 0
}

#[cfg(test)]
mod tests;
