//! Resolvents `R(λ, A) = (I - λA)^-1`: certified Neumann partial sums, the
//! exact solve, derivatives, Taylor recentering and the convergence disk.
//!
//! Every series here has the shape `sum_t c_t X^t M` with integer `c_t`, so
//! `|c_t| <= 1` and the term norms are bounded by `‖X^t‖ ‖M‖`. Once some
//! block power satisfies `‖X^m‖ <= p^-1`, writing `t = qm + r` gives
//! `‖X^t‖ <= q τ_m + max_{r<m} τ_r`, a tail bound that decreases linearly
//! and can be inverted for the truncation point.

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::One;

use crate::error::{PadicError, Result};
use crate::linalg::{power_norm_exponents, spectral_growth, PadicMatrix};
use crate::scalar::{exp_add, falling_factorial, Exponent, PadicScalar};

/// A truncated series value with a certified bound on what was left out:
/// `‖true - value‖ <= p^tail_exponent` (`None` when the series terminated).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventValue {
    pub value: PadicMatrix,
    pub tail_exponent: Exponent,
    pub lambda: PadicScalar,
    pub truncation: u64,
}

/// The disk `D(0, p^r)`; nilpotent matrices have an infinite one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Radius {
    Finite(i64),
    Infinite,
}

impl Radius {
    /// `|λ| < p^r`.
    pub fn contains(self, lambda: &PadicScalar) -> bool {
        match (self, lambda.abs_exponent()) {
            (_, None) | (Radius::Infinite, _) => true,
            (Radius::Finite(r), Some(e)) => e < r,
        }
    }

    pub fn exponent(self) -> Option<i64> {
        match self {
            Radius::Finite(r) => Some(r),
            Radius::Infinite => None,
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainEstimate {
    pub radius: Radius,
    /// `g` with spectral radius `p^g`, from the Newton polygon.
    pub growth: Option<Ratio<i64>>,
    /// `(e_K - e_{K/2}) / (K - K/2)` for `e_k = normExponent(A^k)`, `K = kMax`;
    /// `None` once the powers vanish.
    pub observed_slope: Option<Ratio<i64>>,
}

/// Partial sum of `sum_t coeff(t) X^t M` with its certified tail.
pub(crate) struct Series {
    pub value: PadicMatrix,
    pub tail: Exponent,
    pub terms: u64,
}

pub(crate) fn iteration_cap(dim: usize, target: i64) -> u64 {
    10 * dim as u64 * target.unsigned_abs().max(64)
}

/// `‖X^t‖ <= floor(t/m) τ_m + c0` for all `t`, with `τ_m <= -1`; `τ_m = None`
/// means `X^m = 0`.
pub(crate) struct Block {
    m: u64,
    tau: Option<i64>,
    c0: i64,
}

impl Block {
    pub(crate) fn find(x: &PadicMatrix, cap: u64, diverged: &impl Fn(String) -> PadicError) -> Result<Block> {
        let mut taus: Vec<i64> = vec![0];
        let mut power = PadicMatrix::identity(x.dim(), x.prime(), x.backend());
        let (m, tau) = loop {
            power = power.matmul(x);
            let m = taus.len() as u64;
            match power.norm_bound_exponent() {
                None => break (m, None),
                Some(t) if t <= -1 => break (m, Some(t)),
                Some(t) => taus.push(t),
            }
            if m >= cap {
                return Err(diverged(format!(
                    "‖X^m‖ stays >= 1 for every m <= {cap}; the series terms do not tend to zero"
                )));
            }
        };
        let c0 = *taus.iter().max().expect("τ_0 = 0");
        Ok(Block { m, tau, c0 })
    }

    /// Bound on `sup_{t > last} ‖X^t‖`.
    pub(crate) fn tail_after(&self, last: u64) -> Exponent {
        match self.tau {
            Some(tau) => Some(((last + 1) / self.m) as i64 * tau + self.c0),
            None if last + 1 >= self.m => None,
            None => Some(self.c0),
        }
    }

    /// Smallest `K` whose tail bound is at most `target - e_m`; the last
    /// nonzero power when `X` is nilpotent.
    fn terms_for(&self, target: i64, e_m: i64) -> u64 {
        match self.tau {
            None => self.m - 1,
            Some(tau) => {
                let excess = self.c0 + e_m - target;
                let q = if excess <= 0 { 0 } else { (excess + (-tau) - 1) / (-tau) } as u64;
                (q * self.m).saturating_sub(1)
            }
        }
    }
}

/// `sum_{t<=last} coeff(t) X^t M`; also reports whether a term vanished
/// exactly (then every later term does too).
pub(crate) fn partial_sum(
    x: &PadicMatrix,
    right: &PadicMatrix,
    coeff: impl Fn(u64) -> BigInt,
    last: u64,
) -> (PadicMatrix, u64, bool) {
    let (p, backend) = (x.prime(), x.backend());
    let mut term = right.clone();
    let mut sum = PadicMatrix::zero(x.dim(), p, backend);
    let mut terms = 0;
    for t in 0..=last {
        if t > 0 {
            term = x.matmul(&term);
        }
        if term.is_exact_zero() {
            return (sum, terms, true);
        }
        let c = coeff(t);
        sum = if c.is_one() {
            &sum + &term
        } else {
            &sum + &term.scale(&PadicScalar::from_bigint(c, p, backend))
        };
        terms = t + 1;
    }
    (sum, terms, false)
}

/// Partial sum of `sum_t coeff(t) X^t M` (integer coefficients) whose tail
/// is certified to be at most `p^target`.
pub(crate) fn certified_series(
    x: &PadicMatrix,
    right: &PadicMatrix,
    coeff: impl Fn(u64) -> BigInt,
    target: i64,
    diverged: impl Fn(String) -> PadicError,
) -> Result<Series> {
    let Some(e_m) = right.norm_bound_exponent() else {
        return Ok(Series { value: PadicMatrix::zero(x.dim(), x.prime(), x.backend()), tail: None, terms: 0 });
    };
    let cap = iteration_cap(x.dim(), target);
    let block = Block::find(x, cap, &diverged)?;
    let last = block.terms_for(target, e_m);
    if last > cap {
        return Err(diverged(format!(
            "reaching tail p^{target} needs {last} terms, above the cap {cap}"
        )));
    }
    let (value, terms, vanished) = partial_sum(x, right, coeff, last);
    let tail = if vanished { None } else { exp_add(block.tail_after(last), Some(e_m)) };
    Ok(Series { value, tail, terms })
}

fn same_field(a: &PadicMatrix, s: &PadicScalar, what: &str) -> Result<()> {
    if a.prime() != s.prime() || a.backend() != s.backend() {
        return Err(PadicError::InvalidInput(format!(
            "{what} must share the matrix prime {} and backend {:?}",
            a.prime(),
            a.backend()
        )));
    }
    Ok(())
}

fn domain(msg: String) -> PadicError {
    PadicError::Domain(msg)
}

/// `sum_{k<=K} λ^k A^k` with `sup_{k>K} |λ|^k ‖A^k‖ <= p^target`.
pub fn neumann_resolvent(a: &PadicMatrix, lambda: &PadicScalar, target: i64) -> Result<ResolventValue> {
    same_field(a, lambda, "λ")?;
    let id = PadicMatrix::identity(a.dim(), a.prime(), a.backend());
    let s = certified_series(&a.scale(lambda), &id, |_| BigInt::one(), target, domain)?;
    Ok(ResolventValue { value: s.value, tail_exponent: s.tail, lambda: lambda.clone(), truncation: s.terms })
}

/// `(I - λA)^-1` by elimination.
pub fn exact_resolvent(a: &PadicMatrix, lambda: &PadicScalar) -> Result<PadicMatrix> {
    same_field(a, lambda, "λ")?;
    let id = PadicMatrix::identity(a.dim(), a.prime(), a.backend());
    if lambda.is_exact_zero() {
        return Ok(id);
    }
    (&id - &a.scale(lambda)).inverse().map_err(|e| match e {
        PadicError::Singular(_) => PadicError::Singular(format!(
            "I - λA is not invertible at λ = {lambda} (1/λ is an eigenvalue of A)"
        )),
        other => other,
    })
}

/// `R^(j)(λ) = sum_{k>=j} k(k-1)...(k-j+1) λ^(k-j) A^k`, truncated with a
/// certified tail.
pub fn resolvent_derivative(
    a: &PadicMatrix,
    lambda: &PadicScalar,
    j: u32,
    target: i64,
) -> Result<ResolventValue> {
    if j == 0 {
        return neumann_resolvent(a, lambda, target);
    }
    same_field(a, lambda, "λ")?;
    let j = u64::from(j);
    let aj = a.pow(j);
    let s = certified_series(&a.scale(lambda), &aj, |t| falling_factorial(j + t, j), target, domain)?;
    Ok(ResolventValue { value: s.value, tail_exponent: s.tail, lambda: lambda.clone(), truncation: s.terms })
}

/// `R(λ)` from the expansion around `μ`: `sum_j Y^j R(μ)` with
/// `Y = ((λ - μ)/μ) (R(μ) - I)`, which is `R^(j)(μ)/j! (λ - μ)^j` with no
/// division by `j!`. At `μ = 0` the coefficients are `A^j`.
///
/// On the exact backend `R(μ)` comes from the solve. On the capped backend it
/// is a Neumann sum whose tail is folded into the entries' precision, so the
/// returned tail covers truncation only and the entries carry the rest.
pub fn taylor_recenter(
    a: &PadicMatrix,
    mu: &PadicScalar,
    lambda: &PadicScalar,
    target: i64,
) -> Result<ResolventValue> {
    same_field(a, mu, "μ")?;
    same_field(a, lambda, "λ")?;
    let r_mu = if a.backend() == crate::scalar::Backend::Exact {
        exact_resolvent(a, mu)?
    } else {
        let n = neumann_resolvent(a, mu, target)?;
        match n.tail_exponent {
            Some(t) => n.value.with_absolute_precision(-t),
            None => n.value,
        }
    };
    let h = lambda - mu;
    if h.is_exact_zero() {
        return Ok(ResolventValue { value: r_mu, tail_exponent: None, lambda: lambda.clone(), truncation: 1 });
    }
    let y = if mu.is_exact_zero() {
        a.scale(&h)
    } else {
        let id = PadicMatrix::identity(a.dim(), a.prime(), a.backend());
        (&r_mu - &id).scale(&h.checked_div(mu)?)
    };
    let s = certified_series(&y, &r_mu, |_| BigInt::one(), target, |m| {
        PadicError::OutOfRadius(format!("λ = {lambda} around μ = {mu}: {m}"))
    })?;
    Ok(ResolventValue { value: s.value, tail_exponent: s.tail, lambda: lambda.clone(), truncation: s.terms })
}

/// The Neumann disk of `A`: `|λ| ‖A^k‖^(1/k) -> |λ| p^g`, so the series
/// converges for `|λ| < p^r` with `r = -floor(g)` (integer exponents only).
/// The slope of the observed power norms is reported alongside.
pub fn domain_radius_estimate(a: &PadicMatrix, k_max: usize) -> Result<DomainEstimate> {
    if k_max < a.dim() {
        return Err(PadicError::InvalidInput(format!(
            "kMax = {k_max} must be at least the dimension {}",
            a.dim()
        )));
    }
    let growth = spectral_growth(a);
    let radius = match growth {
        None => Radius::Infinite,
        Some(g) => Radius::Finite(-g.floor().to_integer()),
    };
    let norms = power_norm_exponents(a, k_max);
    let half = k_max / 2;
    let observed_slope = match (norms[k_max], norms[half]) {
        (Some(hi), Some(lo)) if k_max > half => Some(Ratio::new(hi - lo, (k_max - half) as i64)),
        _ => None,
    };
    Ok(DomainEstimate { radius, growth, observed_slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Backend, Prime};
    use num_rational::BigRational;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn s(n: i64, d: i64, pr: Prime, b: Backend) -> PadicScalar {
        PadicScalar::from_rational(n, d, pr, b).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn one_by_one(v: i64, pr: Prime, b: Backend) -> PadicMatrix {
        PadicMatrix::from_ints(&[&[v]], pr, b).unwrap()
    }

    const CAPPED: Backend = Backend::Capped { digits: 64 };

    /// The difference of two values known to agree is at most this.
    fn diff_bound(x: &PadicMatrix, y: &PadicMatrix) -> Exponent {
        (x - y).norm_bound_exponent()
    }

    #[test]
    fn scalar_neumann_value() {
        let pr = p(2);
        let a = one_by_one(2, pr, CAPPED);
        let r = neumann_resolvent(&a, &s(2, 1, pr, CAPPED), -64).unwrap();
        assert!(r.tail_exponent <= Some(-64));
        let v = r.value.get(0, 0);
        assert_eq!(v.valuation(), Some(0));
        // -1/3 = ...0101 in base 2, unit ≡ 5 mod 8
        assert_eq!(&v.unit_digits().unwrap()[..3], &[1, 0, 1]);
        let exact = s(-1, 3, pr, CAPPED);
        assert!((v - &exact).bound_exponent() <= Some(-64));
    }

    #[test]
    fn nilpotent_series_terminates() {
        let pr = p(3);
        for b in [Backend::Exact, CAPPED] {
            let a = PadicMatrix::from_ints(&[&[0, 1], &[0, 0]], pr, b).unwrap();
            let lam = s(7, 2, pr, b);
            let r = neumann_resolvent(&a, &lam, -64).unwrap();
            assert_eq!(r.tail_exponent, None);
            assert_eq!(r.truncation, 2);
            let want = &PadicMatrix::identity(2, pr, b) + &a.scale(&lam);
            assert_eq!(r.value, want);
        }
    }

    #[test]
    fn diagonal_neumann_and_exact() {
        let pr = p(2);
        let a = PadicMatrix::from_ints(&[&[2, 0], &[0, 3]], pr, Backend::Exact).unwrap();
        let lam = s(2, 1, pr, Backend::Exact);
        let exact = exact_resolvent(&a, &lam).unwrap();
        assert_eq!(exact.to_rationals(), vec![vec![q(-1, 3), q(0, 1)], vec![q(0, 1), q(-1, 5)]]);
        let c = a.to_backend(CAPPED);
        let r = neumann_resolvent(&c, &lam.to_backend(CAPPED), -64).unwrap();
        assert_eq!(&r.value.get(1, 1).unit_digits().unwrap()[..3], &[1, 1, 0]);
        assert!(diff_bound(&r.value, &exact.to_backend(CAPPED)) <= Some(-64));
    }

    #[test]
    fn exact_resolvent_edge_cases() {
        let pr = p(2);
        let a = PadicMatrix::from_ints(&[&[2]], pr, Backend::Exact).unwrap();
        assert_eq!(exact_resolvent(&a, &s(2, 1, pr, Backend::Exact)).unwrap().to_rationals(), vec![vec![q(-1, 3)]]);
        let any = PadicMatrix::from_ints(&[&[5, 1], &[3, 7]], pr, Backend::Exact).unwrap();
        assert_eq!(exact_resolvent(&any, &PadicScalar::zero(pr, Backend::Exact)).unwrap(), PadicMatrix::identity(2, pr, Backend::Exact));
        // λ = 1/2 hits the eigenvalue 2
        assert!(matches!(exact_resolvent(&a, &s(1, 2, pr, Backend::Exact)), Err(PadicError::Singular(_))));
    }

    #[test]
    fn divergent_series_is_a_domain_error() {
        let pr = p(2);
        let a = PadicMatrix::from_ints(&[&[1]], pr, Backend::Exact).unwrap();
        let e = neumann_resolvent(&a, &PadicScalar::one(pr, Backend::Exact), -10).unwrap_err();
        assert!(matches!(e, PadicError::Domain(_)));
    }

    #[test]
    fn derivative_examples() {
        let pr = p(2);
        let a = one_by_one(2, pr, CAPPED);
        let lam = s(2, 1, pr, CAPPED);
        let d1 = resolvent_derivative(&a, &lam, 1, -64).unwrap();
        assert!((d1.value.get(0, 0) - &s(2, 9, pr, CAPPED)).bound_exponent() <= Some(-60));
        let d0 = resolvent_derivative(&a, &lam, 0, -64).unwrap();
        assert_eq!(d0, neumann_resolvent(&a, &lam, -64).unwrap());

        let nil = PadicMatrix::from_ints(&[&[0, 1], &[0, 0]], pr, Backend::Exact).unwrap();
        let d = resolvent_derivative(&nil, &s(5, 1, pr, Backend::Exact), 1, -64).unwrap();
        assert_eq!(d.value, nil);
        assert_eq!(d.tail_exponent, None);
    }

    #[test]
    fn taylor_examples() {
        let pr = p(2);
        for b in [Backend::Exact, CAPPED] {
            let a = one_by_one(2, pr, b);
            let t = taylor_recenter(&a, &s(2, 1, pr, b), &s(4, 1, pr, b), -64).unwrap();
            assert!((t.value.get(0, 0) - &s(-1, 7, pr, b)).bound_exponent() <= Some(-60));

            let same = taylor_recenter(&a, &s(2, 1, pr, b), &s(2, 1, pr, b), -64).unwrap();
            assert_eq!(same.truncation, 1);
            assert!((same.value.get(0, 0) - &s(-1, 3, pr, b)).bound_exponent() <= Some(-60));

            let nil = PadicMatrix::from_ints(&[&[0, 1], &[0, 0]], pr, b).unwrap();
            let t = taylor_recenter(&nil, &s(1, 1, pr, b), &s(3, 1, pr, b), -64).unwrap();
            let want = &PadicMatrix::identity(2, pr, b) + &nil.scale(&s(3, 1, pr, b));
            assert_eq!(t.value, want);
        }
    }

    #[test]
    fn taylor_outside_the_recentering_disk() {
        // R(μ) = -1/3 at μ = 2, A = [2]: Y = (h/2)(-4/3) needs |h| < 2 over Q_2
        let pr = p(2);
        let a = one_by_one(2, pr, Backend::Exact);
        let e = taylor_recenter(&a, &s(2, 1, pr, Backend::Exact), &s(5, 2, pr, Backend::Exact), -20).unwrap_err();
        assert!(matches!(e, PadicError::OutOfRadius(_)));
    }

    #[test]
    fn radius_examples() {
        let pr = p(2);
        let r = |rows: &[&[(i64, i64)]]| {
            let rows: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect();
            let m = PadicMatrix::from_rationals(&rows, pr, Backend::Exact).unwrap();
            domain_radius_estimate(&m, 40).unwrap()
        };
        assert_eq!(r(&[&[(2, 1)]]).radius, Radius::Finite(1));
        assert_eq!(r(&[&[(1, 1), (1, 1)], &[(0, 1), (1, 1)]]).radius, Radius::Finite(0));
        let half = r(&[&[(1, 2)]]);
        assert_eq!(half.radius, Radius::Finite(-1));
        assert_eq!(half.observed_slope, Some(Ratio::from_integer(1)));
        assert_eq!(r(&[&[(0, 1), (3, 1)], &[(0, 1), (0, 1)]]).radius, Radius::Infinite);
        assert!(Radius::Finite(3) < Radius::Infinite);
        let m = PadicMatrix::from_ints(&[&[1, 0], &[0, 1]], pr, Backend::Exact).unwrap();
        assert!(domain_radius_estimate(&m, 1).is_err());
    }

    #[test]
    fn observed_slope_tracks_the_polygon() {
        // companion of x^3 - 1/2 over Q_2: slope 1/3
        let pr = p(2);
        let rows = vec![
            vec![q(0, 1), q(0, 1), q(1, 2)],
            vec![q(1, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1), q(0, 1)],
        ];
        let m = PadicMatrix::from_rationals(&rows, pr, Backend::Exact).unwrap();
        let est = domain_radius_estimate(&m, 120).unwrap();
        assert_eq!(est.growth, Some(Ratio::new(1, 3)));
        assert_eq!(est.radius, Radius::Finite(0));
        assert_eq!(est.observed_slope, Some(Ratio::new(1, 3)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Integral entries over Z_(p): denominators coprime to every test prime.
        fn bounded(d: usize, pr: Prime) -> impl Strategy<Value = PadicMatrix> {
            proptest::collection::vec((-9i64..=9, prop_oneof![Just(1i64), Just(7), Just(11)]), d * d).prop_map(
                move |v| {
                    let rows: Vec<Vec<BigRational>> =
                        v.chunks(d).map(|r| r.iter().map(|&(n, de)| q(n, de)).collect()).collect();
                    PadicMatrix::from_rationals(&rows, pr, Backend::Exact).unwrap()
                },
            )
        }

        fn instance() -> impl Strategy<Value = (PadicMatrix, PadicScalar)> {
            (1usize..=3, 0usize..3, 1i64..=3, prop_oneof![Just(1i64), Just(2), Just(-1)]).prop_flat_map(
                |(d, pi, m, u)| {
                    let pr = p([2, 3, 5][pi]);
                    let lam = PadicScalar::prime_power(m, pr, Backend::Exact)
                        .checked_mul(&PadicScalar::from_int(u + pr.get() as i64, pr, Backend::Exact))
                        .unwrap();
                    (bounded(d, pr), Just(lam))
                },
            )
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn neumann_agrees_with_the_solve((a, lam) in instance()) {
                let exact = exact_resolvent(&a, &lam).unwrap();
                let n = neumann_resolvent(&a, &lam, -24).unwrap();
                prop_assert!(n.tail_exponent <= Some(-24));
                prop_assert!((&n.value - &exact).norm_exponent() <= n.tail_exponent);
                // defect of the partial sum
                let id = PadicMatrix::identity(a.dim(), a.prime(), Backend::Exact);
                let ilam = &id - &a.scale(&lam);
                let defect = (&ilam.matmul(&n.value) - &id).norm_exponent();
                prop_assert!(defect <= crate::scalar::exp_add(n.tail_exponent, ilam.norm_exponent()));
                // R - I = λ A R
                prop_assert_eq!(&exact - &id, a.scale(&lam).matmul(&exact));
            }

            #[test]
            fn capped_neumann_matches_exact((a, lam) in instance()) {
                let b = Backend::Capped { digits: 40 };
                let exact = exact_resolvent(&a, &lam).unwrap();
                let n = neumann_resolvent(&a.to_backend(b), &lam.to_backend(b), -40).unwrap();
                prop_assert!((&n.value - &exact.to_backend(b)).norm_bound_exponent() <= Some(-38));
            }

            #[test]
            fn divided_difference_approaches_the_derivative((a, lam) in instance(), hv in 2i64..=6) {
                let pr = a.prime();
                let h = PadicScalar::prime_power(hv, pr, Backend::Exact);
                let r0 = exact_resolvent(&a, &lam).unwrap();
                let r1 = exact_resolvent(&a, &(&lam + &h)).unwrap();
                let quotient = (&r1 - &r0).scale(&h.inv().unwrap());
                let d = resolvent_derivative(&a, &lam, 1, -30).unwrap();
                // ‖A‖, ‖R‖ <= 1 here, so every Taylor coefficient past the first is <= 1
                let err = (&quotient - &d.value).norm_exponent();
                prop_assert!(err <= h.abs_exponent().max(d.tail_exponent));
            }

            #[test]
            fn taylor_agrees_with_direct_evaluation((a, lam) in instance(), mv in 1i64..=4) {
                let pr = a.prime();
                let mu = PadicScalar::prime_power(mv, pr, Backend::Exact);
                let t = taylor_recenter(&a, &mu, &lam, -24).unwrap();
                let direct = neumann_resolvent(&a, &lam, -24).unwrap();
                let diff = (&t.value - &direct.value).norm_exponent();
                prop_assert!(diff <= t.tail_exponent.max(direct.tail_exponent));
            }
        }
    }
}
