//! The resolvent identities behind the criteria, each checked as a residual
//! exponent: `None` (`-inf`) means the two sides agree exactly.

use num_bigint::BigInt;

use crate::error::{PadicError, Result};
use crate::linalg::PadicMatrix;
use crate::resolvent::{exact_resolvent, iteration_cap, neumann_resolvent, partial_sum, resolvent_derivative, Block};
use crate::scalar::{binomial, exp_add, Backend, Exponent, PadicScalar, PrecisionBudget, DEFAULT_SLACK};

fn nonzero(lambda: &PadicScalar) -> Result<()> {
    if lambda.is_zero() {
        return Err(PadicError::InvalidInput("λ = 0 is excluded from the criterion families".into()));
    }
    Ok(())
}

/// Residual tolerance implied by a backend: exact agreement, or agreement to
/// `digits - slack` digits.
fn route_tolerance(backend: Backend) -> Exponent {
    match backend {
        Backend::Exact => None,
        Backend::Capped { digits } => Some(-(digits as i64 - DEFAULT_SLACK as i64)),
    }
}

fn agree(x: &PadicMatrix, y: &PadicMatrix, what: &str) -> Result<()> {
    let diff = (x - y).norm_bound_exponent();
    if diff > route_tolerance(x.backend()) {
        return Err(PadicError::Consistency(format!(
            "the two routes to {what} differ by p^{}",
            crate::scalar::exp_display(diff)
        )));
    }
    Ok(())
}

/// A capped residual measured against the size of what was compared: capped
/// values carry relative precision, so a side of norm `p^e > 1` is only known
/// to `p^(e - digits)`.
fn relative(diff: Exponent, scale: Exponent) -> Exponent {
    diff.map(|d| d - scale.unwrap_or(0).max(0))
}

/// The resolvent used by the criteria: the solve on either backend (the
/// capped solve tracks its own precision).
pub fn criterion_resolvent(a: &PadicMatrix, lambda: &PadicScalar) -> Result<PadicMatrix> {
    exact_resolvent(a, lambda)
}

/// The S- and T-families at one λ, both routes compared at every step.
///
/// `S_n = (R - I)^n R / (ωλ)^n` for `n = 0..=n_max` and
/// `T_n = (R - I)^n / (ωλ)^n` for `n = 1..=n_max`; the second routes are
/// `ω^-n A^n R^(n+1)` and `ω^-n (AR)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionSequences {
    pub s: Vec<PadicMatrix>,
    pub t: Vec<PadicMatrix>,
}

pub fn criterion_sequences(
    a: &PadicMatrix,
    omega: &PadicScalar,
    lambda: &PadicScalar,
    n_max: usize,
) -> Result<CriterionSequences> {
    nonzero(lambda)?;
    let r = criterion_resolvent(a, lambda)?;
    criterion_sequences_with(a, &r, omega, lambda, n_max)
}

pub(crate) fn criterion_sequences_with(
    a: &PadicMatrix,
    r: &PadicMatrix,
    omega: &PadicScalar,
    lambda: &PadicScalar,
    n_max: usize,
) -> Result<CriterionSequences> {
    let id = PadicMatrix::identity(a.dim(), a.prime(), a.backend());
    let inv_wl = omega.checked_mul(lambda)?.inv()?;
    let inv_w = omega.inv()?;
    // (R - I)/(ωλ) and AR/ω
    let step1 = (r - &id).scale(&inv_wl);
    let step2 = a.matmul(r).scale(&inv_w);

    let mut s = Vec::with_capacity(n_max + 1);
    let mut t = Vec::with_capacity(n_max);
    let (mut s1, mut s2) = (r.clone(), r.clone());
    let (mut t1, mut t2) = (id.clone(), id);
    s.push(s1.clone());
    for n in 1..=n_max {
        s1 = s1.matmul(&step1);
        s2 = s2.matmul(&step2);
        t1 = t1.matmul(&step1);
        t2 = t2.matmul(&step2);
        agree(&s1, &s2, &format!("S_{n}"))?;
        agree(&t1, &t2, &format!("T_{n}"))?;
        s.push(s1.clone());
        t.push(t1.clone());
    }
    Ok(CriterionSequences { s, t })
}

/// `S_n(λ) = λ^-n (R - I)^n R`, checked against `A^n R^(n+1)`.
pub fn criterion_s(a: &PadicMatrix, lambda: &PadicScalar, n: usize) -> Result<PadicMatrix> {
    let one = PadicScalar::one(a.prime(), a.backend());
    Ok(criterion_sequences(a, &one, lambda, n)?.s.swap_remove(n))
}

/// `T_n(λ) = λ^-n (R - I)^n`, checked against `(AR)^n`; `n >= 1`.
pub fn criterion_t(a: &PadicMatrix, lambda: &PadicScalar, n: usize) -> Result<PadicMatrix> {
    if n == 0 {
        return Err(PadicError::InvalidInput("the T-family starts at n = 1".into()));
    }
    let one = PadicScalar::one(a.prime(), a.backend());
    Ok(criterion_sequences(a, &one, lambda, n)?.t.swap_remove(n - 1))
}

fn factorial(n: u32) -> BigInt {
    (1..=u64::from(n)).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `n! λ^-n (R - I)^n R` from a given resolvent.
fn derivative_closed_form(r: &PadicMatrix, lambda: &PadicScalar, n: u32) -> Result<PadicMatrix> {
    let id = PadicMatrix::identity(r.dim(), r.prime(), r.backend());
    let rm = &(r - &id);
    let mut acc = r.clone();
    for _ in 0..n {
        acc = rm.matmul(&acc);
    }
    let c = PadicScalar::from_bigint(factorial(n), r.prime(), r.backend()).checked_mul(&lambda.powi(-i64::from(n))?)?;
    Ok(acc.scale(&c))
}

/// Neumann resolvent with its tail folded into the entries' precision.
fn enclosed_resolvent(a: &PadicMatrix, lambda: &PadicScalar, target: i64) -> Result<PadicMatrix> {
    let n = neumann_resolvent(a, lambda, target)?;
    Ok(match n.tail_exponent {
        Some(t) => n.value.with_absolute_precision(-t),
        None => n.value,
    })
}

/// Residual of `R^(n)(λ) = n! (R - I)^n R / λ^n`.
///
/// Exact backend: the left side is the closed form `n! A^n R^(n+1)` with `R`
/// from the solve, so the residual is exactly `-inf`. Capped backend
/// (`budget.digits()` digits): the left side is the certified derivative
/// series, the right side uses a capped Neumann `R`, and the residual counts
/// the series tail and every precision loss.
pub fn check_derivative_formula(a: &PadicMatrix, lambda: &PadicScalar, n: u32, budget: &PrecisionBudget) -> Result<Exponent> {
    nonzero(lambda)?;
    match a.backend() {
        Backend::Exact => {
            let r = exact_resolvent(a, lambda)?;
            let mut lhs = a.pow(u64::from(n));
            for _ in 0..=n {
                lhs = lhs.matmul(&r);
            }
            lhs = lhs.scale(&PadicScalar::from_bigint(factorial(n), a.prime(), Backend::Exact));
            let rhs = derivative_closed_form(&r, lambda, n)?;
            Ok((&lhs - &rhs).norm_exponent())
        }
        Backend::Capped { .. } => {
            let target = -(budget.digits() as i64);
            let lhs = resolvent_derivative(a, lambda, n, target)?;
            let r = enclosed_resolvent(a, lambda, target)?;
            let rhs = derivative_closed_form(&r, lambda, n)?;
            let diff = (&lhs.value - &rhs).norm_bound_exponent().max(lhs.tail_exponent);
            Ok(relative(diff, lhs.value.norm_exponent()))
        }
    }
}

/// Residual of `A^k = (I - λA)^(k+1) S_k(λ)` with `S_k = λ^-k (R - I)^k R`.
/// At `k = 0` this is the resolvent defect `(I - λA) R - I`. Capped residuals
/// here and below are relative to `max(1, size of the compared side)`.
pub fn reconstruction_check(a: &PadicMatrix, lambda: &PadicScalar, k: u32) -> Result<Exponent> {
    nonzero(lambda)?;
    let r = criterion_resolvent(a, lambda)?;
    reconstruction_with(a, &r, lambda, k)
}

pub(crate) fn reconstruction_with(a: &PadicMatrix, r: &PadicMatrix, lambda: &PadicScalar, k: u32) -> Result<Exponent> {
    let id = PadicMatrix::identity(a.dim(), a.prime(), a.backend());
    let rm = r - &id;
    let mut s = r.clone();
    for _ in 0..k {
        s = rm.matmul(&s);
    }
    s = s.scale(&lambda.powi(-i64::from(k))?);
    let ilam = &id - &a.scale(lambda);
    for _ in 0..=k {
        s = ilam.matmul(&s);
    }
    let ak = a.pow(u64::from(k));
    let diff = (&s - &ak).norm_bound_exponent();
    Ok(if a.backend() == Backend::Exact { diff } else { relative(diff, ak.norm_exponent()) })
}

/// Residual of `(R - I)^(n+1) = sum_{j>=n} C(j, n) (λA)^(j+1)`, summed to
/// `j = k`.
///
/// Exact backend: the tail beyond `k` is added back in closed form,
/// `sum_{i=0..=n} C(k+1, n-i) X^(k+2+i) R^(i+1)` with `X = λA`, so the
/// residual is exactly `-inf`. Capped backend: the residual includes the
/// certified bound on the omitted tail.
pub fn series_identity_t(a: &PadicMatrix, lambda: &PadicScalar, n: u32, k: u64, budget: &PrecisionBudget) -> Result<Exponent> {
    let x = a.scale(lambda);
    let n64 = u64::from(n);
    let head = x.pow(n64 + 1);
    let partial = if k >= n64 {
        partial_sum(&x, &head, |t| binomial(t + n64, n64), k - n64).0
    } else {
        PadicMatrix::zero(a.dim(), a.prime(), a.backend())
    };
    let id = PadicMatrix::identity(a.dim(), a.prime(), a.backend());
    match a.backend() {
        Backend::Exact => {
            let r = exact_resolvent(a, lambda)?;
            let lhs = (&r - &id).pow(n64 + 1);
            let mut tail = PadicMatrix::zero(a.dim(), a.prime(), Backend::Exact);
            let xk = x.pow(k + 2);
            let mut xpow = xk;
            let mut rpow = r.clone();
            for i in 0..=n64 {
                let c = binomial(k + 1, n64 - i);
                let term = xpow.matmul(&rpow).scale(&PadicScalar::from_bigint(c, a.prime(), Backend::Exact));
                tail = &tail + &term;
                xpow = xpow.matmul(&x);
                rpow = rpow.matmul(&r);
            }
            Ok((&lhs - &(&partial + &tail)).norm_exponent())
        }
        Backend::Capped { .. } => {
            let target = -(budget.digits() as i64);
            let r = enclosed_resolvent(a, lambda, target)?;
            let lhs = (&r - &id).pow(n64 + 1);
            let block = Block::find(&x, iteration_cap(a.dim(), target), &PadicError::Domain)?;
            // terms j > k are C(j, n) X^(j-n) X^(n+1)
            let tail = if k >= n64 {
                exp_add(block.tail_after(k - n64), head.norm_bound_exponent())
            } else {
                exp_add(Some(0).max(block.tail_after(0)), head.norm_bound_exponent())
            };
            let diff = (&lhs - &partial).norm_bound_exponent().max(tail);
            Ok(relative(diff, lhs.norm_exponent()))
        }
    }
}

/// The λ → 0 step made numerical: for `λ = p^m`,
/// `M(m) = max_{0<=j<=k+1} normExponent((λA)^j S_k(λ))`, which should settle at
/// `normExponent(A^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub k: u32,
    pub ms: Vec<i64>,
    pub values: Vec<Exponent>,
    pub limit: Exponent,
}

impl Probe {
    pub fn stabilized(&self) -> bool {
        self.values.last() == Some(&self.limit)
    }
}

pub fn lambda_to_zero_probe(a: &PadicMatrix, k: u32, ms: &[i64]) -> Result<Probe> {
    if ms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PadicError::InvalidInput("probe valuations must increase".into()));
    }
    let a = a.lift();
    let values = ms
        .iter()
        .map(|&m| {
            let lambda = PadicScalar::prime_power(m, a.prime(), Backend::Exact);
            let s = criterion_s(&a, &lambda, k as usize)?;
            let x = a.scale(&lambda);
            let mut term = s;
            let mut best: Exponent = None;
            for _ in 0..=k + 1 {
                best = best.max(term.norm_exponent());
                term = x.matmul(&term);
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Probe { k, ms: ms.to_vec(), values, limit: a.pow(u64::from(k)).norm_exponent() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Prime;
    use num_rational::BigRational;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn sc(n: i64, d: i64, pr: Prime, b: Backend) -> PadicScalar {
        PadicScalar::from_rational(n, d, pr, b).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    const EX: Backend = Backend::Exact;
    const CAP: Backend = Backend::Capped { digits: 64 };

    fn nil(pr: Prime, b: Backend) -> PadicMatrix {
        PadicMatrix::from_ints(&[&[0, 1], &[0, 0]], pr, b).unwrap()
    }

    #[test]
    fn derivative_formula_examples() {
        let budget = PrecisionBudget::default();
        let pr = p(3);
        assert_eq!(check_derivative_formula(&nil(pr, EX), &sc(3, 1, pr, EX), 1, &budget).unwrap(), None);
        assert!(budget.passes(check_derivative_formula(&nil(pr, CAP), &sc(3, 1, pr, CAP), 1, &budget).unwrap()));

        let p2 = p(2);
        let a = PadicMatrix::from_ints(&[&[2]], p2, EX).unwrap();
        assert_eq!(check_derivative_formula(&a, &sc(2, 1, p2, EX), 1, &budget).unwrap(), None);
        let ac = a.to_backend(CAP);
        assert!(budget.passes(check_derivative_formula(&ac, &sc(2, 1, p2, CAP), 1, &budget).unwrap()));

        let b = PadicMatrix::from_ints(&[&[1, 2, 0], &[3, 1, 1], &[0, 6, 4]], pr, EX).unwrap();
        let lam = sc(3, 1, pr, EX);
        assert_eq!(check_derivative_formula(&b, &lam, 2, &budget).unwrap(), None);
        let res = check_derivative_formula(&b.to_backend(CAP), &lam.to_backend(CAP), 2, &budget).unwrap();
        assert!(res <= Some(-54), "{res:?}");
    }

    #[test]
    fn criterion_s_examples() {
        let p2 = p(2);
        let a = PadicMatrix::from_ints(&[&[2]], p2, EX).unwrap();
        let s1 = criterion_s(&a, &sc(2, 1, p2, EX), 1).unwrap();
        assert_eq!(s1.to_rationals(), vec![vec![q(2, 9)]]);
        assert_eq!(s1.norm_exponent(), Some(-1));

        let lam = sc(6, 1, p2, EX);
        assert_eq!(criterion_s(&a, &lam, 0).unwrap(), exact_resolvent(&a, &lam).unwrap());

        let n = nil(p2, EX);
        assert_eq!(criterion_s(&n, &sc(5, 4, p2, EX), 1).unwrap(), n);
    }

    #[test]
    fn criterion_t_examples() {
        let p2 = p(2);
        let a = PadicMatrix::from_ints(&[&[2]], p2, EX).unwrap();
        let t1 = criterion_t(&a, &sc(2, 1, p2, EX), 1).unwrap();
        assert_eq!(t1.to_rationals(), vec![vec![q(-2, 3)]]);
        assert_eq!(t1.norm_exponent(), Some(-1));

        let n = nil(p2, EX);
        assert!(criterion_t(&n, &sc(3, 1, p2, EX), 2).unwrap().is_exact_zero());

        let id = PadicMatrix::identity(2, p2, EX);
        let t = criterion_t(&id, &sc(2, 1, p2, EX), 1).unwrap();
        assert_eq!(t, PadicMatrix::scalar(2, &sc(-1, 1, p2, EX)));
        assert_eq!(t.norm_exponent(), Some(0));
        assert!(criterion_t(&id, &sc(2, 1, p2, EX), 0).is_err());
    }

    #[test]
    fn criterion_t_identity_at_p() {
        // A = I, λ = p: (1 - p)^-1 on the diagonal
        for pr in [p(3), p(5)] {
            let id = PadicMatrix::identity(2, pr, EX);
            let lam = sc(pr.get() as i64, 1, pr, EX);
            let t = criterion_t(&id, &lam, 1).unwrap();
            assert_eq!(t.get(0, 0).to_rational(), q(1, 1 - pr.get() as i64));
            assert_eq!(t.norm_exponent(), Some(0));
        }
    }

    #[test]
    fn capped_routes_agree() {
        let pr = p(5);
        let a = PadicMatrix::from_ints(&[&[1, 2], &[3, 4]], pr, CAP).unwrap();
        let one = PadicScalar::one(pr, CAP);
        let seqs = criterion_sequences(&a, &one, &sc(5, 1, pr, CAP), 6).unwrap();
        assert_eq!(seqs.s.len(), 7);
        assert_eq!(seqs.t.len(), 6);
    }

    #[test]
    fn lambda_zero_is_rejected() {
        let pr = p(2);
        let z = PadicScalar::zero(pr, EX);
        assert!(matches!(criterion_s(&nil(pr, EX), &z, 1), Err(PadicError::InvalidInput(_))));
    }

    #[test]
    fn series_identity_examples() {
        let budget = PrecisionBudget::default();
        let pr = p(2);
        let n = nil(pr, EX);
        assert_eq!(series_identity_t(&n, &sc(3, 1, pr, EX), 0, 0, &budget).unwrap(), None);
        assert!(budget.passes(series_identity_t(&n.to_backend(CAP), &sc(3, 1, pr, CAP), 0, 5, &budget).unwrap()));

        let a = PadicMatrix::from_ints(&[&[2]], pr, CAP).unwrap();
        let res = series_identity_t(&a, &sc(2, 1, pr, CAP), 1, 40, &budget).unwrap();
        assert!(res <= Some(-54), "{res:?}");
        // too short a sum leaves a visible tail
        let short = series_identity_t(&a, &sc(2, 1, pr, CAP), 1, 5, &budget).unwrap();
        assert!(short > Some(-54));

        let d = PadicMatrix::from_ints(&[&[2, 0], &[0, 3]], pr, EX).unwrap();
        for k in [0, 3, 64] {
            assert_eq!(series_identity_t(&d, &sc(2, 1, pr, EX), 0, k, &budget).unwrap(), None);
            assert_eq!(series_identity_t(&d, &sc(2, 1, pr, EX), 2, k, &budget).unwrap(), None);
        }
    }

    #[test]
    fn reconstruction_examples() {
        let pr = p(2);
        let a = PadicMatrix::from_ints(&[&[2]], pr, EX).unwrap();
        assert_eq!(reconstruction_check(&a, &sc(2, 1, pr, EX), 1).unwrap(), None);
        assert_eq!(reconstruction_check(&a, &sc(2, 1, pr, EX), 0).unwrap(), None);
        let p3 = p(3);
        let b = PadicMatrix::from_ints(&[&[1, 2, 0], &[3, 1, 1], &[0, 6, 4]], p3, EX).unwrap();
        assert_eq!(reconstruction_check(&b, &sc(3, 1, p3, EX), 3).unwrap(), None);
        let res = reconstruction_check(&b.to_backend(CAP), &sc(3, 1, p3, CAP), 3).unwrap();
        assert!(res <= Some(-54), "{res:?}");
    }

    #[test]
    fn probe_examples() {
        let pr = p(2);
        let ms: Vec<i64> = (1..=6).collect();
        let a = PadicMatrix::from_ints(&[&[2]], pr, EX).unwrap();
        let probe = lambda_to_zero_probe(&a, 1, &ms).unwrap();
        assert!(probe.values.iter().all(|v| *v == Some(-1)));
        assert!(probe.stabilized());

        let n = lambda_to_zero_probe(&nil(pr, EX), 2, &ms).unwrap();
        assert_eq!(n.limit, None);
        assert!(n.stabilized());

        let d = PadicMatrix::from_ints(&[&[2, 0], &[0, 3]], pr, EX).unwrap();
        let pd = lambda_to_zero_probe(&d, 2, &ms).unwrap();
        assert_eq!(pd.limit, Some(0));
        assert!(pd.stabilized());
        assert!(lambda_to_zero_probe(&d, 2, &[3, 2]).is_err());
    }
}
