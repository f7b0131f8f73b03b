//! The acceptance suite: eight seeded, timed property checks over the whole
//! pipeline. Shared by the `acceptance` test target and `selftest`.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::{
    check_derivative_formula, criterion_sequences, hyp_verdict, lambda_to_zero_probe, reconstruction_check,
    series_identity_t, CheckConfig, OperatorSystem,
};
use crate::document::SpecDocument;
use crate::exec::Exec;
use crate::instances::{generate_matrix, prime_power_ratio, InstanceKind};
use crate::linalg::{power_bounded_oracle, power_norm_exponents, PadicMatrix, PowerBound, SeminormFamily, Status};
use crate::resolvent::{exact_resolvent, taylor_recenter};
use crate::scalar::{binom_valuation, exp_add, int, Backend, Exponent, PadicScalar, PrecisionBudget, Prime};

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub assertions: u64,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} [{}] {}: {} assertions in {:.2}s",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.assertions,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(l) = self.limit {
            write!(f, " (limit {}s)", l.as_secs())?;
        }
        write!(f, "; {}", self.detail)
    }
}

/// Assertion counter that keeps the first few failure messages.
#[derive(Default)]
struct Tally {
    assertions: u64,
    failures: Vec<String>,
    failed: u64,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.assertions += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(msg());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.assertions += other.assertions;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < 5 {
                self.failures.push(f);
            }
        }
    }

    fn finish(self, id: u8, name: &'static str, start: Instant, limit: Option<Duration>, summary: String) -> Outcome {
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let mut detail = summary;
        if self.failed > 0 {
            detail = format!("{detail}; {} failed: {}", self.failed, self.failures.join(" | "));
        }
        if !in_time {
            detail = format!("{detail}; over the time limit");
        }
        Outcome {
            id,
            name,
            passed: self.failed == 0 && self.assertions > 0 && in_time,
            assertions: self.assertions,
            elapsed,
            limit,
            detail,
        }
    }
}

const PRIMES: [u32; 3] = [2, 3, 5];

fn prime(i: usize) -> Prime {
    Prime::new(PRIMES[i % PRIMES.len()]).expect("prime")
}

fn exact(n: i64, p: Prime) -> PadicScalar {
    PadicScalar::from_int(n, p, Backend::Exact)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `p^m u` for `u ∈ {1, 1 + p}`, `m` from `m0` to `m0 + 2`.
fn grid(p: Prime, m0: i64) -> Vec<PadicScalar> {
    let mut out = Vec::new();
    for m in m0..m0 + 3 {
        for u in [1, 1 + p.get() as i64] {
            out.push(&PadicScalar::prime_power(m, p, Backend::Exact) * &exact(u, p));
        }
    }
    out
}

/// `{p, p^2, (1 + p) p}`.
fn identity_lambdas(p: Prime) -> Vec<PadicScalar> {
    let pp = PadicScalar::prime_power(1, p, Backend::Exact);
    vec![pp.clone(), PadicScalar::prime_power(2, p, Backend::Exact), &exact(1 + p.get() as i64, p) * &pp]
}

/// The 50 seeded bounded matrices of the identity checks: `d = 1..=4`,
/// `p ∈ {2, 3, 5}`.
pub fn bounded_suite() -> Vec<PadicMatrix> {
    (0..50)
        .map(|i| {
            generate_matrix(&InstanceKind::RandomBounded { dim: 1 + i % 4, prime: prime(i), seed: i as u64 })
                .expect("valid instance")
        })
        .collect()
}

fn merged(exec: Exec, n: usize, f: impl Fn(usize) -> Tally + Sync + Send) -> Tally {
    let mut total = Tally::default();
    for t in exec.map_range(n, f) {
        total.merge(t);
    }
    total
}

pub fn criterion_1(exec: Exec) -> Outcome {
    let start = Instant::now();
    let suite = bounded_suite();
    let budget = PrecisionBudget::new(64, 10).expect("valid budget");
    let tally = merged(exec, suite.len(), |i| {
        let mut t = Tally::default();
        let a = &suite[i];
        let ac = a.to_backend(budget.capped());
        for lam in identity_lambdas(a.prime()) {
            let lc = lam.to_backend(budget.capped());
            for n in 1..=4u32 {
                let r = check_derivative_formula(a, &lam, n, &budget);
                t.check(r == Ok(None), || format!("instance {i}, λ = {lam}, n = {n}: exact residual {r:?}"));
                let r = check_derivative_formula(&ac, &lc, n, &budget);
                t.check(matches!(r, Ok(e) if e <= Some(-54)), || {
                    format!("instance {i}, λ = {lam}, n = {n}: capped residual {r:?}")
                });
            }
        }
        t
    });
    let summary = "derivative identity on 50 bounded instances, n = 1..4, exact residual -inf, capped <= -54".into();
    tally.finish(1, "derivative identity", start, Some(Duration::from_secs(60)), summary)
}

pub fn criterion_2(exec: Exec) -> Outcome {
    let start = Instant::now();
    let suite = bounded_suite();
    let tally = merged(exec, suite.len(), |i| {
        let mut t = Tally::default();
        let a = &suite[i];
        let (p, d) = (a.prime(), a.dim());
        let id = PadicMatrix::identity(d, p, Backend::Exact);
        for lam in identity_lambdas(p) {
            let r = exact_resolvent(a, &lam).expect("|λ| ‖A‖ < 1");
            let x = (&r - &id).scale(&lam.inv().expect("nonzero"));
            let ar = a.matmul(&r);
            let (mut lhs_s, mut rhs_s) = (r.clone(), r.clone());
            let (mut lhs_t, mut rhs_t) = (id.clone(), id.clone());
            for n in 0..=6 {
                t.check(lhs_s == rhs_s, || format!("instance {i}, λ = {lam}: S_{n} routes differ"));
                if n >= 1 {
                    t.check(lhs_t == rhs_t, || format!("instance {i}, λ = {lam}: T_{n} routes differ"));
                }
                lhs_s = x.matmul(&lhs_s);
                rhs_s = a.matmul(&rhs_s).matmul(&r);
                lhs_t = x.matmul(&lhs_t);
                rhs_t = ar.matmul(&rhs_t);
            }
        }
        t
    });
    tally.finish(2, "dual-route exactness", start, None, "S_n and T_n by both routes on 50 instances, n <= 6".into())
}

/// Bounded systems for the forward bound: the identity suite plus Jordan
/// blocks, integral diagonals and staircase shifts.
fn forward_suite() -> Vec<PadicMatrix> {
    let mut out = bounded_suite();
    for i in 0..12 {
        let p = prime(i);
        let pi = p.get() as i64;
        let kind = match i % 3 {
            0 => InstanceKind::Jordan { dim: 2 + i % 3, prime: p, eigen: ratio([1, -1, 1 + pi][i / 3 % 3], 1) },
            1 => InstanceKind::Diagonal { prime: p, entries: vec![ratio(pi, 1), ratio(1 + pi, 1), ratio(-1, 1)] },
            _ => InstanceKind::StaircaseShift {
                dim: 3,
                prime: p,
                superdiagonal: vec![ratio(1, pi), ratio(pi * pi, 1)],
            },
        };
        out.push(generate_matrix(&kind).expect("valid instance"));
    }
    out
}

pub fn criterion_3(exec: Exec) -> Outcome {
    let start = Instant::now();
    let suite = forward_suite();
    let tally = merged(exec, suite.len(), |i| {
        let mut t = Tally::default();
        let a = &suite[i];
        let sys = OperatorSystem::with_defaults(a.clone(), 200).expect("bounded systems are valid");
        t.check(power_bounded_oracle(a) == PowerBound::Bounded, || format!("instance {i} is not oracle-bounded"));
        let norms = power_norm_exponents(a, 500);
        let c = norms[..=200].iter().copied().max().flatten();
        let c500 = norms.iter().copied().max().flatten();
        t.check(c == c500, || format!("instance {i}: C = {c:?} through 200 but {c500:?} through 500"));
        let one = PadicScalar::one(a.prime(), Backend::Exact);
        for lam in sys.default_grid() {
            let seq = criterion_sequences(a, &one, &lam, 12).expect("inside the disk");
            let worst = seq.s.iter().chain(&seq.t).map(PadicMatrix::norm_exponent).max().flatten();
            t.check(worst <= c, || format!("instance {i}, λ = {lam}: criterion norm {worst:?} > C = {c:?}"));
        }
        t
    });
    let summary = format!("{} bounded instances, n <= 12, C from k <= 200 stable through 500", suite.len());
    tally.finish(3, "forward criterion bound", start, None, summary)
}

/// The mixed suite: 55 bounded and 45 unbounded systems.
pub fn mixed_suite() -> Vec<InstanceKind> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut out = Vec::new();
    let unit = |rng: &mut ChaCha8Rng, p: i64| loop {
        let u: i64 = rng.gen_range(-9..=9);
        if u % p != 0 {
            break u;
        }
    };
    for i in 0..100usize {
        let p = prime(i);
        let pi = p.get() as i64;
        let kind = match i {
            0..=24 => InstanceKind::RandomBounded { dim: 2 + i % 3, prime: p, seed: 1000 + i as u64 },
            25..=34 => InstanceKind::Jordan { dim: 2 + i % 3, prime: p, eigen: ratio([1, -1, 1 + pi, pi][i % 4], 1) },
            35..=44 => InstanceKind::Diagonal {
                prime: p,
                entries: (0..2 + i % 3).map(|_| ratio(unit(&mut rng, pi) * pi.pow(rng.gen_range(0..3u32)), 1)).collect(),
            },
            45..=54 => {
                let d = 2 + i % 3;
                InstanceKind::StaircaseShift {
                    dim: d,
                    prime: p,
                    superdiagonal: (1..d)
                        .map(|_| ratio(unit(&mut rng, pi), 1) * prime_power_ratio(p, rng.gen_range(-2..=1)))
                        .collect(),
                }
            }
            _ => {
                let d = 1 + i % 4;
                let mut entries: Vec<BigRational> = (0..d)
                    .map(|_| ratio(unit(&mut rng, pi), 1) * prime_power_ratio(p, rng.gen_range(-2..=1)))
                    .collect();
                let k = rng.gen_range(0..d);
                entries[k] = ratio(unit(&mut rng, pi), 1) * prime_power_ratio(p, -rng.gen_range(1..=2));
                InstanceKind::Diagonal { prime: p, entries }
            }
        };
        out.push(kind);
    }
    out
}

/// A staircase on top of a non-integral diagonal, i.e. an upper-triangular
/// matrix with an eigenvalue of negative valuation.
fn staircase_on_diagonal(kind: &InstanceKind, rng: &mut ChaCha8Rng) -> PadicMatrix {
    let a = generate_matrix(kind).expect("valid instance");
    let (p, d) = (a.prime(), a.dim());
    if d == 1 {
        return a;
    }
    let sup: Vec<BigRational> =
        (1..d).map(|_| ratio(rng.gen_range(1..=9), 1) * prime_power_ratio(p, rng.gen_range(-2..=1))).collect();
    let s = generate_matrix(&InstanceKind::StaircaseShift { dim: d, prime: p, superdiagonal: sup }).expect("valid");
    &a + &s
}

pub fn criterion_4(exec: Exec) -> Outcome {
    let start = Instant::now();
    let kinds = mixed_suite();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let matrices: Vec<PadicMatrix> = kinds
        .iter()
        .enumerate()
        .map(|(i, k)| if i >= 80 { staircase_on_diagonal(k, &mut rng) } else { generate_matrix(k).expect("valid") })
        .collect();
    let results = exec.map_range(matrices.len(), |i| {
        let mut t = Tally::default();
        let sys = match OperatorSystem::with_defaults(matrices[i].clone(), 200) {
            Ok(s) => s,
            Err(e) => {
                t.check(false, || format!("instance {i}: {e}"));
                return (t, None);
            }
        };
        let r = sys.declared_radius();
        let mut cfg = CheckConfig::for_system(&sys);
        cfg.lambdas = grid(sys.prime(), (1 - r).max(1));
        cfg.n_max = 16;
        cfg.scaling_budget = 12;
        cfg.identity_checks = false;
        let oracle = power_bounded_oracle(sys.matrix());
        match hyp_verdict(&sys, &cfg, Exec::Sequential) {
            Ok(rep) => {
                let statuses =
                    [rep.powers.status(), rep.criterion_s.family.status(), rep.criterion_t.family.status()];
                let expected = if oracle == PowerBound::Bounded { Status::Witnessed } else { Status::Refuted };
                let agree = rep.agreement();
                t.check(agree, || {
                    format!(
                        "instance {i}: statuses {statuses:?} disagree; spec {}",
                        SpecDocument::from_system(&sys, &cfg).to_json()
                    )
                });
                t.check(statuses[0] == expected, || format!("instance {i}: powers {:?} vs oracle {oracle:?}", statuses[0]));
                (t, Some(oracle))
            }
            Err(e) => {
                t.check(false, || format!("instance {i}: {e}"));
                (t, None)
            }
        }
    });
    let mut tally = Tally::default();
    let (mut bounded, mut unbounded) = (0, 0);
    for (t, o) in results {
        tally.merge(t);
        match o {
            Some(PowerBound::Bounded) => bounded += 1,
            Some(PowerBound::Unbounded) => unbounded += 1,
            None => {}
        }
    }
    let summary = format!("100 instances ({bounded} bounded, {unbounded} unbounded), n <= 16, scaling budget 12");
    tally.finish(4, "equivalence observation", start, None, summary)
}

/// Entries `n/m`, `|n| <= 9`, `1 <= m <= 9`.
fn random_rational_matrix(d: usize, p: Prime, rng: &mut ChaCha8Rng) -> PadicMatrix {
    let rows: Vec<Vec<BigRational>> =
        (0..d).map(|_| (0..d).map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9))).collect()).collect();
    PadicMatrix::from_rationals(&rows, p, Backend::Exact).expect("square")
}

pub fn criterion_5(exec: Exec) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let suite: Vec<PadicMatrix> = (0..100).map(|i| random_rational_matrix(3, prime(i), &mut rng)).collect();
    let results = exec.map_range(suite.len(), |i| {
        let mut t = Tally::default();
        let a = &suite[i];
        let oracle = power_bounded_oracle(a);
        let norms = power_norm_exponents(a, 500);
        match oracle {
            PowerBound::Bounded => {
                let early = norms[..=200].iter().copied().max().flatten();
                let late = norms.iter().copied().max().flatten();
                t.check(early == late, || format!("instance {i}: bounded but max grows from {early:?} to {late:?}"));
            }
            PowerBound::Unbounded => {
                let big = norms.iter().any(|e| *e > Some(20));
                t.check(big, || format!("instance {i}: non-integral but all norms <= 20"));
            }
        }
        (t, oracle)
    });
    let mut tally = Tally::default();
    let mut bounded = 0;
    for (t, o) in results {
        tally.merge(t);
        bounded += usize::from(o == PowerBound::Bounded);
    }
    tally.check(bounded > 0 && bounded < 100, || "the seeded suite does not exercise both oracle outcomes".into());
    let summary = format!("100 seeded 3x3 matrices, {bounded} oracle-bounded, k <= 500");
    tally.finish(5, "oracle consistency", start, None, summary)
}

pub fn criterion_6(exec: Exec) -> Outcome {
    let start = Instant::now();
    let suite = bounded_suite();
    let budget = PrecisionBudget::default();
    let tally = merged(exec, suite.len(), |i| {
        let mut t = Tally::default();
        let a = &suite[i];
        let ac = a.to_backend(budget.capped());
        for (li, lam) in identity_lambdas(a.prime()).into_iter().enumerate() {
            for k in 0..=10u32 {
                let r = reconstruction_check(a, &lam, k);
                t.check(r == Ok(None), || format!("instance {i}, λ = {lam}, k = {k}: reconstruction {r:?}"));
            }
            for n in 0..=4u32 {
                let r = series_identity_t(a, &lam, n, u64::from(n) + 2, &budget);
                t.check(r == Ok(None), || format!("instance {i}, λ = {lam}, n = {n}: exact series {r:?}"));
                if li == 0 {
                    let lc = lam.to_backend(budget.capped());
                    let r = series_identity_t(&ac, &lc, n, 2 * budget.digits() as u64, &budget);
                    t.check(matches!(r, Ok(e) if budget.passes(e)), || {
                        format!("instance {i}, λ = {lam}, n = {n}: capped series {r:?}")
                    });
                }
            }
        }
        t
    });
    let summary = "reconstruction k <= 10 exact; series identity n <= 4, exact with closed tail, capped with certified tail <= -54";
    tally.finish(6, "reconstruction and series identities", start, None, summary.into())
}

pub fn criterion_7(exec: Exec) -> Outcome {
    let start = Instant::now();
    let suite: Vec<PadicMatrix> = bounded_suite().into_iter().take(12).collect();
    let mut tally = merged(exec, suite.len(), |i| {
        let mut t = Tally::default();
        let b = &suite[i];
        let p = b.prime();
        let pi = p.get() as i64;
        let one = PadicScalar::one(p, Backend::Exact);
        let omegas = [
            PadicScalar::prime_power(1, p, Backend::Exact),
            PadicScalar::prime_power(-1, p, Backend::Exact),
            exact(1 + pi, p),
        ];
        for omega in omegas {
            let a = b.scale(&omega);
            let r = omega.valuation().expect("nonzero");
            let sys = OperatorSystem::new(a.clone(), omega.clone(), r, SeminormFamily::sup(b.dim()), 200);
            t.check(matches!(&sys, Ok(s) if s.scaled() == *b), || format!("instance {i}, ω = {omega}: system {sys:?}"));
            for z in identity_lambdas(p) {
                let lam = z.checked_div(&omega).expect("nonzero");
                let scaled = criterion_sequences(&a, &omega, &lam, 6);
                let plain = criterion_sequences(b, &one, &z, 6);
                t.check(scaled.is_ok() && scaled == plain, || {
                    format!("instance {i}, ω = {omega}, z = {z}: scaled and unscaled criteria differ")
                });
            }
        }
        t
    });
    // A = B/p with ω = 1/p: quasi-equicontinuous
    for (i, b) in suite.iter().take(3).enumerate() {
        let p = b.prime();
        let omega = PadicScalar::prime_power(-1, p, Backend::Exact);
        let a = b.scale(&omega);
        let verdict = OperatorSystem::new(a, omega, -1, SeminormFamily::sup(b.dim()), 200).and_then(|sys| {
            let cfg = CheckConfig::for_system(&sys);
            hyp_verdict(&sys, &cfg, exec)
        });
        let ok = matches!(&verdict, Ok(rep) if rep.powers.status() == Status::Witnessed && rep.passed());
        tally.check(ok, || format!("instance {i}: scaled verdict {verdict:?}"));
    }
    let summary = "omega in {p, 1/p, 1+p} on 12 instances, n <= 6, entry-exact; 3 scaled verdicts witnessed";
    tally.finish(7, "omega-scaling coherence", start, None, summary.into())
}

fn random_vector(d: usize, p: Prime, rng: &mut ChaCha8Rng) -> Vec<PadicScalar> {
    (0..d)
        .map(|_| {
            if rng.gen_range(0..6) == 0 {
                return PadicScalar::zero(p, Backend::Exact);
            }
            let q = ratio(rng.gen_range(-30..=30), rng.gen_range(1..=30)) * prime_power_ratio(p, rng.gen_range(-3..=3));
            PadicScalar::from_ratio(&q, p, Backend::Exact)
        })
        .collect()
}

fn random_weights(d: usize, rng: &mut ChaCha8Rng) -> Vec<Exponent> {
    (0..d).map(|_| (rng.gen_range(0..5) != 0).then(|| rng.gen_range(-3..=3))).collect()
}

fn seminorm_axioms(t: &mut Tally, rng: &mut ChaCha8Rng) {
    for case in 0..1500 {
        let p = prime(case);
        let d = rng.gen_range(1..=4);
        let w = random_weights(d, rng);
        let fam = SeminormFamily::new(d, vec![w.clone(), random_weights(d, rng)]).expect("dims match");
        let x = random_vector(d, p, rng);
        let y = random_vector(d, p, rng);
        let c = random_vector(1, p, rng).remove(0);
        let sum: Vec<PadicScalar> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let cx: Vec<PadicScalar> = x.iter().map(|a| &c * a).collect();
        let (qx, qy) = (fam.eval(0, &x), fam.eval(0, &y));
        t.check(fam.eval(0, &sum) <= qx.max(qy), || format!("ultrametric inequality fails for {w:?}"));
        t.check(fam.eval(0, &cx) == exp_add(c.abs_exponent(), qx), || format!("homogeneity fails for {w:?}"));
        t.check(fam.eval(0, &vec![PadicScalar::zero(p, Backend::Exact); d]).is_none(), || "q(0) != 0".into());
        if fam.is_hausdorff() && x.iter().any(|v| !v.is_zero()) {
            t.check(fam.eval(0, &x).is_some() || fam.eval(1, &x).is_some(), || "Hausdorff family misses x".into());
        }
    }
}

/// `|C(k, n)| <= 1`, with Kummer's count checked against the valuation of
/// the integer from Pascal's triangle.
fn binomial_bound(t: &mut Tally) {
    for p in PRIMES {
        let pr = Prime::new(p).expect("prime");
        let mut row = vec![BigInt::one()];
        for k in 0..=200u64 {
            for n in 0..=k {
                let c = &row[n as usize];
                let v = binom_valuation(k, n, pr);
                t.check(!c.is_zero() && v == Ok(int::valuation_int(c, p) as u32), || {
                    format!("C({k},{n}) at p = {p}: Kummer {v:?}")
                });
            }
            let mut next = vec![BigInt::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
    }
}

fn submultiplicativity(t: &mut Tally, rng: &mut ChaCha8Rng) {
    for case in 0..600 {
        let p = prime(case);
        let d = rng.gen_range(1..=4);
        let rand_m = |rng: &mut ChaCha8Rng| {
            let cols: Vec<Vec<PadicScalar>> = (0..d).map(|_| random_vector(d, p, rng)).collect();
            PadicMatrix::from_fn(d, p, Backend::Exact, |i, j| cols[i][j].clone())
        };
        let (a, b) = (rand_m(rng), rand_m(rng));
        let x = random_vector(d, p, rng);
        let ab = a.matmul(&b).norm_exponent();
        t.check(ab <= exp_add(a.norm_exponent(), b.norm_exponent()), || format!("‖AB‖ = {ab:?} too large"));
        let ax = a.apply(&x).iter().map(PadicScalar::abs_exponent).max().flatten();
        let xn = x.iter().map(PadicScalar::abs_exponent).max().flatten();
        t.check(ax <= exp_add(a.norm_exponent(), xn), || "‖Ax‖ > ‖A‖ ‖x‖".into());
    }
}

fn taylor_agreement(t: &mut Tally, rng: &mut ChaCha8Rng) {
    let budget = PrecisionBudget::default();
    for case in 0..120 {
        let p = prime(case);
        let pi = p.get() as i64;
        let a = generate_matrix(&InstanceKind::RandomBounded { dim: 1 + case % 3, prime: p, seed: 800 + case as u64 })
            .expect("valid");
        let mu = if case % 5 == 0 {
            PadicScalar::zero(p, Backend::Exact)
        } else {
            &PadicScalar::prime_power(rng.gen_range(1..=2), p, Backend::Exact) * &exact([1, -1, 1 + pi][case % 3], p)
        };
        let h = loop {
            let u: i64 = rng.gen_range(-9..=9);
            if u % pi != 0 {
                break &PadicScalar::prime_power(rng.gen_range(3..=4), p, Backend::Exact) * &exact(u, p);
            }
        };
        let lam = &mu + &h;
        let direct = exact_resolvent(&a, &lam).expect("inside the disk");
        let cap = budget.capped();
        let exact_t = taylor_recenter(&a, &mu, &lam, -40);
        t.check(
            matches!(&exact_t, Ok(v) if (&v.value - &direct).norm_exponent() <= v.tail_exponent),
            || format!("case {case}: exact recentering at μ = {mu}, λ = {lam} misses its tail"),
        );
        let capped = taylor_recenter(&a.to_backend(cap), &mu.to_backend(cap), &lam.to_backend(cap), -64);
        t.check(
            matches!(&capped, Ok(v) if budget.passes((&v.value.lift() - &direct).norm_exponent())),
            || format!("case {case}: capped recentering at μ = {mu}, λ = {lam} is off"),
        );
    }
}

fn probe_stabilization(t: &mut Tally) {
    let ms: Vec<i64> = (1..=6).collect();
    for case in 0..60 {
        let a = generate_matrix(&InstanceKind::RandomBounded { dim: 1 + case % 4, prime: prime(case), seed: 600 + case as u64 })
            .expect("valid");
        for k in 1..=3 {
            let probe = lambda_to_zero_probe(&a, k, &ms);
            t.check(matches!(&probe, Ok(pr) if pr.stabilized()), || format!("case {case}, k = {k}: {probe:?}"));
        }
    }
}

pub fn criterion_8(exec: Exec) -> Outcome {
    let start = Instant::now();
    let parts: [fn(&mut Tally, &mut ChaCha8Rng); 5] = [
        seminorm_axioms,
        |t, _| binomial_bound(t),
        submultiplicativity,
        taylor_agreement,
        |t, _| probe_stabilization(t),
    ];
    let tally = merged(exec, parts.len(), |i| {
        let mut t = Tally::default();
        let mut rng = ChaCha8Rng::seed_from_u64(80 + i as u64);
        parts[i](&mut t, &mut rng);
        t
    });
    let summary = "seminorm axioms, |C(k,n)| <= 1 for k <= 200, submultiplicativity, Taylor recentering, λ -> 0 probes";
    let mut out = tally.finish(8, "ultrametric foundations", start, Some(Duration::from_secs(120)), summary.into());
    if out.assertions < 10_000 {
        out.passed = false;
        out.detail.push_str("; fewer than 10^4 assertions");
    }
    out
}

pub fn run_all(exec: Exec) -> Vec<Outcome> {
    vec![
        criterion_1(exec),
        criterion_2(exec),
        criterion_3(exec),
        criterion_4(exec),
        criterion_5(exec),
        criterion_6(exec),
        criterion_7(exec),
        criterion_8(exec),
    ]
}
