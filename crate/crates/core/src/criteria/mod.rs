//! Equi-continuity criteria for discrete semigroups `(A^n)` over `Q_p`.
//!
//! The power family `{(ω^-1 A)^n}` is equi-continuous iff the family
//! `S_n(λ) = (R(λ) - I)^n R(λ) / (ωλ)^n` is, uniformly over the punctured disk,
//! and likewise for `T_n(λ) = (R(λ) - I)^n / (ωλ)^n`, `n >= 1`. Here all three
//! families are checked on finite grids and compared, next to the oracle
//! verdict and the identities used in the proof.

mod identities;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use identities::{
    check_derivative_formula, criterion_resolvent, criterion_s, criterion_sequences, criterion_t,
    lambda_to_zero_probe, reconstruction_check, series_identity_t, CriterionSequences, Probe,
};

use crate::error::{PadicError, Result};
use crate::exec::Exec;
use crate::linalg::{
    equicontinuity_check, power_bounded_oracle, power_norm_exponents, EquiContinuityVerdict, PadicMatrix, PowerBound,
    SeminormFamily, Status,
};
use crate::resolvent::{domain_radius_estimate, DomainEstimate, Radius};
use crate::scalar::{Backend, Exponent, PadicScalar, PrecisionBudget, Prime};

pub const DEFAULT_N_MAX: usize = 12;
pub const DEFAULT_K_MAX: usize = 200;
/// Horizon over which the forward-bound constant must already be stable.
pub const STABILITY_HORIZON: usize = 500;

/// `A` with its scaling `ω` and the hypothesis `U_A = D(0, p^r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSystem {
    a: PadicMatrix,
    omega: PadicScalar,
    declared_radius: i64,
    seminorms: SeminormFamily,
    domain: DomainEstimate,
}

impl OperatorSystem {
    /// Validates the hypotheses: `ω != 0`, matching dimensions, the scaled
    /// disk convention `r = v(ω)` when `ω != 1`, and `r` not above the
    /// certified radius of the Neumann series.
    pub fn new(
        a: PadicMatrix,
        omega: PadicScalar,
        declared_radius: i64,
        seminorms: SeminormFamily,
        k_max: usize,
    ) -> Result<Self> {
        let a = a.lift();
        let omega = omega.lift();
        if omega.prime() != a.prime() {
            return Err(PadicError::InvalidInput(format!(
                "ω lives over Q_{} but A over Q_{}",
                omega.prime(),
                a.prime()
            )));
        }
        if omega.is_zero() {
            return Err(PadicError::InvalidInput("ω must be nonzero (ω ∈ K*)".into()));
        }
        if seminorms.dim() != a.dim() {
            return Err(PadicError::InvalidInput(format!(
                "seminorms act on dimension {} but A has dimension {}",
                seminorms.dim(),
                a.dim()
            )));
        }
        if !seminorms.is_hausdorff() {
            return Err(PadicError::InvalidInput(
                "the seminorm family does not separate points, so E is not Hausdorff".into(),
            ));
        }
        let unit_omega = omega == PadicScalar::one(a.prime(), Backend::Exact);
        let hypothesis = if unit_omega { "U_A = D(0,1)".to_string() } else { format!("U_A = D(0,1/|ω|) with ω = {omega}") };
        if !unit_omega {
            let v = omega.valuation().expect("nonzero");
            if declared_radius != v {
                return Err(PadicError::Hypothesis(format!(
                    "{hypothesis} fixes the radius exponent to v(ω) = {v}, but {declared_radius} was declared"
                )));
            }
        }
        let domain = domain_radius_estimate(&a, k_max)?;
        if Radius::Finite(declared_radius) > domain.radius {
            return Err(PadicError::Hypothesis(format!(
                "{hypothesis} is not satisfied: declared radius exponent {declared_radius} exceeds the certified radius {} of the Neumann series",
                domain.radius
            )));
        }
        Ok(OperatorSystem { a, omega, declared_radius, seminorms, domain })
    }

    /// `ω = 1`, sup norm, and `r = min(0, certified radius)`.
    pub fn with_defaults(a: PadicMatrix, k_max: usize) -> Result<Self> {
        let domain = domain_radius_estimate(&a, k_max)?;
        let r = domain.radius.exponent().map_or(0, |r| r.min(0));
        let (p, d) = (a.prime(), a.dim());
        Self::new(a, PadicScalar::one(p, Backend::Exact), r, SeminormFamily::sup(d), k_max)
    }

    pub fn matrix(&self) -> &PadicMatrix {
        &self.a
    }

    pub fn omega(&self) -> &PadicScalar {
        &self.omega
    }

    pub fn declared_radius(&self) -> i64 {
        self.declared_radius
    }

    pub fn seminorms(&self) -> &SeminormFamily {
        &self.seminorms
    }

    pub fn domain(&self) -> &DomainEstimate {
        &self.domain
    }

    pub fn prime(&self) -> Prime {
        self.a.prime()
    }

    /// `B = ω^-1 A`.
    pub fn scaled(&self) -> PadicMatrix {
        self.a.scale(&self.omega.inv().expect("ω != 0"))
    }

    /// `{p^m u : m = 1..=3, u ∈ {1, 1 + p}}` inside the declared disk.
    pub fn default_grid(&self) -> Vec<PadicScalar> {
        let p = self.prime();
        let unit2 = PadicScalar::from_int(1 + p.get() as i64, p, Backend::Exact);
        let mut out = Vec::new();
        for m in 1..=3 {
            let pm = PadicScalar::prime_power(m, p, Backend::Exact);
            for u in [PadicScalar::one(p, Backend::Exact), unit2.clone()] {
                let lam = &pm * &u;
                if lam.abs_exponent() < Some(self.declared_radius) {
                    out.push(lam);
                }
            }
        }
        out
    }
}

/// Grid, horizons and tolerances for [`hyp_verdict`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub lambdas: Vec<PadicScalar>,
    pub n_max: usize,
    pub k_max: usize,
    pub budget: PrecisionBudget,
    pub scaling_budget: i64,
    pub seed: u64,
    /// Run the derivative, reconstruction and series residuals per `λ`.
    pub identity_checks: bool,
}

impl CheckConfig {
    pub fn for_system(system: &OperatorSystem) -> Self {
        CheckConfig {
            lambdas: system.default_grid(),
            n_max: DEFAULT_N_MAX,
            k_max: DEFAULT_K_MAX,
            budget: PrecisionBudget::default(),
            scaling_budget: crate::linalg::DEFAULT_SCALING_BUDGET,
            seed: 0,
            identity_checks: true,
        }
    }

    /// Every sample must satisfy `0 < |λ| < p^r`.
    pub fn validate(&self, system: &OperatorSystem) -> Result<()> {
        if self.lambdas.is_empty() {
            return Err(PadicError::InvalidInput(format!(
                "the λ sample grid is empty: no sample lies in D(0, {}^{})*",
                system.prime(),
                system.declared_radius
            )));
        }
        for lam in &self.lambdas {
            if lam.prime() != system.prime() {
                return Err(PadicError::InvalidInput(format!("λ = {lam} is not over Q_{}", system.prime())));
            }
            if lam.is_zero() || lam.abs_exponent() >= Some(system.declared_radius) {
                return Err(PadicError::InvalidInput(format!(
                    "λ = {lam} is outside D(0,r)* = {{0 < |λ| < {}^{}}}",
                    system.prime(),
                    system.declared_radius
                )));
            }
        }
        if self.n_max == 0 {
            return Err(PadicError::InvalidInput("nMax must be at least 1".into()));
        }
        if self.k_max < system.a.dim() {
            return Err(PadicError::InvalidInput(format!(
                "kMax = {} must be at least the dimension {}",
                self.k_max,
                system.a.dim()
            )));
        }
        if self.scaling_budget < 0 {
            return Err(PadicError::InvalidInput("the scaling budget must be nonnegative".into()));
        }
        Ok(())
    }
}

/// How a family verdict is supported: only on the tested finite family, or
/// also by the oracle / the series bound for the whole semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    Certified,
    Grid,
}

impl Support {
    pub fn as_str(self) -> &'static str {
        match self {
            Support::Certified => "certified",
            Support::Grid => "grid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyVerdict {
    pub verdict: EquiContinuityVerdict,
    pub support: Support,
    /// Random vectors on which every witness inequality was re-checked.
    pub spot_checks: usize,
}

impl FamilyVerdict {
    pub fn status(&self) -> Status {
        self.verdict.status()
    }
}

/// One criterion matrix: its index `n`, sample `λ` and norm exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridNorm {
    pub lambda: PadicScalar,
    pub n: usize,
    pub norm: Exponent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionVerdict {
    pub family: FamilyVerdict,
    pub norms: Vec<GridNorm>,
}

/// `C = max_{k <= kMax} ‖B^k‖`, the constant of the forward bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForwardBound {
    pub constant: Exponent,
    pub stable_through: usize,
    pub stable: bool,
    pub max_s: Exponent,
    pub max_t: Exponent,
}

impl ForwardBound {
    pub fn holds(&self) -> bool {
        self.stable && self.max_s <= self.constant && self.max_t <= self.constant
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub check: &'static str,
    pub lambda: PadicScalar,
    pub n: u32,
    pub backend: Backend,
    pub exponent: Exponent,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictReport {
    pub oracle: PowerBound,
    pub powers: FamilyVerdict,
    pub power_norms: Vec<Exponent>,
    pub criterion_s: CriterionVerdict,
    pub criterion_t: CriterionVerdict,
    pub forward_bound: Option<ForwardBound>,
    pub residuals: Vec<Residual>,
    pub probes: Vec<Probe>,
    pub errors: Vec<String>,
}

impl VerdictReport {
    /// The three statuses coincide, as the theorems predict.
    pub fn agreement(&self) -> bool {
        let s = self.powers.status();
        s == self.criterion_s.family.status() && s == self.criterion_t.family.status()
    }

    pub fn residuals_pass(&self) -> bool {
        self.residuals.iter().all(|r| r.passes)
    }

    pub fn passed(&self) -> bool {
        self.agreement()
            && self.residuals_pass()
            && self.errors.is_empty()
            && self.forward_bound.as_ref().is_none_or(ForwardBound::holds)
            && self.probes.iter().all(Probe::stabilized)
    }
}

/// Horizons of the identity checks inside a verdict run.
const DERIVATIVE_N: usize = 4;
const RECONSTRUCTION_K: usize = 10;
const SERIES_N: usize = 3;
const PROBE_K: usize = 3;
const SPOT_VECTORS: usize = 16;

struct LambdaRun {
    s: Vec<PadicMatrix>,
    t: Vec<PadicMatrix>,
    residuals: Vec<Residual>,
    errors: Vec<String>,
}

/// The criteria at `λ` for `A`, and the identities for `B = A/ω` at
/// `z = λω`, where the unscaled theorems apply.
fn run_lambda(system: &OperatorSystem, config: &CheckConfig, lambda: &PadicScalar) -> LambdaRun {
    let mut run = LambdaRun { s: vec![], t: vec![], residuals: vec![], errors: vec![] };
    match criterion_sequences(&system.a, &system.omega, lambda, config.n_max) {
        Ok(seq) => {
            run.s = seq.s;
            run.t = seq.t;
        }
        Err(e) => run.errors.push(format!("criteria at λ = {lambda}: {e}")),
    }
    if !config.identity_checks {
        return run;
    }
    let a = &system.scaled();
    let z = &(lambda * &system.omega);
    let capped = config.budget.capped();
    let (ac, lc) = (a.to_backend(capped), z.to_backend(capped));
    let budget = &config.budget;
    let mut record = |check: &'static str, n: usize, backend: Backend, r: Result<Exponent>| match r {
        Ok(exponent) => {
            let passes = match backend {
                Backend::Exact => exponent.is_none(),
                Backend::Capped { .. } => budget.passes(exponent),
            };
            run.residuals.push(Residual { check, lambda: lambda.clone(), n: n as u32, backend, exponent, passes });
        }
        Err(e) => run.errors.push(format!("{check} at λ = {lambda}, n = {n} ({backend:?}): {e}")),
    };
    for n in 1..=config.n_max.min(DERIVATIVE_N) {
        record("derivative", n, Backend::Exact, check_derivative_formula(a, z, n as u32, budget));
        record("derivative", n, capped, check_derivative_formula(&ac, &lc, n as u32, budget));
    }
    for k in 0..=config.n_max.min(RECONSTRUCTION_K) {
        record("reconstruction", k, Backend::Exact, reconstruction_check(a, z, k as u32));
        record("reconstruction", k, capped, reconstruction_check(&ac, &lc, k as u32));
    }
    for n in 0..=config.n_max.min(SERIES_N) {
        let terms = 2 * budget.digits() as u64;
        record("series", n, Backend::Exact, series_identity_t(a, z, n as u32, n as u64 + 2, budget));
        record("series", n, capped, series_identity_t(&ac, &lc, n as u32, terms, budget));
    }
    run
}

/// Re-checks each witness on random integral vectors drawn from `rng`.
fn spot_check(
    verdict: &EquiContinuityVerdict,
    family: &[&PadicMatrix],
    seminorms: &SeminormFamily,
    rng: &mut ChaCha8Rng,
    errors: &mut Vec<String>,
    label: &str,
) -> usize {
    let EquiContinuityVerdict::Witnessed(ws) = verdict else { return 0 };
    let Some(first) = family.first() else { return 0 };
    let (p, d) = (first.prime(), first.dim());
    for _ in 0..SPOT_VECTORS {
        let x: Vec<PadicScalar> = (0..d)
            .map(|_| {
                let e: i64 = rng.gen_range(-2..=3);
                let u: i64 = rng.gen_range(-20..=20);
                &PadicScalar::prime_power(e, p, Backend::Exact) * &PadicScalar::from_int(u, p, Backend::Exact)
            })
            .collect();
        for w in ws {
            let bound = seminorms.eval(w.dominating, &x).map(|v| v + w.scale);
            if let Some(bad) = family.iter().position(|t| seminorms.eval(w.member, &t.apply(&x)) > bound) {
                errors.push(format!("{label}: witness for seminorm {} fails on operator {bad}", w.member));
                return SPOT_VECTORS;
            }
        }
    }
    SPOT_VECTORS
}

/// Runs every check on `system` over `config`'s grid.
pub fn hyp_verdict(system: &OperatorSystem, config: &CheckConfig, exec: Exec) -> Result<VerdictReport> {
    config.validate(system)?;
    let b = system.scaled();
    let oracle = power_bounded_oracle(&b);
    let mut errors = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // powers of B
    let powers: Vec<PadicMatrix> = {
        let mut out = vec![PadicMatrix::identity(b.dim(), b.prime(), Backend::Exact)];
        for _ in 0..config.n_max {
            out.push(out.last().expect("nonempty").matmul(&b));
        }
        out
    };
    let power_norms: Vec<Exponent> = powers.iter().map(PadicMatrix::norm_exponent).collect();
    let pv = equicontinuity_check(&powers, &system.seminorms, config.scaling_budget)?;
    let power_refs: Vec<&PadicMatrix> = powers.iter().collect();
    let spots = spot_check(&pv, &power_refs, &system.seminorms, &mut rng, &mut errors, "powers");
    let oracle_agrees = (pv.status() == Status::Witnessed) == (oracle == PowerBound::Bounded);
    let powers_verdict = FamilyVerdict {
        verdict: pv,
        support: if oracle_agrees { Support::Certified } else { Support::Grid },
        spot_checks: spots,
    };

    // criterion families over the grid
    let runs = exec.map(&config.lambdas, |lam| run_lambda(system, config, lam));
    let mut s_norms = Vec::new();
    let mut t_norms = Vec::new();
    let mut s_family: Vec<&PadicMatrix> = Vec::new();
    let mut t_family: Vec<&PadicMatrix> = Vec::new();
    let mut residuals = Vec::new();
    for (lam, run) in config.lambdas.iter().zip(&runs) {
        for (n, m) in run.s.iter().enumerate() {
            s_norms.push(GridNorm { lambda: lam.clone(), n, norm: m.norm_exponent() });
            s_family.push(m);
        }
        for (i, m) in run.t.iter().enumerate() {
            t_norms.push(GridNorm { lambda: lam.clone(), n: i + 1, norm: m.norm_exponent() });
            t_family.push(m);
        }
        residuals.extend(run.residuals.iter().cloned());
        errors.extend(run.errors.iter().cloned());
    }
    let owned = |f: &[&PadicMatrix]| -> Vec<PadicMatrix> { f.iter().map(|m| (*m).clone()).collect() };
    let sv = equicontinuity_check(&owned(&s_family), &system.seminorms, config.scaling_budget)?;
    let tv = equicontinuity_check(&owned(&t_family), &system.seminorms, config.scaling_budget)?;
    let s_spots = spot_check(&sv, &s_family, &system.seminorms, &mut rng, &mut errors, "S-criterion");
    let t_spots = spot_check(&tv, &t_family, &system.seminorms, &mut rng, &mut errors, "T-criterion");

    // the forward bound for oracle-bounded B
    let forward_bound = (oracle == PowerBound::Bounded).then(|| {
        let horizon = STABILITY_HORIZON.max(config.k_max);
        let norms = power_norm_exponents(&b, horizon);
        let constant = norms[..=config.k_max].iter().copied().max().flatten();
        let stable = norms.iter().copied().max().flatten() == constant;
        ForwardBound {
            constant,
            stable_through: horizon,
            stable,
            max_s: s_norms.iter().map(|g| g.norm).max().flatten(),
            max_t: t_norms.iter().map(|g| g.norm).max().flatten(),
        }
    });
    let certified = forward_bound.as_ref().is_some_and(ForwardBound::holds);
    let support_for = |v: &EquiContinuityVerdict| {
        if certified && v.status() == Status::Witnessed {
            Support::Certified
        } else {
            Support::Grid
        }
    };
    let criterion_s = CriterionVerdict {
        family: FamilyVerdict { support: support_for(&sv), verdict: sv, spot_checks: s_spots },
        norms: s_norms,
    };
    let criterion_t = CriterionVerdict {
        family: FamilyVerdict { support: support_for(&tv), verdict: tv, spot_checks: t_spots },
        norms: t_norms,
    };

    // λ -> 0 on B, inside its disk |z| < p^(r - v(ω))
    let r_b = system.declared_radius - system.omega.valuation().expect("nonzero");
    let m0 = (1 - r_b).max(1);
    let ms: Vec<i64> = (m0..m0 + 6).collect();
    let mut probes = Vec::new();
    for k in 1..=config.n_max.min(PROBE_K) {
        match lambda_to_zero_probe(&b, k as u32, &ms) {
            Ok(p) => probes.push(p),
            Err(e) => errors.push(format!("λ → 0 probe at k = {k}: {e}")),
        }
    }

    Ok(VerdictReport {
        oracle,
        powers: powers_verdict,
        power_norms,
        criterion_s,
        criterion_t,
        forward_bound,
        residuals,
        probes,
        errors,
    })
}
