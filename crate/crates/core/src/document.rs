//! JSON spec and report documents.
//!
//! Both are plain JSON objects whose keys are emitted in sorted order.
//! Rationals travel as `"num/den"` strings and absolute-value exponents as
//! integers, with `null` standing for `-inf`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::criteria::{
    hyp_verdict, CheckConfig, CriterionVerdict, FamilyVerdict, OperatorSystem, VerdictReport, DEFAULT_K_MAX,
    DEFAULT_N_MAX,
};
use crate::error::{PadicError, Result};
use crate::exec::Exec;
use crate::linalg::{EquiContinuityVerdict, PadicMatrix, SeminormFamily, DEFAULT_SCALING_BUDGET};
use crate::resolvent::{domain_radius_estimate, Radius};
use crate::scalar::{
    is_unit, parse_ratio, ratio_string, Backend, Exponent, PadicScalar, PrecisionBudget, Prime, DEFAULT_DIGITS,
    DEFAULT_SLACK,
};

pub const TOOL_NAME: &str = "padic-resolvent";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `λ = p^valuation * unit` with `unit` a p-adic unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSample {
    pub valuation: i64,
    pub unit: BigRational,
}

/// The parsed, not yet validated, spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecDocument {
    pub prime: u32,
    pub precision: u32,
    pub slack: u32,
    pub matrix: Vec<Vec<BigRational>>,
    pub omega: BigRational,
    /// Absent: `v(ω)` when `ω != 1`, else `min(0, certified radius)`.
    pub declared_radius_exponent: Option<i64>,
    /// Absent: the sup norm.
    pub seminorms: Option<Vec<Vec<Exponent>>>,
    /// Absent: the default grid of the system.
    pub lambdas: Option<Vec<LambdaSample>>,
    pub n_max: usize,
    pub k_max: usize,
    pub seed: u64,
    pub scaling_budget: i64,
}

const KEYS: &[&str] = &[
    "declared_radius_exponent",
    "k_max",
    "lambdas",
    "matrix",
    "n_max",
    "omega",
    "precision",
    "prime",
    "scaling_budget",
    "seed",
    "seminorms",
    "slack",
];

fn located(location: impl Into<String>, message: impl Into<String>) -> PadicError {
    PadicError::Parse { location: location.into(), message: message.into() }
}

fn as_int(v: &Value, at: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| located(at, format!("expected an integer, found {v}")))
}

fn as_uint(v: &Value, at: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| located(at, format!("expected a nonnegative integer, found {v}")))
}

fn as_u32(v: &Value, at: &str) -> Result<u32> {
    u32::try_from(as_uint(v, at)?).map_err(|_| located(at, "integer out of range"))
}

fn as_usize(v: &Value, at: &str) -> Result<usize> {
    usize::try_from(as_uint(v, at)?).map_err(|_| located(at, "integer out of range"))
}

fn as_ratio(v: &Value, at: &str) -> Result<BigRational> {
    let s = v.as_str().ok_or_else(|| located(at, format!("expected a rational string \"num/den\", found {v}")))?;
    parse_ratio(s).map_err(|e| located(at, e.to_string()))
}

fn as_array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| located(at, format!("expected an array, found {v}")))
}

fn exponent_json(e: Exponent) -> Value {
    e.map_or(Value::Null, Value::from)
}

fn as_exponent(v: &Value, at: &str) -> Result<Exponent> {
    if v.is_null() {
        Ok(None)
    } else {
        as_int(v, at).map(Some)
    }
}

impl SpecDocument {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let root: Value = serde_json::from_slice(bytes)
            .map_err(|e| located(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
        let obj = root.as_object().ok_or_else(|| located("$", "the spec must be a JSON object"))?;
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(located(k.as_str(), "unknown field"));
        }
        let field = |k: &str| obj.get(k).filter(|v| !v.is_null());
        let required = |k: &str| field(k).ok_or_else(|| located(k, "missing required field"));

        let prime = as_u32(required("prime")?, "prime")?;
        let rows = as_array(required("matrix")?, "matrix")?;
        let matrix = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                as_array(row, &format!("matrix[{i}]"))?
                    .iter()
                    .enumerate()
                    .map(|(j, v)| as_ratio(v, &format!("matrix[{i}][{j}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let seminorms = field("seminorms")
            .map(|v| {
                as_array(v, "seminorms")?
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        as_array(m, &format!("seminorms[{i}]"))?
                            .iter()
                            .enumerate()
                            .map(|(j, w)| as_exponent(w, &format!("seminorms[{i}][{j}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        let lambdas = field("lambdas")
            .map(|v| {
                as_array(v, "lambdas")?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        let at = format!("lambdas[{i}]");
                        let o = s.as_object().ok_or_else(|| located(&at, "expected {\"valuation\", \"unit\"}"))?;
                        if let Some(k) = o.keys().find(|k| *k != "valuation" && *k != "unit") {
                            return Err(located(format!("{at}.{k}"), "unknown field"));
                        }
                        let get = |k: &str| o.get(k).ok_or_else(|| located(format!("{at}.{k}"), "missing required field"));
                        Ok(LambdaSample {
                            valuation: as_int(get("valuation")?, &format!("{at}.valuation"))?,
                            unit: as_ratio(get("unit")?, &format!("{at}.unit"))?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        Ok(SpecDocument {
            prime,
            precision: field("precision").map(|v| as_u32(v, "precision")).transpose()?.unwrap_or(DEFAULT_DIGITS),
            slack: field("slack").map(|v| as_u32(v, "slack")).transpose()?.unwrap_or(DEFAULT_SLACK),
            matrix,
            omega: field("omega").map(|v| as_ratio(v, "omega")).transpose()?.unwrap_or_else(BigRational::one),
            declared_radius_exponent: field("declared_radius_exponent")
                .map(|v| as_int(v, "declared_radius_exponent"))
                .transpose()?,
            seminorms,
            lambdas,
            n_max: field("n_max").map(|v| as_usize(v, "n_max")).transpose()?.unwrap_or(DEFAULT_N_MAX),
            k_max: field("k_max").map(|v| as_usize(v, "k_max")).transpose()?.unwrap_or(DEFAULT_K_MAX),
            seed: field("seed").map(|v| as_uint(v, "seed")).transpose()?.unwrap_or(0),
            scaling_budget: field("scaling_budget")
                .map(|v| as_int(v, "scaling_budget"))
                .transpose()?
                .unwrap_or(DEFAULT_SCALING_BUDGET),
        })
    }

    /// Validates the document into a system and its check configuration.
    pub fn build(&self) -> Result<(OperatorSystem, CheckConfig)> {
        let prime = Prime::new(self.prime).map_err(|e| located("prime", e.to_string()))?;
        let d = self.matrix.len();
        if d == 0 {
            return Err(located("matrix", "the matrix must be nonempty"));
        }
        if let Some(i) = self.matrix.iter().position(|r| r.len() != d) {
            return Err(located(format!("matrix[{i}]"), format!("expected {d} entries (square matrix)")));
        }
        let budget = PrecisionBudget::new(self.precision, self.slack).map_err(|e| located("precision", e.to_string()))?;
        let a = PadicMatrix::from_rationals(&self.matrix, prime, Backend::Exact)?;
        let omega = PadicScalar::from_ratio(&self.omega, prime, Backend::Exact);
        if omega.is_zero() {
            return Err(located("omega", "ω must be nonzero (ω ∈ K*)"));
        }
        let seminorms = match &self.seminorms {
            Some(m) => SeminormFamily::new(d, m.clone()).map_err(|e| located("seminorms", e.to_string()))?,
            None => SeminormFamily::sup(d),
        };
        if self.k_max < d {
            return Err(located("k_max", format!("kMax = {} must be at least the dimension {d}", self.k_max)));
        }
        let r = match self.declared_radius_exponent {
            Some(r) => r,
            None if self.omega.is_one() => {
                domain_radius_estimate(&a, self.k_max)?.radius.exponent().map_or(0, |r| r.min(0))
            }
            None => omega.valuation().expect("nonzero"),
        };
        let system = OperatorSystem::new(a, omega, r, seminorms, self.k_max)?;
        let mut config = CheckConfig::for_system(&system);
        if let Some(samples) = &self.lambdas {
            config.lambdas = samples
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    if !is_unit(&s.unit, prime) {
                        return Err(located(format!("lambdas[{i}].unit"), format!("{} is not a {prime}-adic unit", ratio_string(&s.unit))));
                    }
                    let pv = PadicScalar::prime_power(s.valuation, prime, Backend::Exact);
                    Ok(&pv * &PadicScalar::from_ratio(&s.unit, prime, Backend::Exact))
                })
                .collect::<Result<Vec<_>>>()?;
        }
        config.n_max = self.n_max;
        config.k_max = self.k_max;
        config.budget = budget;
        config.scaling_budget = self.scaling_budget;
        config.seed = self.seed;
        config.validate(&system)?;
        Ok((system, config))
    }

    /// The document describing `system` checked under `config`, with every
    /// defaulted field written out.
    pub fn from_system(system: &OperatorSystem, config: &CheckConfig) -> Self {
        let p = system.prime();
        let pz = BigRational::from_integer(BigInt::from(p.get()));
        let lambdas = config
            .lambdas
            .iter()
            .map(|l| {
                let v = l.valuation().expect("grid points are nonzero");
                let unit = l.to_rational() / pow_ratio(&pz, v);
                LambdaSample { valuation: v, unit }
            })
            .collect();
        SpecDocument {
            prime: p.get(),
            precision: config.budget.digits(),
            slack: config.budget.slack(),
            matrix: system.matrix().to_rationals(),
            omega: system.omega().to_rational(),
            declared_radius_exponent: Some(system.declared_radius()),
            seminorms: Some(system.seminorms().members().to_vec()),
            lambdas: Some(lambdas),
            n_max: config.n_max,
            k_max: config.k_max,
            seed: config.seed,
            scaling_budget: config.scaling_budget,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        o.insert("prime".into(), self.prime.into());
        o.insert("precision".into(), self.precision.into());
        o.insert("slack".into(), self.slack.into());
        o.insert(
            "matrix".into(),
            self.matrix.iter().map(|r| r.iter().map(ratio_string).collect::<Vec<_>>()).collect::<Vec<_>>().into(),
        );
        o.insert("omega".into(), ratio_string(&self.omega).into());
        if let Some(r) = self.declared_radius_exponent {
            o.insert("declared_radius_exponent".into(), r.into());
        }
        if let Some(s) = &self.seminorms {
            let v: Vec<Value> = s.iter().map(|m| m.iter().copied().map(exponent_json).collect()).collect();
            o.insert("seminorms".into(), v.into());
        }
        if let Some(ls) = &self.lambdas {
            let v: Vec<Value> =
                ls.iter().map(|l| json!({"valuation": l.valuation, "unit": ratio_string(&l.unit)})).collect();
            o.insert("lambdas".into(), v.into());
        }
        o.insert("n_max".into(), self.n_max.into());
        o.insert("k_max".into(), self.k_max.into());
        o.insert("seed".into(), self.seed.into());
        o.insert("scaling_budget".into(), self.scaling_budget.into());
        Value::Object(o)
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_canonical_string(&self) -> String {
        canonical(&self.to_json())
    }
}

fn pow_ratio(base: &BigRational, e: i64) -> BigRational {
    let m = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        m
    } else {
        m.recip()
    }
}

/// `serde_json::Map` is a `BTreeMap` here, so keys come out sorted.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn parse_spec(bytes: &[u8]) -> Result<(OperatorSystem, CheckConfig)> {
    SpecDocument::parse(bytes)?.build()
}

/// Exit status of a `check` run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    /// A verdict disagreement, failing residual or recorded check error.
    Finding = 1,
    Invalid = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn of(err: &PadicError) -> Self {
        match err {
            PadicError::Consistency(_) => ExitStatus::Finding,
            _ => ExitStatus::Invalid,
        }
    }
}

pub struct ReportDocument {
    pub json: Value,
    pub status: ExitStatus,
}

impl ReportDocument {
    pub fn to_canonical_string(&self) -> String {
        canonical(&self.json)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn ratio_opt(r: Option<num_rational::Ratio<i64>>) -> Value {
    r.map_or(Value::Null, |r| if *r.denom() == 1 { r.numer().to_string() } else { r.to_string() }.into())
}

fn verdict_json(v: &EquiContinuityVerdict) -> Value {
    match v {
        EquiContinuityVerdict::Witnessed(ws) => json!({
            "status": "witnessed",
            "witnesses": ws.iter().map(|w| json!({
                "member": w.member,
                "dominating": w.dominating,
                "scale": w.scale,
            })).collect::<Vec<_>>(),
            "refutation": null,
        }),
        EquiContinuityVerdict::Refuted(r) => json!({
            "status": "refuted",
            "witnesses": [],
            "refutation": {
                "member": r.member,
                "closest": r.closest,
                "basis_vector": r.basis_vector,
                "operator": r.operator,
                "needed_scale": r.needed_scale,
            },
        }),
    }
}

fn family_json(f: &FamilyVerdict) -> Value {
    let mut v = verdict_json(&f.verdict);
    let o = v.as_object_mut().expect("object");
    o.insert("support".into(), f.support.as_str().into());
    o.insert("spot_checks".into(), f.spot_checks.into());
    v
}

fn criterion_json(c: &CriterionVerdict) -> Value {
    let mut v = family_json(&c.family);
    let norms: Vec<Value> = c
        .norms
        .iter()
        .map(|g| json!({"lambda": g.lambda.rational_string(), "n": g.n, "norm_exponent": exponent_json(g.norm)}))
        .collect();
    v.as_object_mut().expect("object").insert("norms".into(), norms.into());
    v
}

fn backend_str(b: Backend) -> String {
    match b {
        Backend::Exact => "exact".into(),
        Backend::Capped { digits } => format!("capped-{digits}"),
    }
}

/// The report for `report` on `system`; `input` is the spec as read, for the
/// digest.
pub fn report_json(system: &OperatorSystem, config: &CheckConfig, report: &VerdictReport, input: &[u8]) -> ReportDocument {
    let dom = system.domain();
    let status = if report.passed() { ExitStatus::Pass } else { ExitStatus::Finding };
    let json = json!({
        "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        "input": {
            "sha256": sha256_hex(input),
            "prime": system.prime().get(),
            "dimension": system.matrix().dim(),
            "omega": system.omega().rational_string(),
            "declared_radius_exponent": system.declared_radius(),
            "lambdas": config.lambdas.iter().map(PadicScalar::rational_string).collect::<Vec<_>>(),
            "n_max": config.n_max,
            "k_max": config.k_max,
            "precision": config.budget.digits(),
            "slack": config.budget.slack(),
            "tolerance_exponent": config.budget.tolerance_exponent(),
            "scaling_budget": config.scaling_budget,
            "seed": config.seed,
        },
        "domain": {
            "certified_radius_exponent": match dom.radius {
                Radius::Finite(r) => Value::from(r),
                Radius::Infinite => Value::from("inf"),
            },
            "spectral_growth": ratio_opt(dom.growth),
            "observed_slope": ratio_opt(dom.observed_slope),
        },
        "oracle": report.oracle.as_str(),
        "powers": {
            "verdict": family_json(&report.powers),
            "norm_exponents": report.power_norms.iter().copied().map(exponent_json).collect::<Vec<_>>(),
        },
        "criterion_s": criterion_json(&report.criterion_s),
        "criterion_t": criterion_json(&report.criterion_t),
        "forward_bound": report.forward_bound.as_ref().map_or(Value::Null, |f| json!({
            "constant": exponent_json(f.constant),
            "stable_through": f.stable_through,
            "stable": f.stable,
            "max_s": exponent_json(f.max_s),
            "max_t": exponent_json(f.max_t),
            "holds": f.holds(),
        })),
        "residuals": report.residuals.iter().map(|r| json!({
            "check": r.check,
            "lambda": r.lambda.rational_string(),
            "n": r.n,
            "backend": backend_str(r.backend),
            "exponent": exponent_json(r.exponent),
            "passes": r.passes,
        })).collect::<Vec<_>>(),
        "probes": report.probes.iter().map(|p| json!({
            "k": p.k,
            "m": p.ms,
            "values": p.values.iter().copied().map(exponent_json).collect::<Vec<_>>(),
            "limit": exponent_json(p.limit),
            "stabilized": p.stabilized(),
        })).collect::<Vec<_>>(),
        "agreement": report.agreement(),
        "residuals_pass": report.residuals_pass(),
        "errors": report.errors,
        "status": if status == ExitStatus::Pass { "pass" } else { "fail" },
    });
    ReportDocument { json, status }
}

pub fn run_and_report(system: &OperatorSystem, config: &CheckConfig, input: &[u8], exec: Exec) -> Result<ReportDocument> {
    let report = hyp_verdict(system, config, exec)?;
    Ok(report_json(system, config, &report, input))
}
