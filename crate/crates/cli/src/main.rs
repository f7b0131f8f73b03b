use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use padic_resolvent::criteria::CheckConfig;
use padic_resolvent::document::{run_and_report, ExitStatus, SpecDocument};
use padic_resolvent::instances::{generate_instance, InstanceKind};
use padic_resolvent::scalar::parse_ratio;
use padic_resolvent::{suite, Exec, Prime};

#[derive(Parser)]
#[command(name = "padic-resolvent", version, about = "Resolvent equi-continuity checks for operators over Q_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a spec and write the report. Exit 0 = pass, 1 = finding, 2 = invalid input.
    Check {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        /// Digits of the capped backend.
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Evaluate the λ grid on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Write a spec for a generated instance.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Comma-separated `key=value`; lists use `:`, e.g. `d=3,p=2,superdiagonal=1/2:4`.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance suite and the golden comparisons.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    RandomBounded,
    StaircaseShift,
    Jordan,
    Diagonal,
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(s: &str) -> anyhow::Result<Self> {
        let mut map = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| anyhow!("parameter {part:?} is not key=value"))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                bail!("parameter {k:?} given twice");
            }
        }
        Ok(Params(map))
    }

    fn take(&mut self, key: &str) -> anyhow::Result<String> {
        self.0.remove(key).ok_or_else(|| anyhow!("missing parameter {key:?}"))
    }

    fn int<T: std::str::FromStr>(&mut self, key: &str) -> anyhow::Result<T> {
        let v = self.take(key)?;
        v.parse().map_err(|_| anyhow!("parameter {key:?}: {v:?} is not a valid integer"))
    }

    fn ratio(&mut self, key: &str) -> anyhow::Result<BigRational> {
        parse_ratio(&self.take(key)?).with_context(|| format!("parameter {key:?}"))
    }

    fn ratios(&mut self, key: &str) -> anyhow::Result<Vec<BigRational>> {
        let v = self.take(key)?;
        v.split(':')
            .filter(|s| !s.is_empty())
            .map(|s| parse_ratio(s).with_context(|| format!("parameter {key:?}")))
            .collect()
    }

    fn finish(self) -> anyhow::Result<()> {
        match self.0.keys().next() {
            Some(k) => bail!("unknown parameter {k:?}"),
            None => Ok(()),
        }
    }
}

fn instance_kind(kind: Kind, params: &str) -> anyhow::Result<InstanceKind> {
    let mut p = Params::parse(params)?;
    let prime = Prime::new(p.int("p")?)?;
    let kind = match kind {
        Kind::RandomBounded => InstanceKind::RandomBounded { dim: p.int("d")?, prime, seed: p.int("seed")? },
        Kind::StaircaseShift => {
            InstanceKind::StaircaseShift { dim: p.int("d")?, prime, superdiagonal: p.ratios("superdiagonal")? }
        }
        Kind::Jordan => InstanceKind::Jordan { dim: p.int("d")?, prime, eigen: p.ratio("eigen")? },
        Kind::Diagonal => InstanceKind::Diagonal { prime, entries: p.ratios("entries")? },
    };
    p.finish()?;
    Ok(kind)
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[allow(clippy::too_many_arguments)]
fn check(
    spec: &Path,
    report: &Path,
    n_max: Option<usize>,
    k_max: Option<usize>,
    precision: Option<u32>,
    seed: Option<u64>,
    exec: Exec,
) -> anyhow::Result<ExitStatus> {
    let bytes = fs::read(spec).with_context(|| format!("reading {}", spec.display()))?;
    let mut doc = SpecDocument::parse(&bytes)?;
    doc.n_max = n_max.unwrap_or(doc.n_max);
    doc.k_max = k_max.unwrap_or(doc.k_max);
    doc.precision = precision.unwrap_or(doc.precision);
    doc.seed = seed.unwrap_or(doc.seed);
    let (system, config) = doc.build()?;
    let rep = run_and_report(&system, &config, &bytes, exec)?;
    write(report, &rep.to_canonical_string())?;
    Ok(rep.status)
}

struct Golden {
    name: &'static str,
    spec: &'static str,
    report: &'static str,
}

const GOLDENS: [Golden; 3] = [
    Golden {
        name: "jordan",
        spec: include_str!("../tests/golden/jordan.spec.json"),
        report: include_str!("../tests/golden/jordan.report.json"),
    },
    Golden {
        name: "staircase",
        spec: include_str!("../tests/golden/staircase.spec.json"),
        report: include_str!("../tests/golden/staircase.report.json"),
    },
    Golden {
        name: "scaled-diagonal",
        spec: include_str!("../tests/golden/scaled_diagonal.spec.json"),
        report: include_str!("../tests/golden/scaled_diagonal.report.json"),
    },
];

fn golden_mismatches() -> Vec<String> {
    GOLDENS
        .iter()
        .filter_map(|g| {
            let got = padic_resolvent::document::parse_spec(g.spec.as_bytes())
                .and_then(|(s, c)| run_and_report(&s, &c, g.spec.as_bytes(), Exec::Parallel));
            match got {
                Ok(r) if r.to_canonical_string() == g.report && r.status == ExitStatus::Pass => None,
                Ok(_) => Some(format!("{}: report differs from the golden", g.name)),
                Err(e) => Some(format!("{}: {e}", g.name)),
            }
        })
        .collect()
}

fn selftest() -> bool {
    let mut ok = true;
    for outcome in suite::run_all(Exec::Parallel) {
        println!("{outcome}");
        ok &= outcome.passed;
    }
    let bad = golden_mismatches();
    println!(
        "criterion 9 [{}] golden reports: {} of {} in-process reports match{}",
        if bad.is_empty() { "PASS" } else { "FAIL" },
        GOLDENS.len() - bad.len(),
        GOLDENS.len(),
        if bad.is_empty() { String::new() } else { format!("; {}", bad.join(" | ")) }
    );
    ok && bad.is_empty()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { spec, report, n_max, k_max, precision, seed, sequential } => {
            let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
            match check(&spec, &report, n_max, k_max, precision, seed, exec) {
                Ok(status) => {
                    if status != ExitStatus::Pass {
                        eprintln!("check finished with findings; see {}", report.display());
                    }
                    ExitCode::from(status.code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    let status = e.downcast_ref().map_or(ExitStatus::Invalid, ExitStatus::of);
                    ExitCode::from(status.code() as u8)
                }
            }
        }
        Command::Generate { kind, params, out } => {
            let run = || -> anyhow::Result<()> {
                let system = generate_instance(&instance_kind(kind, &params)?, 200)?;
                let config = CheckConfig::for_system(&system);
                write(&out, &SpecDocument::from_system(&system, &config).to_canonical_string())
            };
            match run() {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(ExitStatus::Invalid.code() as u8)
                }
            }
        }
        Command::Selftest => {
            if selftest() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
